#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace slaen {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001B3ull;
  }
  return h;
}

// One master seed expanded into named substreams ("data", "noise", "spsa",
// "init", ...), optionally indexed per trial. Changing how one consumer
// draws never shifts another consumer's stream.
struct RngStreams {
  std::uint64_t master = 0;

  std::uint64_t child_seed(std::string_view name, std::uint64_t index = 0) const {
    return splitmix64(master ^ fnv1a64(name) ^ splitmix64(index));
  }

  Rng stream(std::string_view name, std::uint64_t index = 0) const {
    return Rng(child_seed(name, index));
  }
};

}  // namespace slaen
