#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>

#include "slaen/errors.hpp"

namespace slaen {

// Shortest round-trip-exact decimal form; identical doubles give identical text.
inline std::string fmt_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

class CsvWriter {
 public:
  explicit CsvWriter(const std::filesystem::path& path) : out_(path) {
    if (!out_) throw IoError("cannot open " + path.string() + " for writing");
  }

  CsvWriter& cell(std::string_view s) {
    if (!first_) out_ << ',';
    out_ << s;
    first_ = false;
    return *this;
  }
  CsvWriter& cell(double x) { return cell(fmt_double(x)); }
  CsvWriter& cell(long long x) { return cell(std::to_string(x)); }
  CsvWriter& cell(int x) { return cell(std::to_string(x)); }

  void endrow() {
    out_ << '\n';
    first_ = true;
  }

  void close() {
    out_.close();
    if (out_.fail()) throw IoError("write failed while closing csv");
  }

 private:
  std::ofstream out_;
  bool first_ = true;
};

}  // namespace slaen
