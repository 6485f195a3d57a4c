#pragma once

namespace slaen {

// Shot-noise unit convention: vacuum quadrature variance is 1/4.
inline constexpr double kVacuumVariance = 0.25;

// Labeling convention used everywhere: sign(0) = +1.
inline int sign_pm(double x) { return x >= 0.0 ? +1 : -1; }

}  // namespace slaen
