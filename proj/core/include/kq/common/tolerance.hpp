#pragma once

#include <algorithm>
#include <cmath>
#include <span>

namespace kq {

// Zero verdicts are scale-free: |r| <= rel * (1 + scale), where scale is the
// magnitude of the inputs that produced r.
inline constexpr double kZeroTolerance = 1e-9;

inline bool is_negligible(double residual, double scale,
                          double rel = kZeroTolerance) {
  return std::abs(residual) <= rel * (1.0 + std::abs(scale));
}

inline double max_abs(std::span<const double> values) {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace kq
