#pragma once

#include <cmath>
#include <numbers>

namespace hestonabc {

// erfc keeps full relative accuracy in both tails, well below the 1e-15
// absolute error the boundary quadratures rely on.
inline double normal_cdf(double x) {
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

inline double normal_pdf(double x) {
  return std::exp(-0.5 * x * x) * (0.5 * std::numbers::inv_sqrtpi * std::numbers::sqrt2);
}

}  // namespace hestonabc
