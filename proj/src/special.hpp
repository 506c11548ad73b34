#pragma once

// Small-argument-safe elementary helpers shared by the model sources.

#include <cmath>

namespace aimd::detail {

/// e^{-x} - 1 + x without cancellation near zero.
inline double em1x(double x) {
  if (std::abs(x) < 1e-2) {
    const double x2 = x * x;
    return x2 * (0.5 - x / 6.0 + x2 / 24.0 - x2 * x / 120.0 + x2 * x2 / 720.0 -
                 x2 * x2 * x / 5040.0);
  }
  return std::expm1(-x) + x;
}

/// (1 - e^{-s}) / s, equal to 1 at s = 0.
inline double one_minus_exp_over(double s) {
  if (s == 0.0) return 1.0;
  return -std::expm1(-s) / s;
}

/// u - ln(1 + u) without cancellation near zero.
inline double u_minus_log1p(double u) {
  if (std::abs(u) < 1e-2) {
    double term = u;
    double sum = 0.0;
    for (int n = 2; n <= 12; ++n) {
      term *= -u;
      sum -= term / n;
    }
    return sum;
  }
  return u - std::log1p(u);
}

/// s / (1 - e^{-s}) - 1, which is s/2 + O(s^2) near zero.
inline double gamma_minus_one(double s) {
  if (s == 0.0) return 0.0;
  return em1x(s) / -std::expm1(-s);
}

}  // namespace aimd::detail
