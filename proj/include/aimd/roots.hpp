#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>

namespace aimd::roots {

class RootFindError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Tolerance {
  double x_abs = 1e-12;  // absolute tolerance on the argument
  double f_abs = 1e-12;  // absolute tolerance on the residual
  std::uintmax_t max_iter = 200;
};

/// Root of a continuous `f` on [lo, hi] given a sign change f(lo)*f(hi) <= 0.
///
/// The bracket is shrunk (TOMS 748, a Brent-class bracketing method) until
/// it is a few ulps wide or `tol.max_iter` is hit. Convergence is then
/// certified against `tol`: either the final bracket is narrower than
/// `tol.x_abs` or the residual is below `tol.f_abs`. Throws RootFindError
/// otherwise, or when there is no sign change.
double solve_bracketed(const std::function<double(double)>& f, double lo, double hi,
                       const Tolerance& tol = {});

/// Same, with f(lo) and f(hi) already known.
double solve_bracketed(const std::function<double(double)>& f, double lo, double hi, double f_lo,
                       double f_hi, const Tolerance& tol = {});

/// Grows `start` geometrically (x2) until `f` changes sign relative to
/// `f_lo`; returns the first such point. Throws after `max_doublings`.
double grow_upper_bracket(const std::function<double(double)>& f, double f_lo, double start,
                          int max_doublings = 1100);

}  // namespace aimd::roots
