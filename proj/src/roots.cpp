#include "aimd/roots.hpp"

#include <algorithm>
#include <sstream>
#include <utility>

#include <boost/math/policies/policy.hpp>
#include <boost/math/tools/toms748_solve.hpp>

namespace aimd::roots {

namespace {

// Errors are surfaced through our own checks, not boost's throw policy.
using QuietPolicy = boost::math::policies::policy<
    boost::math::policies::evaluation_error<boost::math::policies::ignore_error>>;

}  // namespace

double solve_bracketed(const std::function<double(double)>& f, double lo, double hi,
                       const Tolerance& tol) {
  return solve_bracketed(f, lo, hi, f(lo), f(hi), tol);
}

double solve_bracketed(const std::function<double(double)>& f, double lo, double hi, double f_lo,
                       double f_hi, const Tolerance& tol) {
  if (lo > hi) {
    std::swap(lo, hi);
    std::swap(f_lo, f_hi);
  }
  if (!std::isfinite(f_lo) || !std::isfinite(f_hi)) {
    std::ostringstream os;
    os << "non-finite bracket values f(" << lo << ")=" << f_lo << ", f(" << hi << ")=" << f_hi;
    throw RootFindError(os.str());
  }
  if (f_lo == 0.0) return lo;
  if (f_hi == 0.0) return hi;
  if ((f_lo > 0.0) == (f_hi > 0.0)) {
    std::ostringstream os;
    os.precision(17);
    os << "no sign change on [" << lo << ", " << hi << "]: f=" << f_lo << ", " << f_hi;
    throw RootFindError(os.str());
  }

  constexpr double eps = std::numeric_limits<double>::epsilon();
  auto narrow = [](double a, double b) {
    return std::abs(b - a) <= 4.0 * eps * std::max({std::abs(a), std::abs(b), 1e-300});
  };

  std::uintmax_t iters = tol.max_iter;
  auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, f_lo, f_hi, narrow, iters,
                                                  QuietPolicy());
  const double fa = f(a);
  const double fb = f(b);
  const double root = std::abs(fa) <= std::abs(fb) ? a : b;
  const double residual = std::min(std::abs(fa), std::abs(fb));

  // Large roots cannot be pinned to an absolute width below their ulp spacing.
  const double x_tol = std::max(tol.x_abs, 8.0 * eps * std::abs(root));
  if (std::abs(b - a) <= x_tol || residual <= tol.f_abs) return root;

  std::ostringstream os;
  os.precision(17);
  os << "root finder did not converge after " << iters << " iterations: bracket [" << a << ", "
     << b << "], residual " << residual;
  throw RootFindError(os.str());
}

double grow_upper_bracket(const std::function<double(double)>& f, double f_lo, double start,
                          int max_doublings) {
  double x = start;
  for (int i = 0; i < max_doublings; ++i) {
    const double fx = f(x);
    if (fx == 0.0 || (fx > 0.0) != (f_lo > 0.0)) return x;
    x *= 2.0;
    if (!std::isfinite(x)) break;
  }
  std::ostringstream os;
  os << "could not bracket a root above " << start;
  throw RootFindError(os.str());
}

}  // namespace aimd::roots
