#include "aimd/cycle_constants.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "aimd/model.hpp"
#include "aimd/roots.hpp"
#include "special.hpp"

namespace aimd {

namespace {

void check_beta(double beta) {
  if (!(beta > 0.0 && beta < 1.0)) throw std::invalid_argument("beta must lie in (0, 1)");
}

}  // namespace

int compute_N(double beta, double q) {
  check_beta(beta);
  if (!(q > 0.0)) throw std::invalid_argument("q must be positive");
  constexpr int kCap = 1000000;
  double bi = 1.0;
  for (int i = 1; i <= kCap; ++i) {
    bi *= beta;
    if (bi / (1.0 - bi) < q) return i;
  }
  throw std::domain_error("compute_N: iteration cap exceeded");
}

DC compute_D_C(double beta, int N) {
  check_beta(beta);
  const double bn = std::pow(beta, N);
  const double l = std::log1p(-bn);
  return DC{l + 2.0 * bn / (1.0 - bn), -l - bn};
}

double solve_theta(double beta, double q, int k) {
  check_beta(beta);
  const double p = window_ratio_finite(beta, k);
  if (!(q > p)) {
    throw std::domain_error("no critical " + std::to_string(k) + "-cycle: q must exceed " +
                            std::to_string(p));
  }
  const double rhs = q - p;
  auto f = [&](double th) { return std::log1p(detail::gamma_minus_one(th)) + p * th - rhs; };
  // ln(gamma) >= 0, so p * hi > rhs already.
  const double hi = rhs / p + 1.0;
  return roots::solve_bracketed(f, 0.0, hi, -rhs, f(hi));
}

double b0_of_theta(double theta) {
  if (!(theta > 0.0)) throw std::invalid_argument("b0_of_theta needs theta > 0");
  return detail::u_minus_log1p(detail::gamma_minus_one(theta));
}

double critical_buffer(double beta, double q, int k) {
  return b0_of_theta(solve_theta(beta, q, k));
}

Extended solve_tau(double beta, int k) {
  check_beta(beta);
  if (k < 2) return Extended::infinity();
  const double bk = std::pow(beta, k);
  const double alpha = (std::pow(beta, k - 1) - bk) / (1.0 - bk);
  auto g = [alpha](double t) {
    return detail::one_minus_exp_over(t) * (1.0 + alpha * (t + 1.0)) - 1.0;
  };
  // g(0) = alpha > 0 and g(t) <= (1 + alpha (t + 1)) / t - 1 < 0 past this point.
  const double hi = (1.0 + alpha) / (1.0 - alpha) + 1.0;
  return roots::solve_bracketed(g, 0.0, hi);
}

Extended a_star(double beta, int k) {
  const Extended tau = solve_tau(beta, k);
  if (tau.is_infinite()) return Extended::infinity();
  const double bk = std::pow(beta, k);
  return std::pow(beta, k - 1) * (tau.value() + 1.0) / (1.0 - bk);
}

Extended q_star(double beta, int k) {
  const Extended tau = solve_tau(beta, k);
  if (tau.is_infinite()) return Extended::infinity();
  const double t = tau.value();
  return window_ratio_finite(beta, k) * (t + 1.0) + std::log1p(detail::gamma_minus_one(t));
}

std::optional<RRoots> solve_r_roots(double beta, double q, int N) {
  check_beta(beta);
  const double bn = std::pow(beta, N);
  auto delta = [&](double r) { return detail::em1x(r) + q - bn * (q + r + 1.0); };
  const double r_m = -std::log1p(-bn);
  const double dmin = delta(r_m);
  if (dmin > kDoubleRootWindow) return std::nullopt;
  RRoots out;
  if (dmin >= -kDoubleRootWindow) {
    out.r_lo = out.r_hi = r_m;
  } else {
    const double d0 = delta(0.0);
    if (d0 <= 0.0) {
      // Only when q <= beta^N / (1 - beta^N), which the choice of N rules out.
      throw std::domain_error("solve_r_roots: q is not above beta^N / (1 - beta^N)");
    }
    out.r_lo = roots::solve_bracketed(delta, 0.0, r_m, d0, dmin);
    const double hi = roots::grow_upper_bracket(delta, dmin, 2.0 * r_m + 1.0);
    out.r_hi = roots::solve_bracketed(delta, r_m, hi, dmin, delta(hi));
  }
  out.b_lo = detail::em1x(out.r_lo);
  out.b_hi = detail::em1x(out.r_hi);
  return out;
}

DerivedConstants compute_constants(double beta, double q) {
  DerivedConstants c;
  c.beta = beta;
  c.q = q;
  c.N = compute_N(beta, q);
  const DC dc = compute_D_C(beta, c.N);
  c.D = dc.D;
  c.C = dc.C;
  for (int k : {c.N, c.N + 1}) {
    c.theta[k] = solve_theta(beta, q, k);
    c.b0[k] = b0_of_theta(c.theta[k]);
  }
  const int kmax = std::max(c.N + 1, 2);
  for (int k = 1; k <= kmax; ++k) {
    c.tau.emplace(k, solve_tau(beta, k));
    c.A_star.emplace(k, a_star(beta, k));
    c.q_star.emplace(k, q_star(beta, k));
  }
  if (q <= c.D + kDoubleRootWindow) {
    if (auto rr = solve_r_roots(beta, q, c.N)) {
      c.r_lo = rr->r_lo;
      c.r_hi = rr->r_hi;
      c.b_lo = rr->b_lo;
      c.b_hi = rr->b_hi;
    }
  }
  return c;
}

}  // namespace aimd
