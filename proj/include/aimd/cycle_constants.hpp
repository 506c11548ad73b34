#pragma once

#include <map>
#include <optional>

#include "aimd/extended.hpp"

namespace aimd {

/// Every (beta, q)-dependent constant used by the cycle classification.
struct DerivedConstants {
  double beta = 0.0;
  double q = 0.0;
  int N = 1;
  double D = 0.0;
  double C = 0.0;
  std::map<int, double> theta;  // k = N, N+1
  std::map<int, double> b0;     // k = N, N+1
  std::map<int, Extended> tau;     // k = 1 .. max(N+1, 2)
  std::map<int, Extended> A_star;  // same keys as tau
  std::map<int, Extended> q_star;  // same keys as tau
  std::optional<double> r_lo, r_hi;
  std::optional<double> b_lo, b_hi;
};

/// Smallest i >= 1 with beta^i / (1 - beta^i) < q.
int compute_N(double beta, double q);

struct DC {
  double D = 0.0;
  double C = 0.0;
};
DC compute_D_C(double beta, int N);

/// Positive root theta of ln(theta / (1 - e^{-theta})) + p theta = q - p,
/// p = beta^k / (1 - beta^k). Throws std::domain_error if q <= p.
double solve_theta(double beta, double q, int k);

/// gamma - ln(gamma) - 1 with gamma = theta / (1 - e^{-theta}).
double b0_of_theta(double theta);

/// Critical buffer b_{0,k}: the buffer at which a k-cycle just touches y = 0.
double critical_buffer(double beta, double q, int k);

/// tau_k for k >= 2; +infinity for k = 1.
Extended solve_tau(double beta, int k);

/// Upper end of A = b + q for which an unclipped k-cycle exists.
Extended a_star(double beta, int k);

Extended q_star(double beta, int k);

struct RRoots {
  double r_lo = 0.0;
  double r_hi = 0.0;
  double b_lo = 0.0;
  double b_hi = 0.0;
};

/// The up-to-two positive roots of e^{-r} + r - 1 = beta^N (q + r + 1) - q,
/// and the buffers they correspond to. nullopt when q exceeds D.
std::optional<RRoots> solve_r_roots(double beta, double q, int N);

/// Width of the window around the minimum of the root equation that is
/// treated as a double root.
inline constexpr double kDoubleRootWindow = 1e-12;

DerivedConstants compute_constants(double beta, double q);

}  // namespace aimd
