#pragma once

#include <utility>
#include <vector>

namespace aimd {

/// Smallest buffer giving full utilisation, B_{0,N} = m b_{0,N}, in the
/// units of mu_T and m. N is the smallest cycle order for q = mu_T / m.
double b_min(double mu_T, double beta, double m);

/// Same with the cycle order forced, for evaluating both sides of a breakpoint.
double b_min_order(double mu_T, double beta, double m, int N);

/// m_i = mu_T (1 - beta^i) / beta^i, where the smallest cycle order steps
/// from i to i + 1.
double breakpoint(double mu_T, double beta, int i);

/// (1 - beta)^2 mu_T^2 / (2 m), which the local maxima of b_min approach.
double envelope(double mu_T, double beta, double m);

struct BufferSample {
  double m = 0.0;
  int N = 1;
  double B0 = 0.0;
  double envelope = 0.0;
};

struct BufferCurve {
  double mu_T = 0.0;
  double beta = 0.0;
  std::vector<BufferSample> samples;  // ascending m
  std::vector<double> breakpoints;    // those inside the sampled range
};

/// Log-spaced samples on [m_lo, m_hi] with each breakpoint m_i in range
/// added twice: at m_i and just below it, to show the upward jump.
BufferCurve buffer_curve(double mu_T, double beta, double m_lo, double m_hi, int samples,
                         int threads = 1);

/// Two increments m_a < m_b with b_min(m_a) < b_min(m_b), straddling m_1.
std::pair<double, double> non_monotonicity_witness(double mu_T, double beta);

}  // namespace aimd
