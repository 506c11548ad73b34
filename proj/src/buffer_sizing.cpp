#include "aimd/buffer_sizing.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "aimd/cycle_constants.hpp"
#include "parallel.hpp"

namespace aimd {

namespace {

void check(double mu_T, double beta, double m) {
  if (!(mu_T > 0.0)) throw std::invalid_argument("mu_T must be positive");
  if (!(beta > 0.0 && beta < 1.0)) throw std::invalid_argument("beta must lie in (0, 1)");
  if (!(m > 0.0)) throw std::invalid_argument("m must be positive");
}

// Cycle order at m: the smallest order for q = mu_T / m, except that a
// breakpoint m_i belongs to the interval on its right (order i + 1), which
// rounding in mu_T / m_i can otherwise hide.
int order_at(double mu_T, double beta, double m) {
  const int N = compute_N(beta, mu_T / m);
  for (int i : {N - 1, N}) {
    if (i >= 1 && std::abs(m / breakpoint(mu_T, beta, i) - 1.0) <= 1e-12) return i + 1;
  }
  return N;
}

}  // namespace

double breakpoint(double mu_T, double beta, int i) {
  const double bi = std::pow(beta, i);
  return mu_T * (1.0 - bi) / bi;
}

double envelope(double mu_T, double beta, double m) {
  check(mu_T, beta, m);
  return (1.0 - beta) * (1.0 - beta) * mu_T * mu_T / (2.0 * m);
}

double b_min_order(double mu_T, double beta, double m, int N) {
  check(mu_T, beta, m);
  return m * critical_buffer(beta, mu_T / m, N);
}

double b_min(double mu_T, double beta, double m) {
  check(mu_T, beta, m);
  return b_min_order(mu_T, beta, m, order_at(mu_T, beta, m));
}

BufferCurve buffer_curve(double mu_T, double beta, double m_lo, double m_hi, int samples,
                         int threads) {
  check(mu_T, beta, m_lo);
  if (!(m_hi > m_lo)) throw std::invalid_argument("m range must be increasing");
  if (samples < 2) throw std::invalid_argument("buffer_curve needs at least 2 samples");

  BufferCurve curve;
  curve.mu_T = mu_T;
  curve.beta = beta;
  std::vector<double> ms;
  const double ratio = std::log(m_hi / m_lo);
  for (int i = 0; i < samples; ++i) ms.push_back(m_lo * std::exp(ratio * i / (samples - 1)));
  for (int i = 1;; ++i) {
    const double mi = breakpoint(mu_T, beta, i);
    if (mi > m_hi || !std::isfinite(mi)) break;
    if (mi <= m_lo) continue;
    curve.breakpoints.push_back(mi);
    ms.push_back(mi);
    ms.push_back(mi * (1.0 - 1e-9));
  }
  std::sort(ms.begin(), ms.end());
  ms.erase(std::unique(ms.begin(), ms.end()), ms.end());

  curve.samples.resize(ms.size());
  detail::parallel_for(ms.size(), threads, [&](std::size_t i) {
    const double m = ms[i];
    const int N = order_at(mu_T, beta, m);
    curve.samples[i] = BufferSample{m, N, b_min_order(mu_T, beta, m, N), envelope(mu_T, beta, m)};
  });
  return curve;
}

std::pair<double, double> non_monotonicity_witness(double mu_T, double beta) {
  const double m1 = breakpoint(mu_T, beta, 1);
  const double below = m1 * (1.0 - 1e-6);
  if (!(b_min(mu_T, beta, below) < b_min(mu_T, beta, m1))) {
    throw std::logic_error("no upward jump found at the first breakpoint");
  }
  return {below, m1};
}

}  // namespace aimd
