#include "aimd/pareto.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "aimd/cycle.hpp"
#include "aimd/cycle_constants.hpp"
#include "aimd/simulator.hpp"
#include "parallel.hpp"

namespace aimd {

namespace {

// Relative slack when deciding which branch a buffer at the knee belongs to.
constexpr double kKneeSlack = 1e-9;

void require_closed_form(const FluidParams& p) {
  if (!closed_form_applies(p)) {
    throw std::domain_error(
        "closed forms need mu T / m > A*_2 (single 1-cycle); use the simulator instead");
  }
}

}  // namespace

std::string to_string(Regime r) {
  switch (r) {
    case Regime::clipped: return "clipped";
    case Regime::unclipped: return "unclipped";
    case Regime::empirical: return "empirical";
  }
  return "unknown";
}

bool closed_form_applies(const FluidParams& p) {
  const NormalizedParams np = normalize(p);
  return Extended(np.q) > a_star(np.beta, 2);
}

double knee_buffer(const FluidParams& p) {
  const NormalizedParams np = normalize(p);
  return p.m * critical_buffer(np.beta, np.q, 1);
}

ParetoPoint metrics_clipped(const FluidParams& p) {
  require_closed_form(p);
  const double knee = knee_buffer(p);
  if (p.B > knee * (1.0 + kKneeSlack)) {
    throw std::domain_error("metrics_clipped needs B <= m b_{0,1}");
  }
  const NormalizedParams np = normalize(p);
  const double beta = np.beta, q = np.q, b = np.b;
  const double r = fill_time_from_empty(b);
  const double top = q + r + 1.0;
  const double v0 = beta * top;

  double s_ab = 0.0;
  if (b > 0.0) {
    if (auto hit = hit_time_to_level(v0, b, q, 0.0, Direction::falling)) {
      s_ab = *hit;
    } else if (auto minimum = segment_minimum(v0, b, q)) {
      s_ab = minimum->s;  // touches at the knee itself
    }
  }
  const SegmentIntegrals ab = integrate_segment(v0, b, q, s_ab);
  const SegmentIntegrals cd = integrate_segment(q, 0.0, q, r);
  const double S_cycle = (1.0 - beta) * top;
  const double int_y = ab.y + cd.y;
  const double int_y2 = ab.y2 + cd.y2;

  ParetoPoint out;
  out.B = p.B;
  out.regime = Regime::clipped;
  out.S_CD = r;
  out.S_AB = s_ab;
  out.v0 = v0;
  out.s1 = S_cycle - 1.0;
  out.T_cycle = S_cycle * p.T + p.B / p.mu + p.m / p.mu * int_y;
  out.lambda_bar = p.m * (1.0 - beta * beta) * top * top / (2.0 * out.T_cycle);
  out.g_bar = p.m / out.T_cycle *
              (0.5 * (q + r) * (q + r) - 0.5 * beta * beta * top * top + q + b);
  out.x_bar = (p.m * p.T * int_y +
               p.m * p.m / p.mu * (int_y2 + p.B * (p.mu * p.T + p.B) / (p.m * p.m))) /
              out.T_cycle;
  return out;
}

ParetoPoint metrics_unclipped(const FluidParams& p) {
  require_closed_form(p);
  const double knee = knee_buffer(p);
  if (p.B < knee * (1.0 - kKneeSlack)) {
    throw std::domain_error("metrics_unclipped needs B > m b_{0,1}");
  }
  const NormalizedParams np = normalize(p);
  const auto cyc = solve_unclipped(np, 1);
  if (!cyc) throw std::logic_error("1-cycle equation has no root");
  const double beta = np.beta;
  const double s1 = cyc->s1;
  const SegmentIntegrals in = integrate_segment(cyc->v0, np.b, np.q, s1);

  ParetoPoint out;
  out.B = p.B;
  out.regime = Regime::unclipped;
  out.s1 = s1;
  out.v0 = cyc->v0;
  out.T_cycle = p.T * (s1 + 1.0) + p.m / p.mu * (in.y + np.b);
  out.lambda_bar =
      p.m * (1.0 + beta) * (s1 + 1.0) * (s1 + 1.0) / (2.0 * (1.0 - beta) * out.T_cycle);
  out.g_bar = p.mu;
  out.x_bar =
      (p.m * p.T * in.y + p.m * p.m / p.mu * in.y2 + p.B * (p.T + p.B / p.mu)) / out.T_cycle;
  return out;
}

ParetoPoint metrics(const FluidParams& p) {
  require_closed_form(p);
  return p.B <= knee_buffer(p) ? metrics_clipped(p) : metrics_unclipped(p);
}

ParetoPoint empirical_metrics(const FluidParams& p) {
  const NormalizedParams np = normalize(p);
  SimConfig cfg;
  cfg.params = p;
  cfg.v_init = np.A() - 1e-6 * std::max(1.0, np.A());
  cfg.y_init = np.b;
  const SimResult res = run(cfg);
  ParetoPoint out;
  out.B = p.B;
  out.regime = Regime::empirical;
  out.lambda_bar = res.lambda_bar;
  out.g_bar = res.g_bar;
  out.x_bar = res.x_bar;
  out.T_cycle = res.T_cycle_measured;
  out.v0 = res.limit_cycle->v0;
  out.s1 = res.limit_cycle->s1;
  return out;
}

ParetoSet pareto_sweep(const FluidParams& p, std::vector<double> B_grid, bool empirical,
                       int threads) {
  if (B_grid.empty()) throw std::invalid_argument("pareto_sweep needs a non-empty grid");
  std::sort(B_grid.begin(), B_grid.end());
  if (!empirical) require_closed_form(p);

  ParetoSet set;
  set.params = p;
  set.points.resize(B_grid.size());
  detail::parallel_for(B_grid.size(), threads, [&](std::size_t i) {
    FluidParams pi = p;
    pi.B = B_grid[i];
    set.points[i] = empirical ? empirical_metrics(pi) : metrics(pi);
  });
  if (closed_form_applies(p)) {
    set.knee_B = knee_buffer(p);
    FluidParams pk = p;
    pk.B = set.knee_B;
    set.knee = metrics_clipped(pk);
  }
  return set;
}

std::optional<ParetoPoint> max_goodput_given_delay(const FluidParams& p, double x_max,
                                                   double B_hi) {
  auto at = [&](double B) {
    FluidParams pb = p;
    pb.B = B;
    return metrics(pb);
  };
  const ParetoPoint lo = at(0.0);
  if (lo.x_bar > x_max) return std::nullopt;
  const ParetoPoint hi = at(B_hi);
  if (hi.x_bar <= x_max) return hi;
  // x_bar increases with B; keep the feasible end.
  double a = 0.0, b = B_hi;
  for (int i = 0; i < 200 && b - a > 1e-13 * std::max(1.0, b); ++i) {
    const double mid = 0.5 * (a + b);
    if (at(mid).x_bar <= x_max) a = mid; else b = mid;
  }
  return at(a);
}

std::optional<ParetoPoint> min_delay_given_goodput(const FluidParams& p, double g_min,
                                                   double B_hi) {
  auto at = [&](double B) {
    FluidParams pb = p;
    pb.B = B;
    return metrics(pb);
  };
  if (g_min > p.mu * (1.0 + 1e-12)) return std::nullopt;
  const ParetoPoint lo = at(0.0);
  if (lo.g_bar >= g_min) return lo;
  const double knee = knee_buffer(p);
  if (g_min >= p.mu * (1.0 - 1e-12)) {
    if (knee > B_hi) return std::nullopt;
    return at(knee);
  }
  const double top = std::min(knee, B_hi);
  if (at(top).g_bar < g_min) return std::nullopt;
  // g_bar increases with B below the knee; keep the feasible end.
  double a = 0.0, b = top;
  for (int i = 0; i < 200 && b - a > 1e-13 * std::max(1.0, b); ++i) {
    const double mid = 0.5 * (a + b);
    if (at(mid).g_bar >= g_min) b = mid; else a = mid;
  }
  return at(b);
}

std::optional<ParetoPoint> weighted_optimum(const ParetoSet& set, double c1, double c2) {
  std::optional<ParetoPoint> best;
  double best_value = 0.0;
  for (const auto& pt : set.points) {
    const double value = c1 * pt.g_bar - c2 * pt.x_bar;
    if (!best || value > best_value) {
      best = pt;
      best_value = value;
    }
  }
  return best;
}

double excess_rate(const FluidParams& p) { return metrics_unclipped(p).lambda_bar - p.mu; }

}  // namespace aimd
