#include "aimd/limit_map.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "aimd/roots.hpp"

namespace aimd {

namespace {

// A dip whose minimum is within this of zero is treated as a touch.
constexpr double kTouch = 1e-12;

bool same_limit(const Limit& a, const Limit& b) {
  return a.order == b.order && std::abs(a.V - b.V) <= 1e-8 * std::max(1.0, std::abs(a.V));
}

}  // namespace

int minimal_jump_count(const NormalizedParams& p) {
  const double A = p.A();
  const double target = A / (1.0 + A);
  double bi = 1.0;
  for (int i = 1; i <= 1000000; ++i) {
    bi *= p.beta;
    if (bi < target) return i;
  }
  throw std::domain_error("minimal_jump_count: iteration cap exceeded");
}

double return_time(const NormalizedParams& p, double v0) {
  if (v0 >= p.A()) return 0.0;
  return *hit_time_to_level(v0, p.b, p.q, p.b, Direction::rising);
}

double phi_k(double v0, int k, const ReturnMapContext& ctx) {
  return std::pow(ctx.params.beta, k) * (v0 + return_time(ctx.params, v0) + 1.0);
}

MapStep varphi(double v0, const ReturnMapContext& ctx) {
  const NormalizedParams& p = ctx.params;
  const double A = p.A();
  MapStep out;
  double v_hit = 0.0;
  if (p.b == 0.0) {
    out.clipped = v0 < p.q;
    v_hit = std::max(v0, p.q);
  } else {
    const auto minimum = v0 < A ? segment_minimum(v0, p.b, p.q) : std::nullopt;
    if (minimum && minimum->y < -kTouch) {
      const double s_ab = *hit_time_to_level(v0, p.b, p.q, 0.0, Direction::falling);
      out.clipped = true;
      v_hit = std::max(v0 + s_ab, p.q) + fill_time_from_empty(p.b);
    } else {
      v_hit = v0 + return_time(p, v0);
    }
  }
  const JumpResult jr = jump(v_hit + 1.0, A, p.beta);
  out.v1 = jr.v_after;
  out.k = jr.k;
  return out;
}

std::optional<double> find_basin_boundary(const ReturnMapContext& ctx) {
  const double A = ctx.params.A();
  const double lo = ctx.params.beta * A;
  auto f = [&](double v) { return phi_k(v, ctx.K, ctx) - A; };
  const double f_lo = f(lo);
  if (f_lo < 0.0) return std::nullopt;
  return roots::solve_bracketed(f, lo, A, f_lo, f(A));
}

ReturnMapContext make_context(const NormalizedParams& p) {
  p.validate();
  ReturnMapContext ctx;
  ctx.params = p;
  ctx.K = minimal_jump_count(p);
  ctx.d = find_basin_boundary(ctx);

  const double A = p.A();
  const double beta_a = p.beta * A;
  auto fixed = [&](int k, double lo, double hi) -> std::optional<double> {
    auto g = [&](double v) { return phi_k(v, k, ctx) - v; };
    const double g_lo = g(lo);
    const double g_hi = g(hi);
    if (g_lo < 0.0 || g_hi > 0.0) return std::nullopt;
    return roots::solve_bracketed(g, lo, hi, g_lo, g_hi);
  };
  ctx.V2 = fixed(ctx.K, ctx.d.value_or(beta_a), A);
  if (ctx.d) ctx.V1 = fixed(ctx.K + 1, beta_a, *ctx.d);
  return ctx;
}

Limit limit_value(double v0, const ReturnMapContext& ctx, int max_iter) {
  const double A = ctx.params.A();
  double v = v0;
  if (v >= A) v = jump(v, A, ctx.params.beta).v_after;

  std::vector<double> tail;
  int last_k = 0;
  int stable_k = 0;
  for (int i = 1; i <= max_iter; ++i) {
    const MapStep step = varphi(v, ctx);
    stable_k = step.k == last_k ? stable_k + 1 : 1;
    last_k = step.k;
    const double gap = std::abs(step.v1 - v);
    v = step.v1;
    tail.push_back(v);
    if (tail.size() > 8) tail.erase(tail.begin());
    if (gap < 1e-12 * std::max(1.0, std::abs(v)) && stable_k >= 3) return Limit{v, step.k, i};
  }
  std::ostringstream os;
  os.precision(17);
  os << "limit_value did not converge in " << max_iter << " steps; last iterates:";
  for (double t : tail) os << ' ' << t;
  throw ConvergenceError(os.str());
}

std::optional<double> empirical_basin_boundary(const ReturnMapContext& ctx, int probes) {
  const double A = ctx.params.A();
  const double lo = ctx.params.beta * A;
  const double width = A - lo;
  std::vector<double> grid;
  std::vector<Limit> limits;
  for (int i = 0; i < probes; ++i) {
    const double v = lo + width * (i + 0.5) / probes;
    grid.push_back(v);
    limits.push_back(limit_value(v, ctx));
  }
  for (int i = 0; i + 1 < probes; ++i) {
    if (same_limit(limits[i], limits[i + 1])) continue;
    double a = grid[i];
    double b = grid[i + 1];
    const Limit left = limits[i];
    for (int it = 0; it < 60 && b - a > 1e-13 * A; ++it) {
      const double mid = 0.5 * (a + b);
      if (same_limit(limit_value(mid, ctx), left)) a = mid; else b = mid;
    }
    return 0.5 * (a + b);
  }
  return std::nullopt;
}

}  // namespace aimd
