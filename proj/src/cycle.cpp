#include "aimd/cycle.hpp"

#include <algorithm>
#include <cmath>

#include "aimd/roots.hpp"
#include "special.hpp"

namespace aimd {

std::string to_string(Shape s) {
  switch (s) {
    case Shape::clipped: return "clipped";
    case Shape::critical: return "critical";
    case Shape::unclipped: return "unclipped";
  }
  return "unknown";
}

std::optional<CycleDescriptor> solve_unclipped(const NormalizedParams& p, int k) {
  const double A = p.A();
  const double pk = window_ratio_finite(p.beta, k);
  if (!(A > pk)) return std::nullopt;
  // The return time s1 satisfies (1 + A - v0)(1 - e^{-s1}) = s1 with v0 = pk (s1 + 1);
  // dividing by s1 gives a decreasing function starting at A - pk.
  auto G = [&](double s) {
    return (1.0 + A - pk * (s + 1.0)) * detail::one_minus_exp_over(s) - 1.0;
  };
  const double hi = (1.0 + A - pk) / pk;
  const double s1 = roots::solve_bracketed(G, 0.0, hi, A - pk, -1.0);

  CycleDescriptor c;
  c.order = k;
  c.v0 = pk * (s1 + 1.0);
  c.s1 = s1;
  c.S_cycle = s1 + 1.0;
  // 1 + A - v0 = s1 / (1 - e^{-s1}), so ln of it is the time of the minimum.
  const double s0 = std::log1p(detail::gamma_minus_one(s1));
  c.s0 = s0;
  c.y_min = std::min(p.b, c.v0 + s0 - p.q);
  c.shape = std::abs(c.y_min) <= kCriticalTolerance ? Shape::critical : Shape::unclipped;
  return c;
}

bool jump_consistent(const NormalizedParams& p, const CycleDescriptor& c, double tol) {
  const double A = p.A();
  return c.v0 >= p.beta * A - tol * std::max(1.0, A) && c.v0 < A;
}

std::optional<CycleDescriptor> clipped_cycle(const NormalizedParams& p) {
  const double A = p.A();
  const double r = fill_time_from_empty(p.b);
  const double top = p.q + r + 1.0;
  const JumpResult jr = jump(top, A, p.beta);
  const double v0 = jr.v_after;

  double s_ab = 0.0;
  if (p.b > 0.0) {
    const auto minimum = segment_minimum(v0, p.b, p.q);
    if (!minimum || minimum->y > 0.0) return std::nullopt;
    s_ab = *hit_time_to_level(v0, p.b, p.q, 0.0, Direction::falling);
  } else if (!(v0 < p.q)) {
    return std::nullopt;
  }
  const double slide = std::max(0.0, p.q - (v0 + s_ab));

  CycleDescriptor c;
  c.order = jr.k;
  c.v0 = v0;
  c.S_cycle = top - v0;
  c.s1 = c.S_cycle - 1.0;
  c.y_min = 0.0;
  c.slide = slide;
  if (slide > kCriticalTolerance) {
    c.shape = Shape::clipped;
  } else {
    c.shape = Shape::critical;
    c.s0 = s_ab;
  }
  return c;
}

}  // namespace aimd
