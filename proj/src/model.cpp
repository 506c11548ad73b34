#include "aimd/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "aimd/roots.hpp"
#include "special.hpp"

namespace aimd {

std::string Extended::to_string() const {
  if (is_infinite()) return "+inf";
  std::ostringstream os;
  os.precision(17);
  os << *value_;
  return os.str();
}

std::string to_string(Unit u) { return u == Unit::packets ? "packets" : "bits"; }

Unit unit_from_string(const std::string& s) {
  if (s == "packets") return Unit::packets;
  if (s == "bits") return Unit::bits;
  throw std::invalid_argument("unknown unit '" + s + "' (expected packets or bits)");
}

void FluidParams::validate() const {
  if (!(mu > 0.0) || !std::isfinite(mu)) throw std::invalid_argument("mu must be positive");
  if (!(T > 0.0) || !std::isfinite(T)) throw std::invalid_argument("T must be positive");
  if (!(m > 0.0) || !std::isfinite(m)) throw std::invalid_argument("m must be positive");
  if (!(B >= 0.0) || !std::isfinite(B)) throw std::invalid_argument("B must be non-negative");
  if (!(beta > 0.0 && beta < 1.0)) throw std::invalid_argument("beta must lie in (0, 1)");
}

void NormalizedParams::validate() const {
  if (!(beta > 0.0 && beta < 1.0)) throw std::invalid_argument("beta must lie in (0, 1)");
  if (!(q > 0.0) || !std::isfinite(q)) throw std::invalid_argument("q must be positive");
  if (!(b >= 0.0) || !std::isfinite(b)) throw std::invalid_argument("b must be non-negative");
}

NormalizedParams normalize(const FluidParams& p) {
  p.validate();
  return NormalizedParams{p.beta, p.mu * p.T / p.m, p.B / p.m};
}

Extended window_ratio(double beta, int k) {
  if (k == 0) return Extended::infinity();
  return window_ratio_finite(beta, k);
}

double window_ratio_finite(double beta, int k) {
  if (k < 1) throw std::invalid_argument("window_ratio_finite needs k >= 1");
  const double bk = std::pow(beta, k);
  return bk / (1.0 - bk);
}

State segment_state(double v0, double y0, double q, double s) {
  const double c = decay_coefficient(v0, y0, q);
  return State{s, v0 + s, c * std::exp(-s) + s - 1.0 + v0 - q};
}

double segment_y_offset(double v0, double y0, double q, double level, double s) {
  // y(s) = y0 + s - c (1 - e^{-s}); written around y0 to avoid cancellation.
  const double c = decay_coefficient(v0, y0, q);
  return (y0 - level) + s + c * std::expm1(-s);
}

std::optional<SegmentMinimum> segment_minimum(double v0, double y0, double q) {
  const double c = decay_coefficient(v0, y0, q);
  if (!(c > 1.0)) return std::nullopt;
  const double sm = std::log(c);
  // y(sm) = y0 + sm - (c - 1) = v0 + ln c - q.
  return SegmentMinimum{sm, y0 + sm - (c - 1.0)};
}

JumpResult jump(double v, double A, double beta, int max_k) {
  if (!(v > 0.0) || !(A > 0.0)) throw std::invalid_argument("jump needs v > 0 and A > 0");
  double w = v;
  for (int k = 1; k <= max_k; ++k) {
    w *= beta;
    if (w < A) return JumpResult{w, k};
  }
  throw std::domain_error("jump multiplicity exceeded cap; beta too close to 1?");
}

std::optional<double> hit_time_to_level(double v0, double y0, double q, double level,
                                        Direction direction) {
  const double c = decay_coefficient(v0, y0, q);
  auto h = [&](double s) { return segment_y_offset(v0, y0, q, level, s); };
  const auto minimum = segment_minimum(v0, y0, q);

  if (direction == Direction::falling) {
    if (!minimum) return std::nullopt;  // y never decreases
    if (y0 < level) return std::nullopt;
    if (y0 == level) return 0.0;
    if (minimum->y > level) return std::nullopt;
    if (minimum->y == level) return minimum->s;
    return roots::solve_bracketed(h, 0.0, minimum->s);
  }

  if (y0 == level) {
    if (!minimum) return 0.0;
    // Leaves the level downwards, returns once c (1 - e^{-s}) / s = 1.
    auto g = [&](double s) { return c * detail::one_minus_exp_over(s) - 1.0; };
    return roots::solve_bracketed(g, minimum->s, c);
  }
  double lo = 0.0;
  if (minimum) {
    if (y0 > level && minimum->y > level) return std::nullopt;
    if (minimum->y >= level) return minimum->y == level ? std::optional<double>(minimum->s)
                                                        : std::nullopt;
    lo = minimum->s;
  } else if (y0 > level) {
    return std::nullopt;
  }
  // y(s) >= y0 + s - c, so the level is passed by this point.
  const double hi = std::max(lo, c + level - y0) + 1.0;
  return roots::solve_bracketed(h, lo, hi);
}

double slide_on_floor(double v_at_touch, double q) {
  const double gap = q - v_at_touch;
  if (gap < 0.0) throw std::invalid_argument("slide_on_floor needs v_at_touch <= q");
  return gap;
}

double clipping_threshold(double b) {
  if (b < 0.0) throw std::invalid_argument("clipping_threshold needs b >= 0");
  if (b == 0.0) return 0.0;
  // ln(1 + b + S) - S starts at ln(1 + b) > 0 and decreases.
  auto f = [b](double S) { return std::log1p(b + S) - S; };
  return roots::solve_bracketed(f, 0.0, b + 2.0 + 2.0 * std::log1p(b));
}

double fill_time_from_empty(double b) {
  if (b < 0.0) throw std::invalid_argument("fill_time_from_empty needs b >= 0");
  if (b == 0.0) return 0.0;
  auto f = [b](double r) { return detail::em1x(r) - b; };
  return roots::solve_bracketed(f, 0.0, b + 1.0);
}

SegmentIntegrals integrate_segment(double v0, double y0, double q, double L) {
  // y = c e^{-s} + s + d with d = v0 - q - 1.
  const double c = decay_coefficient(v0, y0, q);
  const double d = v0 - q - 1.0;
  const double one_m_e = -std::expm1(-L);
  const double one_m_e2 = -std::expm1(-2.0 * L);
  const double eL = std::exp(-L);
  SegmentIntegrals out;
  out.y = c * one_m_e + L * L / 2.0 + d * L;
  out.y2 = c * c * one_m_e2 / 2.0 + 2.0 * c * ((d + 1.0) * one_m_e - L * eL) + L * L * L / 3.0 +
           L * L * d + L * d * d;
  out.v = v0 * L + L * L / 2.0;
  return out;
}

}  // namespace aimd
