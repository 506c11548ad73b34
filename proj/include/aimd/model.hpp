#pragma once

#include <optional>
#include <string>

#include "aimd/extended.hpp"

namespace aimd {

enum class Unit { packets, bits };

std::string to_string(Unit u);
Unit unit_from_string(const std::string& s);

/// Physical inputs of the fluid model.
struct FluidParams {
  double mu = 0.0;    // bottleneck capacity, data units per second
  double T = 0.0;     // two-way propagation delay, seconds
  double m = 0.0;     // aggregate additive increment per RTT, data units
  double B = 0.0;     // buffer size, data units
  double beta = 0.5;  // multiplicative decrease factor
  Unit unit = Unit::packets;

  /// Throws std::invalid_argument if any field is out of range.
  void validate() const;
};

/// The dimensionless triple that drives all of the analysis.
struct NormalizedParams {
  double beta = 0.5;
  double q = 0.0;  // bandwidth-delay product in increments
  double b = 0.0;  // buffer in increments

  double A() const { return b + q; }

  void validate() const;
};

struct State {
  double s = 0.0;
  double v = 0.0;
  double y = 0.0;
};

struct JumpResult {
  double v_after = 0.0;
  int k = 1;
};

enum class Direction { rising, falling };

NormalizedParams normalize(const FluidParams& p);

/// beta^k / (1 - beta^k); +infinity for k = 0.
Extended window_ratio(double beta, int k);

/// Finite version of window_ratio for k >= 1.
double window_ratio_finite(double beta, int k);

/// Exact between-jump solution started from (v0, y0) after transformed time s.
State segment_state(double v0, double y0, double q, double s);

/// y(s) - level in a form that keeps precision when y stays close to level.
double segment_y_offset(double v0, double y0, double q, double level, double s);

/// Coefficient of e^{-s} in y(s); the queue dips iff it exceeds one.
inline double decay_coefficient(double v0, double y0, double q) { return 1.0 + q + y0 - v0; }

/// Time and value of the interior minimum of y, if the segment dips first.
struct SegmentMinimum {
  double s = 0.0;
  double y = 0.0;
};
std::optional<SegmentMinimum> segment_minimum(double v0, double y0, double q);

/// Smallest k >= 1 with beta^k v < A. Throws std::domain_error past the cap.
JumpResult jump(double v, double A, double beta, int max_k = 100000);

/// First time the closed-form y reaches `level` moving in `direction`.
///
/// Returns nullopt when the level is never reached that way. Starting on the
/// level counts as an immediate hit when y leaves it in the stated direction
/// (so y0 = b, v0 = A gives 0 for a rising hit of b).
std::optional<double> hit_time_to_level(double v0, double y0, double q, double level,
                                        Direction direction);

/// Duration of the slide along y = 0 before v catches up with q.
double slide_on_floor(double v_at_touch, double q);

/// S with (1 + b + S) e^{-S} = 1. Starting from (y=b, v=q-S) the queue
/// touches zero at a single point, at s = S.
double clipping_threshold(double b);

/// r with e^{-r} + r - 1 = b: time for the queue to fill from (y=0, v=q).
double fill_time_from_empty(double b);

/// Exact integrals of y, y^2 and v over [0, L] of one free segment.
struct SegmentIntegrals {
  double y = 0.0;
  double y2 = 0.0;
  double v = 0.0;
};
SegmentIntegrals integrate_segment(double v0, double y0, double q, double L);

}  // namespace aimd
