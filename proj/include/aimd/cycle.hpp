#pragma once

#include <optional>
#include <string>

#include "aimd/model.hpp"

namespace aimd {

enum class Shape { clipped, critical, unclipped };

std::string to_string(Shape s);

/// One limit cycle, anchored at the state right after its jump (y = b).
struct CycleDescriptor {
  int order = 1;
  Shape shape = Shape::unclipped;
  double v0 = 0.0;                // v right after the jump
  double s1 = 0.0;                // time from the jump until y is back at b
  std::optional<double> s0;       // time of the interior minimum of y (unclipped shapes)
  double y_min = 0.0;             // smallest y over the cycle
  double S_cycle = 0.0;           // period in transformed time
  double slide = 0.0;             // time spent on y = 0 (clipped only)
};

/// Below this, |y_min| counts as touching the floor.
inline constexpr double kCriticalTolerance = 1e-9;

/// The k-cycle that never uses the floor clause, computed as if y could go
/// negative. nullopt when A <= beta^k / (1 - beta^k). The result is a real
/// cycle only if v0 >= beta A and y_min >= 0; callers check that.
std::optional<CycleDescriptor> solve_unclipped(const NormalizedParams& p, int k);

/// True when a pseudo-cycle from solve_unclipped is a genuine k-jump cycle
/// (its post-jump value lies in [beta A, A)).
bool jump_consistent(const NormalizedParams& p, const CycleDescriptor& c, double tol = 1e-12);

/// The clipped cycle, if one exists. Every clipped cycle passes through
/// (y=0, v=q), so there is at most one.
std::optional<CycleDescriptor> clipped_cycle(const NormalizedParams& p);

}  // namespace aimd
