#pragma once

#include <optional>
#include <string>
#include <vector>

#include "aimd/model.hpp"

namespace aimd {

enum class Regime { clipped, unclipped, empirical };

std::string to_string(Regime r);

/// Long-run averages of one buffer size, in the units of FluidParams.
struct ParetoPoint {
  double B = 0.0;
  double lambda_bar = 0.0;  // average sending rate
  double g_bar = 0.0;       // average goodput
  double x_bar = 0.0;       // average queue
  double T_cycle = 0.0;     // cycle period, seconds
  double S_CD = 0.0;        // refill time from the empty queue (clipped regime)
  double S_AB = 0.0;        // drain time from full to empty (clipped regime)
  double s1 = 0.0;          // time from the jump back to a full buffer
  double v0 = 0.0;          // normalized window right after the jump
  Regime regime = Regime::unclipped;
};

struct ParetoSet {
  FluidParams params;  // B is ignored
  std::vector<ParetoPoint> points;  // ascending B
  double knee_B = 0.0;              // smallest buffer with full utilisation
  ParetoPoint knee;
};

/// True when mu T / m exceeds A*_2, so the only cycle has order 1 and the
/// closed forms apply.
bool closed_form_applies(const FluidParams& p);

/// m b_{0,1}: the buffer at which the 1-cycle just touches the empty queue.
double knee_buffer(const FluidParams& p);

/// Closed forms for B <= knee_buffer (queue empties every cycle).
ParetoPoint metrics_clipped(const FluidParams& p);

/// Closed forms for B > knee_buffer (goodput equals capacity).
ParetoPoint metrics_unclipped(const FluidParams& p);

/// Whichever closed-form branch matches p.B. Throws std::domain_error when
/// closed_form_applies(p) is false.
ParetoPoint metrics(const FluidParams& p);

/// Averages measured by the simulator, for parameters without closed forms.
ParetoPoint empirical_metrics(const FluidParams& p);

/// Evaluates every buffer in B_grid. `threads` <= 0 means one per core.
ParetoSet pareto_sweep(const FluidParams& p, std::vector<double> B_grid, bool empirical = false,
                       int threads = 1);

/// Largest goodput subject to x_bar <= x_max, over B in [0, B_hi].
std::optional<ParetoPoint> max_goodput_given_delay(const FluidParams& p, double x_max,
                                                   double B_hi);

/// Smallest average queue subject to g_bar >= g_min, over B in [0, B_hi].
std::optional<ParetoPoint> min_delay_given_goodput(const FluidParams& p, double g_min,
                                                   double B_hi);

/// Grid point maximising c1 g_bar - c2 x_bar.
std::optional<ParetoPoint> weighted_optimum(const ParetoSet& set, double c1, double c2);

/// lambda_bar - mu in the full-utilisation regime.
double excess_rate(const FluidParams& p);

}  // namespace aimd
