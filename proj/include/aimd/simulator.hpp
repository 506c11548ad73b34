#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "aimd/cycle.hpp"
#include "aimd/model.hpp"

namespace aimd {

struct SimConfig {
  FluidParams params;
  double v_init = 0.0;
  double y_init = 0.0;
  int max_cycles = 200000;
  int warmup_cycles = 0;   // cycles always discarded before testing convergence
  int measure_cycles = 3;  // whole cycles averaged once converged
  bool record_trace = false;
  int trace_samples = 16;  // interior samples per free segment when tracing
};

/// Config for a run on normalized parameters: mu = q, T = 1, m = 1, B = b.
SimConfig normalized_config(const NormalizedParams& p, double v_init, double y_init);

struct TraceEvent {
  double t = 0.0;
  double s = 0.0;
  double v = 0.0;
  double y = 0.0;
  std::string event;  // segment, hit_b, jump, hit_0, slide_end
};

struct SimResult {
  std::optional<CycleDescriptor> limit_cycle;
  double lambda_bar = 0.0;
  double g_bar = 0.0;
  double x_bar = 0.0;
  double T_cycle_measured = 0.0;
  std::map<int, long> jump_multiplicities;
  std::vector<TraceEvent> trace;
  int cycles_run = 0;
};

enum class SegmentKind { free, slide, overflow };

/// A piece of trajectory between events, in transformed time.
struct Segment {
  SegmentKind kind = SegmentKind::free;
  double v0 = 0.0;
  double y0 = 0.0;
  double length = 0.0;
};

/// Wall-clock duration of a segment: integral of (T + m y / mu) ds.
double time_convert(const Segment& seg, const FluidParams& p);

/// Runs until the post-jump window settles, then averages whole cycles.
/// Throws ConvergenceError (from limit_map.hpp) if max_cycles is reached.
SimResult run(const SimConfig& cfg);

}  // namespace aimd
