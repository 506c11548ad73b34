#pragma once

#include <optional>
#include <stdexcept>

#include "aimd/model.hpp"

namespace aimd {

class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Return-map data for fixed (beta, q, b).
///
/// K is the smallest jump count that can bring A + 1 below A. d is where
/// K jumps stop being enough (the basin boundary); V1 and V2 are the fixed
/// points of the (K+1)- and K-jump maps on either side of it. These come
/// from the unclipped return map, so they describe actual cycles only when
/// the corresponding trajectory stays off the floor.
struct ReturnMapContext {
  NormalizedParams params;
  int K = 1;
  std::optional<double> d;
  std::optional<double> V1;
  std::optional<double> V2;
};

/// Minimal i >= 1 with beta^i < A / (1 + A).
int minimal_jump_count(const NormalizedParams& p);

ReturnMapContext make_context(const NormalizedParams& p);

/// Time for y to come back to b after leaving it at v = v0; 0 at v0 = A.
double return_time(const NormalizedParams& p, double v0);

/// beta^k (v0 + s* + 1), ignoring the floor.
double phi_k(double v0, int k, const ReturnMapContext& ctx);

struct MapStep {
  double v1 = 0.0;
  int k = 1;
  bool clipped = false;
};

/// One full cycle of the hybrid system from (y = b, v = v0), floor included.
MapStep varphi(double v0, const ReturnMapContext& ctx);

std::optional<double> find_basin_boundary(const ReturnMapContext& ctx);

struct Limit {
  double V = 0.0;
  int order = 1;
  int iterations = 0;
};

/// Iterates varphi to its limit. Values outside [beta A, A) are first
/// brought in by one jump. Throws ConvergenceError after max_iter steps.
Limit limit_value(double v0, const ReturnMapContext& ctx, int max_iter = 10000);

/// Boundary between two attracting limits found by bisection on initial
/// conditions, for cases where the floor moves it away from d. nullopt when
/// every start in [beta A, A) reaches the same limit on the probe grid.
std::optional<double> empirical_basin_boundary(const ReturnMapContext& ctx, int probes = 64);

}  // namespace aimd
