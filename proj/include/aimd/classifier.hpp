#pragma once

#include <string>
#include <utility>
#include <vector>

#include "aimd/cycle.hpp"
#include "aimd/cycle_constants.hpp"
#include "aimd/model.hpp"

namespace aimd {

/// Which of the three (beta, q) regimes decides the (N+1)-cycle.
enum class CaseTag {
  A_star_lt_q,           // A*_{N+1} < q: no (N+1)-cycle at all
  q_le_qstar,            // q <= q*_{N+1}: (N+1)-cycle may be clipped, critical or unclipped
  qstar_lt_q_le_Astar,   // q*_{N+1} < q <= A*_{N+1}: (N+1)-cycle can only be clipped
};

/// Which characterisation of "only a single 1-cycle" applies.
enum class SingleJumpCondition { a, b, c, d, e, f, none };

std::string to_string(CaseTag t);
std::string to_string(SingleJumpCondition c);

struct ClassificationReport {
  NormalizedParams params;
  DerivedConstants constants;
  CaseTag case_tag = CaseTag::A_star_lt_q;
  std::vector<CycleDescriptor> cycles;  // ascending order
  bool single_jump_only = false;
  SingleJumpCondition single_jump_condition = SingleJumpCondition::none;
  // Set when the upper root b_hi exceeds A*_{N+1} - q, so the cap decides
  // where the clipped (N+1)-cycle disappears.
  bool cap_binds = false;
  std::vector<std::string> notes;
};

/// Existence and shape of every limit cycle for (beta, q, b).
ClassificationReport classify(double beta, double q, double b);
inline ClassificationReport classify(const NormalizedParams& p) { return classify(p.beta, p.q, p.b); }

/// Whether the only limit cycle is a single 1-cycle, and by which condition.
std::pair<bool, SingleJumpCondition> single_jump_predicate(double beta, double q, double b);

struct ConditionGap {
  double A_star_2 = 0.0;
  double legacy = 0.0;  // 2 beta / (1 - beta)
  double delta = 0.0;   // legacy - A_star_2
};

/// Compares b + q > A*_2 with the older sufficient bound b + q > 2 beta / (1 - beta).
ConditionGap sufficient_condition_gap(double beta);

}  // namespace aimd
