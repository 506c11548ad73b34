#include "aimd/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace aimd {

namespace {

// Distance from b_{0,k} inside which a cycle is reported as critical.
constexpr double kBoundaryEps = 1e-9;

Shape shape_from_b0(double b, double b0) {
  if (std::abs(b - b0) <= kBoundaryEps) return Shape::critical;
  return b < b0 ? Shape::clipped : Shape::unclipped;
}

bool in_closed(double x, double lo, double hi) { return x >= lo && x <= hi; }

// Builds the descriptor for a cycle whose order and shape are already known.
CycleDescriptor describe(const NormalizedParams& p, int k, Shape shape,
                         std::vector<std::string>& notes) {
  if (shape == Shape::clipped) {
    if (auto c = clipped_cycle(p)) {
      if (c->order != k) {
        std::ostringstream os;
        os << "clipped cycle has jump multiplicity " << c->order << ", expected " << k;
        notes.push_back(os.str());
      }
      c->order = k;
      c->shape = Shape::clipped;
      return *c;
    }
    notes.push_back("clipped " + std::to_string(k) + "-cycle predicted but the floor is not reached");
  }
  auto c = solve_unclipped(p, k);
  if (!c) {
    notes.push_back("unclipped " + std::to_string(k) + "-cycle equation has no root");
    CycleDescriptor empty;
    empty.order = k;
    empty.shape = shape;
    return empty;
  }
  c->shape = shape;
  if (shape == Shape::critical) c->y_min = std::max(0.0, c->y_min);
  return *c;
}

}  // namespace

std::string to_string(CaseTag t) {
  switch (t) {
    case CaseTag::A_star_lt_q: return "A_star_lt_q";
    case CaseTag::q_le_qstar: return "q_le_qstar";
    case CaseTag::qstar_lt_q_le_Astar: return "qstar_lt_q_le_Astar";
  }
  return "unknown";
}

std::string to_string(SingleJumpCondition c) {
  switch (c) {
    case SingleJumpCondition::a: return "a";
    case SingleJumpCondition::b: return "b";
    case SingleJumpCondition::c: return "c";
    case SingleJumpCondition::d: return "d";
    case SingleJumpCondition::e: return "e";
    case SingleJumpCondition::f: return "f";
    case SingleJumpCondition::none: return "none";
  }
  return "unknown";
}

ClassificationReport classify(double beta, double q, double b) {
  ClassificationReport r;
  r.params = NormalizedParams{beta, q, b};
  r.params.validate();
  r.constants = compute_constants(beta, q);
  const DerivedConstants& k = r.constants;
  const int N = k.N;
  const Extended a_next = k.A_star.at(N + 1);
  const Extended q_next = k.q_star.at(N + 1);

  if (a_next < q) {
    r.case_tag = CaseTag::A_star_lt_q;
  } else if (Extended(q) <= q_next) {
    r.case_tag = CaseTag::q_le_qstar;
  } else {
    r.case_tag = CaseTag::qstar_lt_q_le_Astar;
  }

  // (N+1)-cycle.
  std::optional<Shape> upper;
  const double cap = a_next.value() - q;
  if (r.case_tag == CaseTag::q_le_qstar) {
    if (!k.b_lo) {
      r.notes.push_back("q <= q*_{N+1} but the root equation has no solution");
    } else if (in_closed(b, *k.b_lo, cap)) {
      upper = shape_from_b0(b, k.b0.at(N + 1));
    }
  } else if (r.case_tag == CaseTag::qstar_lt_q_le_Astar) {
    if (k.C == cap) r.notes.push_back("C equals A*_{N+1} - q, which should not happen");
    if (k.C <= cap && q <= k.D && k.b_lo) {
      if (*k.b_hi > cap) {
        r.cap_binds = true;
        r.notes.push_back("b_hi exceeds A*_{N+1} - q; existence capped at A*_{N+1} - q");
      }
      if (in_closed(b, *k.b_lo, std::min(*k.b_hi, cap))) upper = Shape::clipped;
    }
  }
  if (upper) r.cycles.push_back(describe(r.params, N + 1, *upper, r.notes));

  // N-cycle.
  if (Extended(q + b) <= k.A_star.at(N)) {
    r.cycles.push_back(describe(r.params, N, shape_from_b0(b, k.b0.at(N)), r.notes));
  }

  // Lower orders are always unclipped.
  for (int j = N - 1; j >= 1; --j) {
    // Compare A itself, not b against p_j - q, so rounding agrees with the cycle solver.
    if (q + b > window_ratio_finite(beta, j) && Extended(q + b) <= a_star(beta, j)) {
      r.cycles.push_back(describe(r.params, j, Shape::unclipped, r.notes));
    }
  }

  std::sort(r.cycles.begin(), r.cycles.end(),
            [](const CycleDescriptor& x, const CycleDescriptor& y) { return x.order < y.order; });
  if (r.cycles.empty() || r.cycles.size() > 2) {
    r.notes.push_back("unexpected cycle count " + std::to_string(r.cycles.size()));
  } else if (r.cycles.size() == 2 && r.cycles[1].order != r.cycles[0].order + 1) {
    r.notes.push_back("coexisting cycle orders are not consecutive");
  }

  r.single_jump_only = r.cycles.size() == 1 && r.cycles[0].order == 1;
  const auto [single, tag] = single_jump_predicate(beta, q, b);
  r.single_jump_condition = tag;
  if (single != r.single_jump_only) {
    r.notes.push_back("single-jump conditions disagree with the cycle table");
  }
  return r;
}

std::pair<bool, SingleJumpCondition> single_jump_predicate(double beta, double q, double b) {
  NormalizedParams{beta, q, b}.validate();
  const double p1 = beta / (1.0 - beta);
  const double a2 = a_star(beta, 2).value();
  const double q2 = q_star(beta, 2).value();
  using C = SingleJumpCondition;

  if (p1 >= q) {
    if (b + q > a2) return {true, C::a};
    return {false, C::none};
  }
  if (a2 < q) return {true, C::b};

  // Here beta / (1 - beta) < q, so the smallest order is 1.
  const DC dc = compute_D_C(beta, 1);
  std::optional<RRoots> roots;
  if (q <= dc.D + kDoubleRootWindow) roots = solve_r_roots(beta, q, 1);
  if (q <= q2) {
    if (!roots || !in_closed(b, roots->b_lo, a2 - q)) return {true, C::c};
    return {false, C::none};
  }
  if (q <= a2 - dc.C) {
    if (q > dc.D) return {true, C::e};
    if (!roots || !in_closed(b, roots->b_lo, roots->b_hi)) return {true, C::d};
    return {false, C::none};
  }
  return {true, C::f};
}

ConditionGap sufficient_condition_gap(double beta) {
  ConditionGap g;
  g.A_star_2 = a_star(beta, 2).value();
  g.legacy = 2.0 * beta / (1.0 - beta);
  g.delta = g.legacy - g.A_star_2;
  return g;
}

}  // namespace aimd
