#include "aimd/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "aimd/simulator.hpp"

namespace aimd {

namespace {

bool same_cycle(const CycleDescriptor& a, const CycleDescriptor& b) {
  return a.order == b.order && std::abs(a.v0 - b.v0) <= 1e-8 * std::max(1.0, std::abs(a.v0));
}

void add_distinct(std::vector<CycleDescriptor>& found, const CycleDescriptor& c) {
  for (const auto& f : found) {
    if (same_cycle(f, c)) return;
  }
  found.push_back(c);
}

CycleDescriptor simulate_from(const NormalizedParams& p, double v0) {
  return *run(normalized_config(p, v0, p.b)).limit_cycle;
}

}  // namespace

SimulatorAgreement verify_classification(const ClassificationReport& report,
                                         const VerifyOptions& opts) {
  const NormalizedParams& p = report.params;
  const double A = p.A();
  SimulatorAgreement out;

  add_distinct(out.simulated, simulate_from(p, A - 1e-6));
  add_distinct(out.simulated, simulate_from(p, p.beta * A + 1e-6));
  if (out.simulated.size() < report.cycles.size()) {
    for (int i = 0; i < opts.scan_probes; ++i) {
      const double v0 = p.beta * A + (A - p.beta * A) * (i + 0.5) / opts.scan_probes;
      add_distinct(out.simulated, simulate_from(p, v0));
      if (out.simulated.size() >= report.cycles.size()) break;
    }
  }
  std::sort(out.simulated.begin(), out.simulated.end(),
            [](const CycleDescriptor& a, const CycleDescriptor& b) { return a.order < b.order; });

  auto fail = [&](const std::string& what) {
    out.agree = false;
    out.mismatches.push_back(what);
  };

  std::vector<bool> used(out.simulated.size(), false);
  for (const auto& want : report.cycles) {
    std::ostringstream os;
    os.precision(12);
    auto it = std::find_if(out.simulated.begin(), out.simulated.end(),
                           [&](const CycleDescriptor& c) { return c.order == want.order; });
    if (it == out.simulated.end()) {
      os << "predicted " << want.order << "-cycle not reached by the simulator";
      fail(os.str());
      continue;
    }
    used[it - out.simulated.begin()] = true;
    if (it->shape != want.shape) {
      os << want.order << "-cycle shape: predicted " << to_string(want.shape) << ", simulated "
         << to_string(it->shape);
      fail(os.str());
      os.str("");
    }
    if (std::abs(it->v0 - want.v0) > opts.v0_tol) {
      os << want.order << "-cycle v0: predicted " << want.v0 << ", simulated " << it->v0;
      fail(os.str());
      os.str("");
    }
    if (std::abs(it->S_cycle - want.S_cycle) > opts.period_tol) {
      os << want.order << "-cycle period: predicted " << want.S_cycle << ", simulated "
         << it->S_cycle;
      fail(os.str());
    }
  }
  for (std::size_t i = 0; i < out.simulated.size(); ++i) {
    if (!used[i]) {
      std::ostringstream os;
      os << "simulator reached an unpredicted " << out.simulated[i].order << "-cycle ("
         << to_string(out.simulated[i].shape) << ")";
      fail(os.str());
    }
  }
  return out;
}

}  // namespace aimd
