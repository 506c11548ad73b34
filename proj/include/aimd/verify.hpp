#pragma once

#include <string>
#include <vector>

#include "aimd/classifier.hpp"

namespace aimd {

struct VerifyOptions {
  double v0_tol = 1e-8;
  double period_tol = 1e-8;
  int scan_probes = 64;  // extra starting points tried when seeds miss a cycle
};

struct SimulatorAgreement {
  bool agree = true;
  std::vector<std::string> mismatches;
  std::vector<CycleDescriptor> simulated;  // distinct limits reached, ascending order
};

/// Seeds the simulator in each predicted basin (just below A and just above
/// beta A, then a scan of [beta A, A) if needed) and compares the limits it
/// reaches with the report: order and shape exactly, v0 and period within
/// tolerance, and no unpredicted limits.
SimulatorAgreement verify_classification(const ClassificationReport& report,
                                         const VerifyOptions& opts = {});

}  // namespace aimd
