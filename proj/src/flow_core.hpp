#pragma once

#include <optional>
#include <vector>

#include "flow_engine.hpp"
#include "qct/critical_points.hpp"
#include "qct/flow.hpp"

namespace qct::detail {

// Orientation-pair driver shared by the flat and charted-surface front ends.
// `ep.capture_points` must align with `known`; poles (if the chart has them)
// carry their own payloads and a flag telling whether they are the target.
struct PairSetup {
  EngineProblem ep;
  std::vector<CriticalPoint> known;
  CriticalPoint source;
  CriticalPoint target;
  Vec offset_dir;  // unit departure direction in chart coordinates
  double offset = 0.0;
  int n_samples = 1024;
  std::optional<CriticalPoint> pole_lo_cp;
  std::optional<CriticalPoint> pole_hi_cp;
  bool target_is_pole_lo = false;
  bool target_is_pole_hi = false;
};

FlowOutcome run_flow_pair(const PairSetup& setup);

}  // namespace qct::detail
