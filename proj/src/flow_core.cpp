#include "flow_core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qct::detail {
namespace {

struct OneRun {
  int orientation = +1;
  EngineResult raw;
  bool hit_target = false;
  std::optional<CriticalPoint> captured;
};

Trajectory from_samples(const std::vector<double>& tau, const std::vector<Vec>& x,
                        const std::vector<Vec>& v, Index dim) {
  Trajectory t;
  const Index n = static_cast<Index>(x.size());
  t.tau = Vec(n);
  t.points = Mat(dim, n);
  t.velocities = Mat(dim, n);
  for (Index k = 0; k < n; ++k) {
    t.tau[k] = tau[static_cast<std::size_t>(k)];
    t.points.col(k) = x[static_cast<std::size_t>(k)];
    t.velocities.col(k) = v[static_cast<std::size_t>(k)];
  }
  return t;
}

std::string describe(const OneRun& r) {
  std::string head = r.orientation > 0 ? "orientation +: " : "orientation -: ";
  switch (r.raw.status) {
    case EngineStatus::CapturedPoint:
    case EngineStatus::CapturedPoleLo:
    case EngineStatus::CapturedPoleHi:
      return head + (r.hit_target ? "reached target " : "captured at ") +
             format_point(r.captured ? r.captured->location : r.raw.last_point);
    case EngineStatus::Escaped:
      return head + "escaped at " + format_point(r.raw.last_point);
    case EngineStatus::StepBudget:
      return head + "step budget exhausted at " + format_point(r.raw.last_point);
    case EngineStatus::Failed:
      return head + "integrator failure at " + format_point(r.raw.last_point);
  }
  return head + "unknown";
}

OneRun run_one(const PairSetup& s, int orientation) {
  OneRun r;
  r.orientation = orientation;
  const Vec start = s.source.location +
                    (orientation > 0 ? s.offset : -s.offset) * s.offset_dir;
  r.raw = integrate_flow(s.ep, start);

  switch (r.raw.status) {
    case EngineStatus::CapturedPoint: {
      const auto& cp = s.known[static_cast<std::size_t>(r.raw.capture_index)];
      r.captured = cp;
      r.hit_target =
          chart_distance(cp.location, s.target.location, s.ep.period) <=
          s.ep.capture_radius;
      break;
    }
    case EngineStatus::CapturedPoleLo:
      r.captured = s.pole_lo_cp;
      r.hit_target = s.target_is_pole_lo;
      break;
    case EngineStatus::CapturedPoleHi:
      r.captured = s.pole_hi_cp;
      r.hit_target = s.target_is_pole_hi;
      break;
    default:
      break;
  }
  return r;
}

int rank(const OneRun& r) {
  if (r.hit_target) return 0;
  if (r.captured) return 1;  // trapped elsewhere
  if (r.raw.status == EngineStatus::Escaped) return 2;
  if (r.raw.status == EngineStatus::StepBudget) return 3;
  return 4;
}

}  // namespace

FlowOutcome run_flow_pair(const PairSetup& setup) {
  const OneRun plus = run_one(setup, +1);
  // A target hit by the + orientation decides immediately; otherwise the -
  // orientation gets its chance and ties break toward +.
  const OneRun minus = plus.hit_target ? OneRun{} : run_one(setup, -1);
  const bool have_minus = !plus.hit_target;

  const OneRun* best = &plus;
  if (have_minus && rank(minus) < rank(plus)) best = &minus;

  FlowOutcome out;
  out.note = describe(plus);
  if (have_minus) out.note += "; " + describe(minus);

  if (best->hit_target) {
    out.status = FlowStatus::Converged;
    out.captured_at = best->captured;
    const Vec start = setup.source.location +
                      (best->orientation > 0 ? setup.offset : -setup.offset) *
                          setup.offset_dir;
    ResampledPath path =
        resample_arclength(setup.ep, start, best->raw.status,
                           best->raw.capture_index, best->raw.arc_length,
                           setup.n_samples);
    if (path.ok) {
      out.trajectory = from_samples(path.tau, path.x, path.v, setup.ep.dim);
    } else {
      out.trajectory =
          from_samples(best->raw.tau, best->raw.x, best->raw.v, setup.ep.dim);
      out.note += "; arc-length resampling failed, adaptive samples kept";
    }
    out.trajectory.source = setup.source;
    out.trajectory.target = best->captured;
    return out;
  }

  out.trajectory =
      from_samples(best->raw.tau, best->raw.x, best->raw.v, setup.ep.dim);
  out.trajectory.source = setup.source;
  if (best->captured) {
    out.status = FlowStatus::Trapped;
    out.captured_at = best->captured;
    out.trajectory.target = best->captured;
  } else if (best->raw.status == EngineStatus::Escaped) {
    out.status = FlowStatus::Escaped;
  } else {
    out.status = FlowStatus::StepBudget;
  }
  return out;
}

}  // namespace qct::detail
