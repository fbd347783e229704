#pragma once

#include <functional>
#include <vector>

#include "qct/types.hpp"

namespace qct::detail {

// Shared gradient-flow integrator. The chart may have periodic coordinates
// (period 0 = none) and pole edges on coordinate 0 where the metric
// degenerates; crossing a pole threshold is a capture in its own right.
struct EngineProblem {
  Index dim = 0;
  std::function<Vec(const Vec&)> rhs;
  // Metric norm of a velocity v at x; flat charts pass v.norm().
  std::function<double(const Vec&, const Vec&)> speed;
  Vec period;
  double pole_lo = -1e300;
  double pole_hi = 1e300;
  std::vector<Vec> capture_points;
  double capture_radius = 1e-5;
  double grad_capture_rel = 1e-7;  // on |rhs|_g, x max(1, running max)
  double escape_radius = 1e3;
  long max_steps = 1000000;
  double rel_tol = 1e-9;
  double length_scale = 1.0;
  bool record_path = true;
};

enum class EngineStatus { CapturedPoint, CapturedPoleLo, CapturedPoleHi, Escaped, StepBudget, Failed };

struct EngineResult {
  EngineStatus status = EngineStatus::Failed;
  int capture_index = -1;  // into capture_points for CapturedPoint
  std::vector<double> tau;
  std::vector<Vec> x;
  std::vector<Vec> v;
  Vec last_point;
  double arc_length = 0.0;  // metric chord length of the whole run
  long steps = 0;
};

// Chart distance respecting periodic coordinates.
double chart_distance(const Vec& a, const Vec& b, const Vec& period);

EngineResult integrate_flow(const EngineProblem& p, const Vec& start);

// Re-integrates a captured run in arc length with n_uniform nominally equal
// steps (geometric ramps at both ends keep tau accurate where the speed
// collapses). end_status tells which capture terminated the original run.
struct ResampledPath {
  bool ok = false;
  std::vector<double> tau;
  std::vector<Vec> x;
  std::vector<Vec> v;
};

ResampledPath resample_arclength(const EngineProblem& p, const Vec& start,
                                 EngineStatus end_status, int capture_index,
                                 double total_arc, int n_uniform);

}  // namespace qct::detail
