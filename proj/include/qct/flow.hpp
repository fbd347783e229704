#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qct/potential.hpp"
#include "qct/trajectory.hpp"

namespace qct {

enum class FlowStatus { Converged, Trapped, Escaped, StepBudget };

std::string to_string(FlowStatus s);

struct FlowOptions {
  double rel_tol = 1e-9;            // adaptive step control
  double offset_rel = 1e-6;         // initial offset from the source, x box scale
  double capture_radius_rel = 1e-5; // x box scale
  double grad_capture_rel = 1e-7;   // |grad W| threshold, x field scale
  double escape_radius_rel = 1e3;   // x box scale
  long max_steps = 1000000;
  int n_samples = 1024;             // arc-length resampling of converged flows
  double length_scale = 0.0;        // 0 = derived from source/target separation
};

// Descending gradient flow dx/dtau = -grad W (direction_sign = +1) or the
// W -> -W reversed flow (direction_sign = -1). Construction fails unless the
// source has an unstable direction for the chosen sign.
class FlowProblem {
 public:
  FlowProblem(PotentialFromSuperpotential pfs, CriticalPoint source,
              CriticalPoint target, int direction_sign = +1,
              std::vector<CriticalPoint> known_points = {},
              FlowOptions options = {});

  const PotentialFromSuperpotential& pfs() const { return pfs_; }
  const CriticalPoint& source() const { return source_; }
  const CriticalPoint& target() const { return target_; }
  int direction_sign() const { return sign_; }
  const std::vector<CriticalPoint>& known_points() const { return known_; }
  const FlowOptions& options() const { return opts_; }
  double length_scale() const { return scale_; }
  // Unit unstable eigenvector at the source for the chosen sign.
  const Vec& unstable_direction() const { return unstable_; }

 private:
  PotentialFromSuperpotential pfs_;
  CriticalPoint source_;
  CriticalPoint target_;
  int sign_;
  std::vector<CriticalPoint> known_;
  FlowOptions opts_;
  double scale_;
  Vec unstable_;
};

struct FlowOutcome {
  FlowStatus status = FlowStatus::StepBudget;
  Trajectory trajectory;
  std::optional<CriticalPoint> captured_at;  // for Converged / Trapped
  std::string note;
};

// Integrates from both orientations of the unstable direction and keeps the
// outcome that reaches the requested target; converged trajectories are
// resampled uniformly in arc length.
FlowOutcome solve_flow(const FlowProblem& problem);

// Trapezoid/Simpson-type quadrature of 1/2 |xdot|^2 + V over tau with
// finite-difference velocities; flow endpoints contribute the analytic tails.
// Fewer than 8 samples is an error; a zero-length path has zero action.
double action_from_trajectory(const Trajectory& traj,
                              const PotentialFromSuperpotential& pfs);

double action_closed_form(const ScalarField& w, const CriticalPoint& a,
                          const CriticalPoint& b);

// max_k |xddot - grad V| / max(|grad V|, floor) over interior samples,
// velocities and accelerations by finite differences.
double verify_second_order(const Trajectory& traj,
                           const PotentialFromSuperpotential& pfs);

// Largest interior deviation |1/2 |xdot|^2 - V| relative to max V (the
// pointwise virial split of the flow action).
double kinetic_potential_split(const Trajectory& traj,
                               const PotentialFromSuperpotential& pfs);

// exp(-|W(a) - W(b)|), the amplitude bound that binds when no flow exists.
DecadeValue upper_bound_amplitude(const ScalarField& w, const CriticalPoint& a,
                                  const CriticalPoint& b);

// Largest increase of W between consecutive samples of a descending flow
// (0 for a perfectly monotone descent); sign = -1 checks ascent instead.
double max_descent_violation(const Trajectory& traj, const ScalarField& w,
                             int direction_sign = +1);

}  // namespace qct
