#pragma once

#include <optional>

#include "qct/critical_points.hpp"
#include "qct/types.hpp"

namespace qct {

// Sampled path tau_k -> x_k, tau strictly increasing, one column per sample.
// Flow solvers attach the endpoint critical points so action quadratures can
// add the analytic endpoint tails |W(x_end) - W(xi)|.
struct Trajectory {
  Vec tau;
  Mat points;      // dim x n_samples
  Mat velocities;  // dim x n_samples, may be empty when unknown

  std::optional<CriticalPoint> source;
  std::optional<CriticalPoint> target;

  Index dim() const { return points.rows(); }
  Index size() const { return points.cols(); }

  // Chord length of the polyline (flat chart).
  double arc_length() const;
};

}  // namespace qct
