#pragma once

#include <limits>
#include <string>
#include <vector>

#include "qct/critical_points.hpp"
#include "qct/flow.hpp"
#include "qct/metric.hpp"
#include "qct/scalar_field.hpp"
#include "qct/trajectory.hpp"

namespace qct {

// Single-chart surface of revolution coordinates: x = (theta, phi) with
// theta in (0, pi), phi periodic in [0, 2 pi). The chart metric degenerates
// at the poles; flows begin and end at theta_min with analytic tails.
struct ChartedSurface {
  std::string id;
  Metric metric;
  double theta_min = 1e-4;
};

ChartedSurface make_sphere();
// Embedding (a sin t cos p, a sin t sin p, c cos t):
// g = diag(a^2 cos^2 t + c^2 sin^2 t, a^2 sin^2 t).
ChartedSurface make_spheroid(double a, double c);

// Stationary structure of W on the closed surface: interior chart critical
// points plus the two poles, classified by sampling W on a small ring.
struct SurfaceCriticalPoints {
  CriticalPoint north;  // theta = 0
  CriticalPoint south;  // theta = pi
  std::vector<CriticalPoint> interior;

  // north, south, then interior in the search order; index matches id().
  std::vector<CriticalPoint> all() const;
  static std::string id(std::size_t index_in_all);
};

SurfaceCriticalPoints surface_critical_points(const ChartedSurface& surface,
                                              const ScalarField& w,
                                              const FindOptions& opts = {});

// Gradient flow dx/dtau = -(sign) g^{ij} dW/dx^j between stationary points.
// Pole sources are offset to theta_min along the steepest descent (or ascent)
// meridian; pass pole_phi to select a specific meridian of the family.
FlowOutcome manifold_flow(
    const ChartedSurface& surface, const ScalarField& w,
    const CriticalPoint& source, const CriticalPoint& target,
    int direction_sign = +1, std::vector<CriticalPoint> known_points = {},
    FlowOptions options = {},
    double pole_phi = std::numeric_limits<double>::quiet_NaN());

// Metric action quadrature of 1/2 g_ij xdot^i xdot^j + V with the same
// endpoint tails as the flat route; poles contribute |W(x_end) - W(pole)|.
double manifold_action(const Trajectory& traj, const ChartedSurface& surface,
                       const ScalarField& w);

struct MorseCell {
  CriticalPoint source;
  CriticalPoint sink;
  std::string source_id;
  std::string sink_id;
  std::vector<Vec> members;
};

struct MorseCellReport {
  std::vector<MorseCell> cells;
  std::vector<Vec> unclassified;
  long n_seeds = 0;
  double classified_fraction = 0.0;
};

struct MorseOptions {
  double separatrix_tol = 1e-3;  // chart distance to a saddle terminus
  double rel_tol = 1e-6;         // classification-grade integration
  double capture_radius = 3e-4;
  double grad_capture_rel = 1e-4;
  long max_steps = 20000;
};

// Classifies an n_theta x n_phi half-cell-offset seed grid by the terminus of
// the descending flow (sink) and the ascending flow (source); seeds ending
// near saddles or exhausting budgets are reported unclassified.
MorseCellReport morse_cells(const ChartedSurface& surface, const ScalarField& w,
                            const SurfaceCriticalPoints& cps, Index n_theta,
                            Index n_phi, const MorseOptions& options = {});

}  // namespace qct
