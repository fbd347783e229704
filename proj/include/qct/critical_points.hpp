#pragma once

#include <vector>

#include "qct/scalar_field.hpp"
#include "qct/types.hpp"

namespace qct {

// Nondegenerate zero of grad W, classified by the Morse index (number of
// negative Hessian eigenvalues). Degenerate points are reported with the
// flag set and morse_index = -1, never classified.
struct CriticalPoint {
  Vec location;
  double w_value = 0.0;
  int morse_index = -1;
  bool degenerate = false;
  Vec hessian_eigenvalues;   // ascending
  Mat hessian_eigenvectors;  // columns match eigenvalues
};

struct FindOptions {
  int n_seeds_per_side = 25;
  int max_newton_iters = 60;
  // |grad W| <= grad_tol_rel * field scale declares convergence.
  double grad_tol_rel = 1e-10;
  // Points closer than dedup_radius_rel * box diameter are merged.
  double dedup_radius_rel = 1e-6;
  // Eigenvalues below degeneracy_tol_rel * max|eig| flag the point degenerate.
  double degeneracy_tol_rel = 1e-8;
  // Margin (relative to diameter) by which roots may sit outside the box.
  double box_margin_rel = 1e-6;
};

// Newton iteration from a uniform seed grid; non-convergent seeds are
// silently dropped, results are deduplicated and sorted by descending W.
std::vector<CriticalPoint> find_critical_points(const ScalarField& w,
                                                const Box& search_box,
                                                const FindOptions& opts = {});

// The same point viewed through -W (used by reversed flows).
CriticalPoint negate_critical_point(const CriticalPoint& cp, Index dim);

}  // namespace qct
