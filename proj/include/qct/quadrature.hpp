#pragma once

#include <functional>

#include "qct/types.hpp"

namespace qct {

struct QuadResult {
  double value = 0.0;
  double error_bound = 0.0;
  int n_evals = 0;
  bool converged = false;
};

struct QuadOptions {
  double rel_tol = 1e-9;
  double abs_tol = 1e-300;
  int max_intervals = 4096;
};

// Adaptive Gauss-Kronrod 7/15 on [a, b]. Throws if the requested tolerance
// is not reached (message carries the achieved estimate and bound).
QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     const QuadOptions& opts = {});

// Same integral after the substitution r = a + (b-a) sin^2(u), which
// regularizes sqrt-type vanishing of the integrand at either endpoint.
QuadResult integrate_endpoint_regularized(const std::function<double(double)>& f,
                                          double a, double b,
                                          const QuadOptions& opts = {});

}  // namespace qct
