#pragma once

#include "qct/metric.hpp"
#include "qct/scalar_field.hpp"
#include "qct/types.hpp"

namespace qct {

// V(x) = 1/2 g^{ij}(x) dW_i dW_j. Non-negative by construction and zero
// exactly at critical points of W.
class PotentialFromSuperpotential {
 public:
  PotentialFromSuperpotential(ScalarField w, Metric g);

  Index dim() const { return w_.dim(); }
  const ScalarField& superpotential() const { return w_; }
  const Metric& metric() const { return g_; }

  double value(const Vec& x) const;
  // Flat metric: exact Hess(W) * grad(W); otherwise finite differences.
  Vec gradient(const Vec& x) const;
  Mat hessian(const Vec& x) const;

  // View as a plain field (value/gradient/hessian forwarded).
  ScalarField as_field() const;

 private:
  ScalarField w_;
  Metric g_;
};

}  // namespace qct
