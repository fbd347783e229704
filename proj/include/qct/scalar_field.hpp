#pragma once

#include <functional>
#include <memory>

#include "qct/types.hpp"

namespace qct {

// Immutable real-valued field on R^n. Derivatives are either analytic
// (supplied at construction) or central finite differences with step
// h_i = fd_step_rel * max(1, |x_i|).
class ScalarField {
 public:
  using ValueFn = std::function<double(const Vec&)>;
  using GradFn = std::function<Vec(const Vec&)>;
  using HessFn = std::function<Mat(const Vec&)>;

  static ScalarField analytic(Index dim, ValueFn value, GradFn grad, HessFn hess);
  static ScalarField numeric(Index dim, ValueFn value, double fd_step_rel = 1e-5);

  Index dim() const { return dim_; }
  bool has_analytic_derivatives() const { return static_cast<bool>(grad_); }
  double fd_step_rel() const { return fd_step_rel_; }

  double value(const Vec& x) const;
  Vec gradient(const Vec& x) const;
  // Always symmetric (finite-difference result is symmetrized).
  Mat hessian(const Vec& x) const;

 private:
  ScalarField(Index dim, ValueFn v, GradFn g, HessFn h, double fd_step_rel);
  void check_dim(const Vec& x) const;

  Index dim_;
  ValueFn value_;
  GradFn grad_;
  HessFn hess_;
  double fd_step_rel_;
};

// Field with the sign of W flipped; critical points are shared, Morse
// indices complement.
ScalarField negate(const ScalarField& w);

}  // namespace qct
