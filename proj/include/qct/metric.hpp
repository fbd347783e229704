#pragma once

#include <functional>

#include "qct/types.hpp"

namespace qct {

// Riemannian metric on a chart. Components must be symmetric positive
// definite wherever they are evaluated; a non-PD evaluation is a hard error
// naming the offending point.
class Metric {
 public:
  using ComponentsFn = std::function<Mat(const Vec&)>;

  static Metric flat(Index dim);
  static Metric from_components(Index dim, ComponentsFn g);

  Index dim() const { return dim_; }
  bool is_flat() const { return !static_cast<bool>(components_); }

  Mat components(const Vec& x) const;
  // Inverse via Cholesky; throws if g(x) is not positive definite.
  Mat inverse(const Vec& x) const;

  double squared_norm(const Vec& x, const Vec& v) const;    // v^T g(x) v
  double cosquared_norm(const Vec& x, const Vec& p) const;  // p^T g^{-1}(x) p

 private:
  Metric(Index dim, ComponentsFn g) : dim_(dim), components_(std::move(g)) {}

  Index dim_;
  ComponentsFn components_;
};

}  // namespace qct
