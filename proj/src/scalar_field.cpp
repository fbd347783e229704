#include "qct/scalar_field.hpp"

#include <cmath>
#include <utility>

namespace qct {

ScalarField::ScalarField(Index dim, ValueFn v, GradFn g, HessFn h, double fd_step_rel)
    : dim_(dim),
      value_(std::move(v)),
      grad_(std::move(g)),
      hess_(std::move(h)),
      fd_step_rel_(fd_step_rel) {
  if (dim_ < 1) throw Error("ScalarField: dimension must be >= 1");
  if (!value_) throw Error("ScalarField: value function required");
}

ScalarField ScalarField::analytic(Index dim, ValueFn value, GradFn grad, HessFn hess) {
  if (!grad || !hess) throw Error("ScalarField::analytic: gradient and hessian required");
  return ScalarField(dim, std::move(value), std::move(grad), std::move(hess), 1e-5);
}

ScalarField ScalarField::numeric(Index dim, ValueFn value, double fd_step_rel) {
  if (!(fd_step_rel > 0.0)) throw Error("ScalarField::numeric: fd_step_rel must be positive");
  return ScalarField(dim, std::move(value), nullptr, nullptr, fd_step_rel);
}

void ScalarField::check_dim(const Vec& x) const {
  if (x.size() != dim_)
    throw Error("ScalarField: point has dimension " + std::to_string(x.size()) +
                ", field expects " + std::to_string(dim_));
}

double ScalarField::value(const Vec& x) const {
  check_dim(x);
  return value_(x);
}

Vec ScalarField::gradient(const Vec& x) const {
  check_dim(x);
  if (grad_) return grad_(x);
  Vec g(dim_);
  Vec xp = x, xm = x;
  for (Index i = 0; i < dim_; ++i) {
    const double h = fd_step_rel_ * std::max(1.0, std::abs(x[i]));
    xp[i] = x[i] + h;
    xm[i] = x[i] - h;
    g[i] = (value_(xp) - value_(xm)) / (2.0 * h);
    xp[i] = x[i];
    xm[i] = x[i];
  }
  return g;
}

Mat ScalarField::hessian(const Vec& x) const {
  check_dim(x);
  if (hess_) {
    Mat h = hess_(x);
    return 0.5 * (h + h.transpose());
  }
  Mat h(dim_, dim_);
  const double f0 = value_(x);
  Vec step(dim_);
  for (Index i = 0; i < dim_; ++i)
    step[i] = fd_step_rel_ * std::max(1.0, std::abs(x[i]));

  Vec y = x;
  for (Index i = 0; i < dim_; ++i) {
    y[i] = x[i] + step[i];
    const double fp = value_(y);
    y[i] = x[i] - step[i];
    const double fm = value_(y);
    y[i] = x[i];
    h(i, i) = (fp - 2.0 * f0 + fm) / (step[i] * step[i]);
  }
  for (Index i = 0; i < dim_; ++i) {
    for (Index j = i + 1; j < dim_; ++j) {
      y[i] = x[i] + step[i]; y[j] = x[j] + step[j];
      const double fpp = value_(y);
      y[j] = x[j] - step[j];
      const double fpm = value_(y);
      y[i] = x[i] - step[i]; y[j] = x[j] + step[j];
      const double fmp = value_(y);
      y[j] = x[j] - step[j];
      const double fmm = value_(y);
      y[i] = x[i]; y[j] = x[j];
      const double v = (fpp - fpm - fmp + fmm) / (4.0 * step[i] * step[j]);
      h(i, j) = v;
      h(j, i) = v;
    }
  }
  return h;
}

ScalarField negate(const ScalarField& w) {
  auto neg_value = [w](const Vec& x) { return -w.value(x); };
  if (!w.has_analytic_derivatives())
    return ScalarField::numeric(w.dim(), neg_value, w.fd_step_rel());
  return ScalarField::analytic(
      w.dim(), neg_value,
      [w](const Vec& x) { return Vec(-w.gradient(x)); },
      [w](const Vec& x) { return Mat(-w.hessian(x)); });
}

}  // namespace qct
