#include "qct/potential.hpp"

#include <cmath>
#include <utility>

namespace qct {

PotentialFromSuperpotential::PotentialFromSuperpotential(ScalarField w, Metric g)
    : w_(std::move(w)), g_(std::move(g)) {
  if (g_.dim() != w_.dim())
    throw Error("PotentialFromSuperpotential: metric dimension does not match field");
}

double PotentialFromSuperpotential::value(const Vec& x) const {
  const Vec dw = w_.gradient(x);
  return 0.5 * g_.cosquared_norm(x, dw);
}

Vec PotentialFromSuperpotential::gradient(const Vec& x) const {
  if (g_.is_flat()) return w_.hessian(x) * w_.gradient(x);
  // Metric derivatives enter here; fall back to central differences of V.
  const Index n = dim();
  Vec g(n);
  Vec y = x;
  for (Index i = 0; i < n; ++i) {
    const double h = 1e-5 * std::max(1.0, std::abs(x[i]));
    y[i] = x[i] + h;
    const double vp = value(y);
    y[i] = x[i] - h;
    const double vm = value(y);
    y[i] = x[i];
    g[i] = (vp - vm) / (2.0 * h);
  }
  return g;
}

Mat PotentialFromSuperpotential::hessian(const Vec& x) const {
  const Index n = dim();
  Mat h(n, n);
  Vec y = x;
  for (Index i = 0; i < n; ++i) {
    const double step = 1e-5 * std::max(1.0, std::abs(x[i]));
    y[i] = x[i] + step;
    const Vec gp = gradient(y);
    y[i] = x[i] - step;
    const Vec gm = gradient(y);
    y[i] = x[i];
    h.col(i) = (gp - gm) / (2.0 * step);
  }
  return 0.5 * (h + h.transpose());
}

ScalarField PotentialFromSuperpotential::as_field() const {
  PotentialFromSuperpotential self = *this;
  return ScalarField::analytic(
      dim(),
      [self](const Vec& x) { return self.value(x); },
      [self](const Vec& x) { return self.gradient(x); },
      [self](const Vec& x) { return self.hessian(x); });
}

}  // namespace qct
