#include "qct/polynomial.hpp"

#include <cmath>
#include <utility>

namespace qct {

Polynomial2D::Polynomial2D(Mat coeff) : coeff_(std::move(coeff)) {
  if (coeff_.rows() != coeff_.cols() || coeff_.rows() < 1)
    throw Error("Polynomial2D: coefficient table must be square and non-empty");
}

double Polynomial2D::value(double x, double y) const {
  const int n = static_cast<int>(coeff_.rows());
  double acc = 0.0;
  double xi = 1.0;
  for (int i = 0; i < n; ++i) {
    double yj = 1.0;
    for (int j = 0; j + i < n; ++j) {
      acc += coeff_(i, j) * xi * yj;
      yj *= y;
    }
    xi *= x;
  }
  return acc;
}

Vec Polynomial2D::gradient(double x, double y) const {
  const int n = static_cast<int>(coeff_.rows());
  Vec g = Vec::Zero(2);
  double xi = 1.0;
  for (int i = 0; i < n; ++i) {
    double yj = 1.0;
    for (int j = 0; j + i < n; ++j) {
      if (i > 0) g[0] += i * coeff_(i, j) * std::pow(x, i - 1) * yj;
      if (j > 0) g[1] += j * coeff_(i, j) * xi * std::pow(y, j - 1);
      yj *= y;
    }
    xi *= x;
  }
  return g;
}

Mat Polynomial2D::hessian(double x, double y) const {
  const int n = static_cast<int>(coeff_.rows());
  Mat h = Mat::Zero(2, 2);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j + i < n; ++j) {
      const double c = coeff_(i, j);
      if (c == 0.0) continue;
      if (i >= 2) h(0, 0) += i * (i - 1) * c * std::pow(x, i - 2) * std::pow(y, j);
      if (j >= 2) h(1, 1) += j * (j - 1) * c * std::pow(x, i) * std::pow(y, j - 2);
      if (i >= 1 && j >= 1)
        h(0, 1) += i * j * c * std::pow(x, i - 1) * std::pow(y, j - 1);
    }
  }
  h(1, 0) = h(0, 1);
  return h;
}

ScalarField Polynomial2D::as_field() const {
  Polynomial2D self = *this;
  return ScalarField::analytic(
      2,
      [self](const Vec& p) { return self.value(p[0], p[1]); },
      [self](const Vec& p) { return self.gradient(p[0], p[1]); },
      [self](const Vec& p) { return self.hessian(p[0], p[1]); });
}

std::uint64_t SplitMix64::next() {
  state_ += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

double SplitMix64::uniform01() {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

double SplitMix64::uniform_pm1() { return 2.0 * uniform01() - 1.0; }

Polynomial2D random_poly_2d(std::uint64_t seed, std::uint64_t draw) {
  SplitMix64 rng(seed ^ (0xa0761d6478bd642full * (draw + 1)));
  Mat c = Mat::Zero(5, 5);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j + i < 5; ++j) {
      if (i == 0 && j == 0) continue;  // constant offset is irrelevant
      c(i, j) = rng.uniform_pm1();
    }
  return Polynomial2D(c);
}

}  // namespace qct
