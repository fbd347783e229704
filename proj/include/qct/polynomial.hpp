#pragma once

#include <cstdint>

#include "qct/scalar_field.hpp"
#include "qct/types.hpp"

namespace qct {

// Dense bivariate polynomial sum_{i+j<=degree} c(i,j) x^i y^j with analytic
// derivatives. coeff is (degree+1) x (degree+1); entries with i+j > degree
// are ignored.
class Polynomial2D {
 public:
  explicit Polynomial2D(Mat coeff);

  int degree() const { return static_cast<int>(coeff_.rows()) - 1; }
  const Mat& coefficients() const { return coeff_; }

  double value(double x, double y) const;
  Vec gradient(double x, double y) const;
  Mat hessian(double x, double y) const;

  ScalarField as_field() const;

 private:
  Mat coeff_;
};

// Deterministic uniform double in [-1, 1) from a 64-bit generator state;
// avoids std::uniform_real_distribution (implementation-defined sequences).
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  double uniform_pm1();   // [-1, 1)
  double uniform01();     // [0, 1)

 private:
  std::uint64_t state_;
};

// Random degree-4 superpotential draw used by the bound sweeps. The draw
// index selects a reproducible stream independent of call order.
Polynomial2D random_poly_2d(std::uint64_t seed, std::uint64_t draw);

}  // namespace qct
