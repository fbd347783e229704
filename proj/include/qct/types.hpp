#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace qct {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using Index = Eigen::Index;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Axis-aligned search region.
struct Box {
  Vec lo;
  Vec hi;

  Index dim() const { return lo.size(); }
  double diameter() const { return (hi - lo).norm(); }
  bool contains(const Vec& x, double tol = 0.0) const {
    return (x.array() >= lo.array() - tol).all() &&
           (x.array() <= hi.array() + tol).all();
  }
};

// Number kept as mantissa * 10^exponent so values like exp(-90) stay printable.
struct DecadeValue {
  double mantissa = 0.0;
  int exponent = 0;
  double log10_value = 0.0;

  static DecadeValue from_log10(double lg);
  // exp(-s) for s >= 0, exact in log10 space.
  static DecadeValue exp_neg(double s);
  double as_double() const;
};

std::string format_point(const Vec& x);

}  // namespace qct
