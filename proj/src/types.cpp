#include "qct/types.hpp"

#include <cmath>
#include <cstdio>

namespace qct {

DecadeValue DecadeValue::from_log10(double lg) {
  DecadeValue d;
  d.log10_value = lg;
  d.exponent = static_cast<int>(std::floor(lg));
  d.mantissa = std::pow(10.0, lg - d.exponent);
  if (d.mantissa >= 10.0) {  // guard rounding at the decade edge
    d.mantissa /= 10.0;
    d.exponent += 1;
  }
  return d;
}

DecadeValue DecadeValue::exp_neg(double s) {
  return from_log10(-s / std::log(10.0));
}

double DecadeValue::as_double() const {
  return mantissa * std::pow(10.0, exponent);
}

std::string format_point(const Vec& x) {
  std::string s = "(";
  char buf[40];
  for (Index i = 0; i < x.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.12g", x[i]);
    s += buf;
    if (i + 1 < x.size()) s += ", ";
  }
  s += ")";
  return s;
}

}  // namespace qct
