#include "qct/wkb.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace qct {

namespace {

// Bisect a bracketed crossing of V = E down to machine width.
double bisect_crossing(const BarrierModel1D& model, double lo, double hi) {
  const double e = model.energy;
  double flo = model.potential(lo) - e;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    const double fmid = model.potential(mid) - e;
    if (fmid == 0.0) return mid;
    if ((flo < 0.0) == (fmid < 0.0)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TurningPoints turning_points(const BarrierModel1D& model, int n_scan) {
  if (!(model.bracket_hi > model.bracket_lo))
    throw Error("turning_points: bracket is empty");
  if (n_scan < 8) throw Error("turning_points: scan grid too coarse");

  const double e = model.energy;
  std::vector<double> crossings;
  double r_prev = model.bracket_lo;
  double f_prev = model.potential(r_prev) - e;
  for (int i = 1; i <= n_scan; ++i) {
    const double r = model.bracket_lo +
                     (model.bracket_hi - model.bracket_lo) * i / n_scan;
    const double f = model.potential(r) - e;
    if ((f_prev < 0.0 && f >= 0.0) || (f_prev >= 0.0 && f < 0.0))
      crossings.push_back(bisect_crossing(model, r_prev, r));
    r_prev = r;
    f_prev = f;
  }

  if (crossings.size() != 2) {
    std::string msg = "turning_points: expected 2 crossings of V = E, found " +
                      std::to_string(crossings.size());
    if (!crossings.empty()) {
      msg += " at";
      for (double c : crossings) msg += " " + std::to_string(c);
    }
    throw Error(msg);
  }

  TurningPoints tp;
  tp.r_in = crossings[0];
  tp.r_out = crossings[1];
  // At a genuine crossing |V - E| is tiny at the bisected point; at a step
  // the function jumps across E and the residual stays finite.
  const double tol = 1e-9 * std::max(std::abs(e), 1e-30);
  const double res_in = std::abs(model.potential(tp.r_in) - e);
  tp.inner_is_step = res_in > tol;
  return tp;
}

double wkb_exponent(const BarrierModel1D& model, double r_in, double r_out) {
  if (r_out < r_in) throw Error("wkb_exponent: r_out must not precede r_in");
  const double two_m = 2.0 * model.mass;
  auto integrand = [&model, two_m](double r) {
    const double q = two_m * (model.potential(r) - model.energy);
    return q > 0.0 ? std::sqrt(q) : 0.0;
  };
  return integrate_endpoint_regularized(integrand, r_in, r_out, model.quad).value;
}

double wkb_exponent(const BarrierModel1D& model) {
  const TurningPoints tp = turning_points(model);
  return wkb_exponent(model, tp.r_in, tp.r_out);
}

DecadeValue tunneling_probability(double wkb_exponent_value) {
  if (wkb_exponent_value < 0.0)
    throw Error("tunneling_probability: exponent must be non-negative");
  return DecadeValue::exp_neg(2.0 * wkb_exponent_value);
}

}  // namespace qct
