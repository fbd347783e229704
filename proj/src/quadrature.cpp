#include "qct/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace qct {

namespace {

// 15-point Kronrod extension of the 7-point Gauss rule.
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

constexpr double kWgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

constexpr double kWg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct Interval {
  double a, b, value, err;
};

Interval gk15(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double result_g = fc * kWg[3];
  double result_k = fc * kWgk[7];
  for (int j = 0; j < 7; ++j) {
    const double x = h * kXgk[j];
    const double f1 = f(c - x);
    const double f2 = f(c + x);
    result_k += kWgk[j] * (f1 + f2);
    if (j % 2 == 1) result_g += kWg[j / 2] * (f1 + f2);
  }
  Interval out;
  out.a = a;
  out.b = b;
  out.value = result_k * h;
  out.err = std::abs((result_k - result_g) * h);
  return out;
}

}  // namespace

QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     const QuadOptions& opts) {
  QuadResult res;
  if (a == b) {
    res.converged = true;
    return res;
  }

  std::vector<Interval> stack;
  stack.push_back(gk15(f, a, b));
  res.n_evals = 15;

  double total = stack.back().value;
  double total_err = stack.back().err;
  while (static_cast<int>(stack.size()) < opts.max_intervals) {
    const double tol = std::max(opts.abs_tol, opts.rel_tol * std::abs(total));
    if (total_err <= tol) break;
    // Split the interval with the largest error estimate.
    auto worst = std::max_element(
        stack.begin(), stack.end(),
        [](const Interval& u, const Interval& v) { return u.err < v.err; });
    const Interval w = *worst;
    stack.erase(worst);
    const double mid = 0.5 * (w.a + w.b);
    stack.push_back(gk15(f, w.a, mid));
    stack.push_back(gk15(f, mid, w.b));
    res.n_evals += 30;
    total = 0.0;
    total_err = 0.0;
    for (const Interval& iv : stack) {
      total += iv.value;
      total_err += iv.err;
    }
  }

  res.value = total;
  res.error_bound = total_err;
  res.converged =
      total_err <= std::max(opts.abs_tol, opts.rel_tol * std::abs(total));
  if (!res.converged)
    throw Error("quadrature did not reach tolerance: estimate " +
                std::to_string(total) + ", error bound " + std::to_string(total_err));
  return res;
}

QuadResult integrate_endpoint_regularized(const std::function<double(double)>& f,
                                          double a, double b,
                                          const QuadOptions& opts) {
  if (a == b) {
    QuadResult res;
    res.converged = true;
    return res;
  }
  const double span = b - a;
  auto g = [&f, a, span](double u) {
    const double s = std::sin(u);
    const double r = a + span * s * s;
    return f(r) * span * std::sin(2.0 * u);
  };
  return integrate(g, 0.0, 0.5 * std::numbers::pi, opts);
}

}  // namespace qct
