#include "qct/catalog.hpp"

#include <cmath>
#include <numbers>

#include "qct/polynomial.hpp"

namespace qct {

namespace {

constexpr double kPi = std::numbers::pi;

Box box1(double lo, double hi) {
  Box b;
  b.lo = Vec::Constant(1, lo);
  b.hi = Vec::Constant(1, hi);
  return b;
}

Box box2(double xlo, double xhi, double ylo, double yhi) {
  Box b;
  b.lo = Vec(2);
  b.hi = Vec(2);
  b.lo << xlo, ylo;
  b.hi << xhi, yhi;
  return b;
}

std::map<std::string, double> resolve_params(
    const std::string& id, const std::map<std::string, double>& defaults,
    const std::map<std::string, double>& given) {
  std::map<std::string, double> out = defaults;
  for (const auto& [key, value] : given) {
    auto it = out.find(key);
    if (it == out.end())
      throw Error("catalog field '" + id + "': unknown parameter '" + key + "'");
    it->second = value;
  }
  return out;
}

}  // namespace

CatalogField make_field(const std::string& id,
                        const std::map<std::string, double>& params) {
  if (id == "double-well") {
    auto p = resolve_params(id, {{"m", 1.0}, {"lambda", 1.0}, {"eta", 1.0}}, params);
    const double m = p.at("m");
    const double lambda = p.at("lambda");
    const double eta = p.at("eta");
    if (!(m > 0.0) || !(lambda > 0.0) || !(eta > 0.0))
      throw Error("catalog field 'double-well': m, lambda, eta must be positive");
    const double c = std::sqrt(2.0 * lambda * m);
    const double e2 = eta * eta;
    auto field = ScalarField::analytic(
        1,
        [c, e2](const Vec& x) { return c * (e2 * x[0] - x[0] * x[0] * x[0] / 3.0); },
        [c, e2](const Vec& x) { return Vec::Constant(1, c * (e2 - x[0] * x[0])); },
        [c](const Vec& x) { return Mat::Constant(1, 1, -2.0 * c * x[0]); });
    const double r = 2.0 * std::max(1.0, eta);
    return CatalogField{id, std::move(field), box1(-r, r), std::move(p)};
  }

  if (id == "saddle-to-min") {
    auto p = resolve_params(id, {}, params);
    auto field = ScalarField::analytic(
        2,
        [](const Vec& q) {
          return q[0] * q[0] * q[0] / 3.0 - q[0] + 0.5 * q[1] * q[1];
        },
        [](const Vec& q) {
          Vec g(2);
          g << q[0] * q[0] - 1.0, q[1];
          return g;
        },
        [](const Vec& q) {
          Mat h = Mat::Zero(2, 2);
          h(0, 0) = 2.0 * q[0];
          h(1, 1) = 1.0;
          return h;
        });
    return CatalogField{id, std::move(field), box2(-2.0, 2.0, -2.0, 2.0), std::move(p)};
  }

  if (id == "quartic") {
    auto p = resolve_params(id, {}, params);
    auto field = ScalarField::analytic(
        1,
        [](const Vec& x) {
          const double t = x[0] * x[0];
          return 0.25 * t * t - 0.5 * t;
        },
        [](const Vec& x) { return Vec::Constant(1, x[0] * x[0] * x[0] - x[0]); },
        [](const Vec& x) { return Mat::Constant(1, 1, 3.0 * x[0] * x[0] - 1.0); });
    return CatalogField{id, std::move(field), box1(-2.0, 2.0), std::move(p)};
  }

  if (id == "sphere-height") {
    auto p = resolve_params(id, {}, params);
    auto field = ScalarField::analytic(
        2,
        [](const Vec& q) { return std::cos(q[0]); },
        [](const Vec& q) {
          Vec g(2);
          g << -std::sin(q[0]), 0.0;
          return g;
        },
        [](const Vec& q) {
          Mat h = Mat::Zero(2, 2);
          h(0, 0) = -std::cos(q[0]);
          return h;
        });
    return CatalogField{id, std::move(field), box2(0.0, kPi, 0.0, 2.0 * kPi), std::move(p)};
  }

  if (id == "sphere-height-perturbed") {
    auto p = resolve_params(id, {{"amplitude", 0.3}}, params);
    const double a = p.at("amplitude");
    auto field = ScalarField::analytic(
        2,
        [a](const Vec& q) {
          const double s = std::sin(q[0]);
          return std::cos(q[0]) + a * s * s * std::cos(q[1]);
        },
        [a](const Vec& q) {
          const double s = std::sin(q[0]);
          Vec g(2);
          g << -s + a * std::sin(2.0 * q[0]) * std::cos(q[1]),
              -a * s * s * std::sin(q[1]);
          return g;
        },
        [a](const Vec& q) {
          const double s = std::sin(q[0]);
          Mat h(2, 2);
          h(0, 0) = -std::cos(q[0]) + 2.0 * a * std::cos(2.0 * q[0]) * std::cos(q[1]);
          h(0, 1) = -a * std::sin(2.0 * q[0]) * std::sin(q[1]);
          h(1, 0) = h(0, 1);
          h(1, 1) = -a * s * s * std::cos(q[1]);
          return h;
        });
    return CatalogField{id, std::move(field), box2(0.0, kPi, 0.0, 2.0 * kPi), std::move(p)};
  }

  if (id == "sphere-biaxial") {
    auto p = resolve_params(id, {{"b", 1.0}}, params);
    const double b = p.at("b");
    auto field = ScalarField::analytic(
        2,
        [b](const Vec& q) {
          const double s = std::sin(q[0]);
          const double c = std::cos(q[1]);
          return std::cos(q[0]) + b * s * s * c * c;
        },
        [b](const Vec& q) {
          const double s = std::sin(q[0]);
          const double c = std::cos(q[1]);
          Vec g(2);
          g << -s + b * std::sin(2.0 * q[0]) * c * c,
              -b * s * s * std::sin(2.0 * q[1]);
          return g;
        },
        [b](const Vec& q) {
          const double s = std::sin(q[0]);
          const double c = std::cos(q[1]);
          Mat h(2, 2);
          h(0, 0) = -std::cos(q[0]) + 2.0 * b * std::cos(2.0 * q[0]) * c * c;
          h(0, 1) = -b * std::sin(2.0 * q[0]) * std::sin(2.0 * q[1]);
          h(1, 0) = h(0, 1);
          h(1, 1) = -2.0 * b * s * s * std::cos(2.0 * q[1]);
          return h;
        });
    return CatalogField{id, std::move(field), box2(0.0, kPi, 0.0, 2.0 * kPi), std::move(p)};
  }

  if (id == "random-poly-2d") {
    auto p = resolve_params(id, {{"seed", 1.0}, {"draw", 0.0}}, params);
    const auto seed = static_cast<std::uint64_t>(p.at("seed"));
    const auto draw = static_cast<std::uint64_t>(p.at("draw"));
    auto field = random_poly_2d(seed, draw).as_field();
    return CatalogField{id, std::move(field), box2(-2.0, 2.0, -2.0, 2.0), std::move(p)};
  }

  throw Error("unknown catalog field '" + id + "'");
}

std::vector<std::string> field_ids() {
  return {"double-well",   "saddle-to-min",           "quartic",
          "sphere-height", "sphere-height-perturbed", "sphere-biaxial",
          "random-poly-2d"};
}

}  // namespace qct
