#include <cmath>
#include <set>

#include "doctest.h"
#include "qct/catalog.hpp"
#include "qct/critical_points.hpp"
#include "qct/metric.hpp"
#include "qct/polynomial.hpp"
#include "qct/scalar_field.hpp"
#include "qct/types.hpp"

using namespace qct;

namespace {

Vec v2(double x, double y) {
  Vec v(2);
  v << x, y;
  return v;
}

Vec v1(double x) {
  Vec v(1);
  v << x;
  return v;
}

}  // namespace

TEST_CASE("numeric field reproduces analytic derivatives") {
  auto value = [](const Vec& x) { return std::sin(x[0]) * std::cos(x[1]); };
  ScalarField num = ScalarField::numeric(2, value);
  CHECK(!num.has_analytic_derivatives());

  const Vec x = v2(0.7, -1.3);
  const double s = std::sin(x[0]), c = std::cos(x[0]);
  const double sc = std::sin(x[1]), cc = std::cos(x[1]);
  Vec g_exact(2);
  g_exact << c * cc, -s * sc;
  Mat h_exact(2, 2);
  h_exact << -s * cc, -c * sc, -c * sc, -s * cc;

  CHECK(num.value(x) == doctest::Approx(s * cc).epsilon(1e-14));
  CHECK((num.gradient(x) - g_exact).norm() < 1e-9);
  CHECK((num.hessian(x) - h_exact).norm() < 1e-4);
  // Finite-difference Hessian must come back exactly symmetric.
  const Mat h = num.hessian(x);
  CHECK(h(0, 1) == h(1, 0));
}

TEST_CASE("negate flips values and derivatives") {
  CatalogField dw = make_field("double-well");
  ScalarField neg = negate(dw.field);
  const Vec x = v1(0.37);
  CHECK(neg.value(x) == doctest::Approx(-dw.field.value(x)).epsilon(1e-15));
  CHECK(neg.gradient(x)[0] == doctest::Approx(-dw.field.gradient(x)[0]).epsilon(1e-15));
  CHECK(neg.hessian(x)(0, 0) == doctest::Approx(-dw.field.hessian(x)(0, 0)).epsilon(1e-15));
}

TEST_CASE("double-well critical points and the frozen W differences") {
  // W = sqrt(2 lambda m) (eta^2 x - x^3/3) has nondegenerate zeros of W' at
  // +-eta; |Delta W| = (4/3) sqrt(2 lambda m) eta^3.
  struct Row {
    double m, lambda, eta, dw;
  };
  const Row rows[] = {
      {1.0, 1.0, 1.0, 1.8856180831641272},   // (4/3) sqrt 2
      {4.0, 1.0, 1.0, 3.7712361663282545},   // (8/3) sqrt 2
      {1.0, 2.0, 0.5, 1.0 / 3.0},
  };
  for (const Row& r : rows) {
    CAPTURE(r.m);
    CAPTURE(r.lambda);
    CAPTURE(r.eta);
    CatalogField cf = make_field(
        "double-well", {{"m", r.m}, {"lambda", r.lambda}, {"eta", r.eta}});
    auto cps = find_critical_points(cf.field, cf.default_box);
    REQUIRE(cps.size() == 2);
    CHECK(std::abs(cps[0].location[0]) == doctest::Approx(r.eta).epsilon(1e-8));
    CHECK(std::abs(cps[1].location[0]) == doctest::Approx(r.eta).epsilon(1e-8));
    CHECK(cps[0].w_value > cps[1].w_value);  // sorted by descending W
    CHECK(std::abs(cps[0].w_value - cps[1].w_value) ==
          doctest::Approx(r.dw).epsilon(1e-12));
    for (const auto& cp : cps) CHECK(!cp.degenerate);
  }
}

TEST_CASE("saddle-to-min critical points carry the right Morse data") {
  CatalogField cf = make_field("saddle-to-min");
  auto cps = find_critical_points(cf.field, cf.default_box);
  REQUIRE(cps.size() == 2);
  // W = x^3/3 - x + y^2/2: saddle at (-1,0) with W = 2/3, min at (1,0).
  CHECK(cps[0].location[0] == doctest::Approx(-1.0).epsilon(1e-10));
  CHECK(cps[0].w_value == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(cps[0].morse_index == 1);
  CHECK(cps[1].location[0] == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(cps[1].w_value == doctest::Approx(-2.0 / 3.0).epsilon(1e-12));
  CHECK(cps[1].morse_index == 0);
  CHECK(std::abs(cps[0].w_value - cps[1].w_value) ==
        doctest::Approx(4.0 / 3.0).epsilon(1e-12));
  // Eigen-decomposition of the Hessian diag(2x, 1) at the saddle.
  CHECK(cps[0].hessian_eigenvalues[0] == doctest::Approx(-2.0).epsilon(1e-8));
  CHECK(cps[0].hessian_eigenvalues[1] == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("quartic has an index-1 top and two index-0 wells") {
  CatalogField cf = make_field("quartic");
  auto cps = find_critical_points(cf.field, cf.default_box);
  REQUIRE(cps.size() == 3);
  CHECK(std::abs(cps[0].location[0]) < 1e-9);
  CHECK(std::abs(cps[0].w_value) < 1e-12);
  CHECK(cps[0].morse_index == 1);
  CHECK(cps[1].w_value == doctest::Approx(-0.25).epsilon(1e-12));
  CHECK(cps[2].w_value == doctest::Approx(-0.25).epsilon(1e-12));
  CHECK(cps[1].morse_index == 0);
  CHECK(cps[2].morse_index == 0);
}

TEST_CASE("degenerate critical point is flagged, never classified") {
  // W = x^4 has a degenerate zero of W' at the origin.
  ScalarField w = ScalarField::analytic(
      1, [](const Vec& x) { return std::pow(x[0], 4); },
      [](const Vec& x) {
        Vec g(1);
        g << 4.0 * std::pow(x[0], 3);
        return g;
      },
      [](const Vec& x) {
        Mat h(1, 1);
        h << 12.0 * x[0] * x[0];
        return h;
      });
  Box box;
  box.lo = v1(-1.0);
  box.hi = v1(1.0);
  auto cps = find_critical_points(w, box);
  REQUIRE(cps.size() == 1);
  CHECK(cps[0].degenerate);
  CHECK(cps[0].morse_index == -1);
}

TEST_CASE("negate_critical_point complements the Morse index") {
  CatalogField cf = make_field("saddle-to-min");
  auto cps = find_critical_points(cf.field, cf.default_box);
  REQUIRE(cps.size() == 2);
  CriticalPoint flipped = negate_critical_point(cps[1], 2);
  CHECK(flipped.w_value == doctest::Approx(-cps[1].w_value).epsilon(1e-15));
  CHECK(flipped.morse_index == 2 - cps[1].morse_index);
  CHECK((flipped.location - cps[1].location).norm() == 0.0);
  CHECK(flipped.hessian_eigenvalues[0] ==
        doctest::Approx(-cps[1].hessian_eigenvalues[1]).epsilon(1e-12));
}

TEST_CASE("catalog rejects unknown ids and parameters") {
  CHECK_THROWS_AS(make_field("no-such-field"), Error);
  CHECK_THROWS_AS(make_field("double-well", {{"zeta", 1.0}}), Error);
  CHECK_THROWS_AS(make_field("double-well", {{"m", -1.0}}), Error);
  CHECK(field_ids().size() == 7);
  for (const auto& id : field_ids()) CHECK_NOTHROW(make_field(id));
}

TEST_CASE("bivariate polynomial evaluates exactly against hand expansion") {
  Mat c(3, 3);
  c << 1, 2, 3, 4, 5, 6, 7, 8, 9;  // entries with i+j > 2 are ignored
  Polynomial2D p(c);
  CHECK(p.degree() == 2);
  const double x = 1.5, y = -0.5;
  const double expect = 1 + 2 * y + 3 * y * y + 4 * x + 5 * x * y + 7 * x * x;
  CHECK(p.value(x, y) == doctest::Approx(expect).epsilon(1e-15));
  Vec g = p.gradient(x, y);
  CHECK(g[0] == doctest::Approx(4 + 5 * y + 14 * x).epsilon(1e-15));
  CHECK(g[1] == doctest::Approx(2 + 6 * y + 5 * x).epsilon(1e-15));
  Mat h = p.hessian(x, y);
  CHECK(h(0, 0) == doctest::Approx(14.0));
  CHECK(h(0, 1) == doctest::Approx(5.0));
  CHECK(h(1, 0) == doctest::Approx(5.0));
  CHECK(h(1, 1) == doctest::Approx(6.0));

  // as_field ties the ScalarField view to the same expansion.
  ScalarField f = p.as_field();
  CHECK(f.dim() == 2);
  CHECK(f.value(v2(x, y)) == doctest::Approx(expect).epsilon(1e-15));
  CHECK((f.gradient(v2(x, y)) - g).norm() == 0.0);
}

TEST_CASE("random draws are reproducible and independent of call order") {
  Polynomial2D a = random_poly_2d(42, 7);
  Polynomial2D b = random_poly_2d(42, 7);
  CHECK((a.coefficients() - b.coefficients()).norm() == 0.0);
  CHECK(a.degree() == 4);

  // Pulling draw 3 before draw 7 must not change draw 7.
  (void)random_poly_2d(42, 3);
  Polynomial2D c = random_poly_2d(42, 7);
  CHECK((a.coefficients() - c.coefficients()).norm() == 0.0);

  Polynomial2D d = random_poly_2d(43, 7);
  CHECK((a.coefficients() - d.coefficients()).norm() > 0.0);
}

TEST_CASE("generator streams stay inside their advertised ranges") {
  SplitMix64 rng(123456789ull);
  SplitMix64 rng2(123456789ull);
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 1000; ++i) {
    const double u = rng.uniform_pm1();
    CHECK(u >= -1.0);
    CHECK(u < 1.0);
    seen.insert(rng2.next());
  }
  // next() and uniform_pm1() advance the same underlying state stream.
  CHECK(seen.size() == 1000);
  SplitMix64 rng3(123456789ull);
  CHECK(rng3.next() == SplitMix64(123456789ull).next());
}

TEST_CASE("decade values survive far below double underflow") {
  DecadeValue p = DecadeValue::exp_neg(90.0);
  CHECK(p.log10_value == doctest::Approx(-90.0 / std::log(10.0)).epsilon(1e-14));
  CHECK(p.mantissa >= 1.0);
  CHECK(p.mantissa < 10.0);
  CHECK(p.as_double() ==
        doctest::Approx(std::exp(-90.0)).epsilon(1e-12));

  DecadeValue tiny = DecadeValue::from_log10(-200.25);
  CHECK(tiny.exponent == -201);
  CHECK(tiny.mantissa == doctest::Approx(std::pow(10.0, 0.75)).epsilon(1e-12));
  CHECK(tiny.as_double() == doctest::Approx(std::pow(10.0, -200.25)).epsilon(1e-12));
  CHECK(DecadeValue::from_log10(-400.0).as_double() == 0.0);  // below double range
}

TEST_CASE("box membership honours the tolerance argument") {
  Box box;
  box.lo = v2(-1.0, -2.0);
  box.hi = v2(1.0, 2.0);
  CHECK(box.dim() == 2);
  CHECK(box.diameter() == doctest::Approx(std::sqrt(4.0 + 16.0)).epsilon(1e-15));
  CHECK(box.contains(v2(0.0, 0.0)));
  CHECK(!box.contains(v2(1.0 + 1e-9, 0.0)));
  CHECK(box.contains(v2(1.0 + 1e-9, 0.0), 1e-8));
}

TEST_CASE("metric inverse rejects indefinite components by naming the point") {
  Metric bad = Metric::from_components(2, [](const Vec&) {
    Mat g(2, 2);
    g << 1.0, 0.0, 0.0, -1.0;
    return g;
  });
  CHECK_THROWS_AS(bad.inverse(v2(0.3, 0.4)), Error);

  Metric good = Metric::from_components(2, [](const Vec& x) {
    Mat g(2, 2);
    g << 2.0 + x[0] * x[0], 0.5, 0.5, 1.0;
    return g;
  });
  const Vec x = v2(0.3, -0.7);
  Vec v = v2(1.0, 2.0);
  const Mat g = good.components(x);
  CHECK(good.squared_norm(x, v) ==
        doctest::Approx((v.transpose() * g * v)(0)).epsilon(1e-14));
  const Mat gi = good.inverse(x);
  CHECK((g * gi - Mat::Identity(2, 2)).norm() < 1e-12);
  CHECK(good.cosquared_norm(x, v) ==
        doctest::Approx((v.transpose() * gi * v)(0)).epsilon(1e-12));
  CHECK(Metric::flat(3).is_flat());
  CHECK(!good.is_flat());
}
