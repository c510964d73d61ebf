#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <paract/actions.hpp>
#include <paract/analysis.hpp>

#include "oracles.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace paract;

namespace {

constexpr double kPi = std::numbers::pi;

ScalarFunction identity_function(double lo = -3.0, double hi = 3.0) {
  return make_scalar(OpenBox::interval(lo, hi), "x", "x");
}

double max_gap_on_grid(const NumericFunction& f, const std::function<double(double)>& g,
                       int resolution = 512) {
  double worst = 0.0;
  const Grid grid = sample(f.domain, resolution);
  for (double x : grid.axis_points(0)) worst = std::max(worst, std::abs(f(x) - g(x)));
  return worst;
}

}  // namespace

TEST_CASE("pointwise action on M") {
  const GroupElement shear = at(quadratic_shear_action(), 0.5);
  const std::vector<double> moved = apply_point(shear, 1.0, 2.0);
  CHECK(moved[0] == 3.0);  // x + eps*u^2 = 1 + 0.5*4
  CHECK(moved[1] == 2.0);

  const GroupElement e = at(quadratic_shear_action(), 0.0);
  const std::vector<double> fixed = apply_point(e, -1.25, 0.75);
  CHECK(fixed[0] == -1.25);
  CHECK(fixed[1] == 0.75);

  const GroupElement quarter = at(rotation_action(), kPi / 2.0);
  const std::vector<double> turned = apply_point(quarter, 1.0, 0.0);
  CHECK(turned[0] == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(turned[1] == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("projectability is a sampled fibre-preservation test") {
  const OpenBox omega = OpenBox::interval(-3.0, 3.0);
  const auto probe = [&](const GroupAction& a) {
    return is_projectable(a, default_projectability_probe(a, omega));
  };
  CHECK(probe(translation_action()));
  CHECK(probe(scaling_action()));
  CHECK(!probe(linear_shear_action()));
  CHECK(!probe(quadratic_shear_action()));
  CHECK(!probe(rotation_action()));
}

TEST_CASE("projectability is invariant under renaming the parameter") {
  SymbolTable symbols;
  symbols.variables = {"x", "u"};
  symbols.parameters = {"mu"};
  GroupAction renamed;
  renamed.name = "quadratic-shear-renamed";
  renamed.variables = {"x"};
  renamed.dependent = "u";
  renamed.parameter = "mu";
  renamed.g1 = {parse("x + mu*u^2", symbols)};
  renamed.g2 = parse("u", symbols);

  const OpenBox omega = OpenBox::interval(-3.0, 3.0);
  CHECK(is_projectable(renamed, default_projectability_probe(renamed, omega)) ==
        is_projectable(quadratic_shear_action(),
                       default_projectability_probe(quadratic_shear_action(), omega)));
}

TEST_CASE("alpha map of the quadratic shear") {
  const ScalarFunction u = identity_function();
  const GroupElement g = at(quadratic_shear_action(), 0.5);
  const AlphaAnalysis analysis = alpha_map(g, u);

  // alpha(x) = x + 0.5 x^2, alpha'(x) = 1 + x.
  CHECK(analysis.alpha.evaluate(Bindings{{"x", 2.0}}) == 4.0);
  CHECK(analysis.alpha_prime.evaluate(Bindings{{"x", 2.0}}) == 3.0);

  REQUIRE(analysis.report.verdict == Invertibility::NotInvertible);
  const auto oracle_root = oracle::sign_scan_root(
      [](double x) { return 1.0 + x; }, -3.0, 3.0);
  REQUIRE(oracle_root.has_value());
  CHECK(*analysis.report.witness == doctest::Approx(*oracle_root).epsilon(1e-9));
  CHECK(*analysis.report.witness == doctest::Approx(-1.0).epsilon(1e-9));
}

TEST_CASE("alpha map of the invertible linear shear") {
  const GroupElement g = at(linear_shear_action(), 1.0);
  const AlphaAnalysis analysis = alpha_map(g, identity_function());
  CHECK(analysis.report.verdict == Invertibility::Invertible);
  CHECK(analysis.report.min_abs_derivative == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("alpha map of the rotated parabola") {
  const ScalarFunction u = make_scalar(OpenBox::interval(-2.0, 2.0), "x", "x^2");
  const GroupElement g = at(rotation_action(), kPi / 4.0);
  const AlphaAnalysis analysis = alpha_map(g, u);
  REQUIRE(analysis.report.verdict == Invertibility::NotInvertible);
  const double theta = kPi / 4.0;
  const auto oracle_root = oracle::sign_scan_root(
      [theta](double x) { return std::cos(theta) - 2.0 * x * std::sin(theta); }, -2.0, 2.0);
  REQUIRE(oracle_root.has_value());
  CHECK(*analysis.report.witness == doctest::Approx(*oracle_root).epsilon(1e-9));
}

TEST_CASE("classical action through the inverted alpha") {
  // Linear shear with U(x) = x: alpha(x) = 2x, so U~(y) = y/2 on (-6, 6).
  const GroupElement g = at(linear_shear_action(), 1.0);
  const ClassicalActResult result = classical_act(g, identity_function());
  REQUIRE(result.ok());
  CHECK(result.function->domain == OpenBox::interval(-6.0, 6.0));
  CHECK(max_gap_on_grid(*result.function, [](double y) { return y / 2.0; }) <= 1e-10);
}

TEST_CASE("classical action of a translation is a shift") {
  const ScalarFunction u = make_scalar(OpenBox::interval(-3.0, 3.0), "x", "x^2 - x");
  for (double eps : {-1.5, 0.25, 2.0}) {
    const ClassicalActResult result = classical_act(at(translation_action(), eps), u);
    REQUIRE(result.ok());
    CHECK(result.function->domain == OpenBox::interval(-3.0 + eps, 3.0 + eps));
    CHECK(max_gap_on_grid(*result.function,
                          [&u, eps](double y) { return u(y - eps); }) <= 1e-10);
  }
}

TEST_CASE("classical action at the identity is the function itself") {
  const ScalarFunction u = make_scalar(OpenBox::interval(-3.0, 3.0), "x", "x^2 - x");
  for (const GroupAction& family : builtin_actions()) {
    const ClassicalActResult result = classical_act(at(family, family.identity_value), u);
    REQUIRE(result.ok());
    CHECK(max_gap_on_grid(*result.function, [&u](double y) { return u(y); }) <= 1e-12);
  }
}

TEST_CASE("classical action refuses the quadratic shear away from the identity") {
  const ClassicalActResult result =
      classical_act(at(quadratic_shear_action(), 0.5), identity_function());
  CHECK(!result.ok());
  CHECK(result.report.verdict == Invertibility::NotInvertible);
  CHECK(result.report.witness.has_value());
}

TEST_CASE("projectable action") {
  const ScalarFunction u = make_scalar(OpenBox::interval(-3.0, 3.0), "x", "x^2");

  const ClassicalActResult shifted = projectable_act(at(translation_action(), 1.0), u);
  REQUIRE(shifted.ok());
  CHECK(max_gap_on_grid(*shifted.function,
                        [](double y) { return (y - 1.0) * (y - 1.0); }) <= 1e-10);

  const ClassicalActResult scaled = projectable_act(at(scaling_action(), 0.7), u);
  REQUIRE(scaled.ok());
  CHECK(scaled.function->domain == u.domain);
  CHECK(max_gap_on_grid(*scaled.function,
                        [&u](double y) { return std::exp(0.7) * u(y); }) <= 1e-10);

  CHECK_THROWS_AS(projectable_act(at(linear_shear_action(), 0.5), u),
                  NotProjectableError);
}

TEST_CASE("projectable and classical actions agree where both apply") {
  const ScalarFunction u = make_scalar(OpenBox::interval(-3.0, 3.0), "x", "x^2");
  const GroupElement g = at(translation_action(), -0.8);
  const ClassicalActResult via_projectable = projectable_act(g, u);
  const ClassicalActResult via_classical = classical_act(g, u);
  REQUIRE(via_projectable.ok());
  REQUIRE(via_classical.ok());
  const Grid grid = sample(via_classical.function->domain, 512);
  double worst = 0.0;
  for (double y : grid.axis_points(0))
    worst = std::max(worst,
                     std::abs((*via_projectable.function)(y) - (*via_classical.function)(y)));
  CHECK(worst <= 1e-10);
}

TEST_CASE("action by composition is symbolic, total, and domain preserving") {
  const ScalarFunction square = make_scalar(OpenBox::interval(-2.0, 2.0), "x", "x^2");
  const ParametricFunction u_star = canonical_parametrize(square);

  const ParametricFunction quarter = act(at(rotation_action(), kPi / 2.0), u_star);
  CHECK(quarter.domain == u_star.domain);  // same Λ
  for (double p : {-1.5, 0.25, 1.0}) {
    const std::vector<double> image = quarter.value(p);
    CHECK(image[0] == doctest::Approx(-p * p).epsilon(1e-14));
    CHECK(image[1] == doctest::Approx(p).epsilon(1e-14));
  }

  const ParametricFunction fixed = act(at(rotation_action(), 0.0), u_star);
  for (double p : {-1.5, 0.25, 1.0}) {
    CHECK(fixed.value(p)[0] == u_star.value(p)[0]);
    CHECK(fixed.value(p)[1] == u_star.value(p)[1]);
  }

  const ParametricFunction lifted =
      act(at(quadratic_shear_action(), 1.0),
          canonical_parametrize(identity_function()));
  for (double p : {-2.5, 0.0, 1.5}) {
    CHECK(lifted.value(p)[0] == p + p * p);
    CHECK(lifted.value(p)[1] == p);
  }
}

TEST_CASE("acting on a nongraph image is still defined") {
  // The quarter-turned parabola is not a graph, yet group elements keep
  // acting on it by composition.
  const ParametricFunction quarter =
      act(at(rotation_action(), kPi / 2.0),
          canonical_parametrize(make_scalar(OpenBox::interval(-2.0, 2.0), "x", "x^2")));
  const ParametricFunction back = act(at(rotation_action(), -kPi / 2.0), quarter);
  for (double p : {-1.0, 0.5, 1.5}) {
    CHECK(back.value(p)[0] == doctest::Approx(p).epsilon(1e-14));
    CHECK(back.value(p)[1] == doctest::Approx(p * p).epsilon(1e-14));
  }
}

TEST_CASE("group axioms hold on sampled windows") {
  const Grid probe = sample(OpenBox({{-3.0, 3.0}, {-3.0, 3.0}}), 32);
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> eps(-1.0, 1.0);
  for (const GroupAction& family : builtin_actions()) {
    CHECK(identity_defect(family, probe) <= 1e-12);
    for (int i = 0; i < 20; ++i)
      CHECK(additivity_defect(family, probe, eps(rng), eps(rng)) <= 1e-9);
  }
}

TEST_CASE("semigroup action by smooth endomorphisms") {
  SymbolTable xu;
  xu.variables = {"x", "u"};
  const SmoothEndomorphism square{"square", {"x"}, "u", {parse("x^2", xu)}, parse("u", xu)};
  const ParametricFunction cubic =
      make_parametric(OpenBox::interval(-1.5, 1.5), "p", "p", "p^3");

  const ParametricFunction folded = semigroup_act(square, cubic);
  CHECK(folded.domain == cubic.domain);
  for (double p : {-1.2, -0.3, 0.8}) {
    CHECK(folded.value(p)[0] == p * p);
    CHECK(folded.value(p)[1] == p * p * p);
  }

  const ParametricFunction same = semigroup_act(identity_endomorphism(), cubic);
  for (double p : {-1.2, 0.8}) {
    CHECK(same.value(p)[0] == cubic.value(p)[0]);
    CHECK(same.value(p)[1] == cubic.value(p)[1]);
  }
}

TEST_CASE("property: semigroup composition is associative pointwise") {
  SymbolTable xu;
  xu.variables = {"x", "u"};
  const std::vector<SmoothEndomorphism> table = {
      {"square", {"x"}, "u", {parse("x^2", xu)}, parse("u", xu)},
      {"sine", {"x"}, "u", {parse("sin(x)", xu)}, parse("u", xu)},
      {"mix", {"x"}, "u", {parse("x + u", xu)}, parse("u - x", xu)},
      {"fold", {"x"}, "u", {parse("u^2", xu)}, parse("x", xu)},
  };
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<std::size_t> pick(0, table.size() - 1);
  oracle::ExprGenerator gen({"p"}, 31);

  const Grid grid = sample(OpenBox::interval(-1.0, 1.0), 1000);
  for (int trial = 0; trial < 20; ++trial) {
    const SmoothEndomorphism& outer = table[pick(rng)];
    const SmoothEndomorphism& inner = table[pick(rng)];
    const ParametricFunction v = make_parametric(
        OpenBox::interval(-1.0, 1.0), "p",
        Expr::constant(0.5) * Expr::variable("p"),
        Expr::variable("p") * Expr::variable("p"));
    const ParametricFunction nested = semigroup_act(outer, semigroup_act(inner, v));
    const ParametricFunction composed = semigroup_act(compose(outer, inner), v);
    double worst = 0.0;
    for (double p : grid.axis_points(0)) {
      const auto a = nested.value(p);
      const auto b = composed.value(p);
      worst = std::max({worst, std::abs(a[0] - b[0]), std::abs(a[1] - b[1])});
    }
    CHECK(worst <= 1e-12);
  }
}

TEST_CASE("dimension guards") {
  const GroupElement g = at(translation_action(), 1.0);
  CHECK_THROWS_AS(apply_point(g, std::vector<double>{1.0}), DimensionMismatchError);
  ScalarFunction plane{OpenBox({{0.0, 1.0}, {0.0, 1.0}}),
                       {"x1", "x2"},
                       Expr::variable("x1")};
  CHECK_THROWS_AS(alpha_map(g, plane), UnsupportedError);
}
