#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <paract/expr.hpp>

#include "oracles.hpp"

#include <cmath>

using namespace paract;

namespace {

const SymbolTable kXUEps{{"x", "u"}, {"eps", "theta"}};

Expr parse_xu(std::string_view text) { return parse(text, kXUEps); }

double eval_at(const Expr& e, std::initializer_list<std::pair<std::string, double>> b) {
  return e.evaluate(Bindings(b));
}

}  // namespace

TEST_CASE("parse builds the expected trees") {
  const Expr e = parse_xu("x + eps*u^2");
  REQUIRE(e.kind() == ExprKind::Add);
  CHECK(e.child(0).kind() == ExprKind::Variable);
  CHECK(e.child(0).symbol() == "x");
  const Expr product = e.child(1);
  REQUIRE(product.kind() == ExprKind::Mul);
  CHECK(product.child(0).kind() == ExprKind::Parameter);
  CHECK(product.child(0).symbol() == "eps");
  REQUIRE(product.child(1).kind() == ExprKind::IntPow);
  CHECK(product.child(1).exponent() == 2);
  CHECK(product.child(1).child(0).symbol() == "u");

  const Expr single = parse_xu("x");
  CHECK(single.kind() == ExprKind::Variable);
  CHECK(single.symbol() == "x");

  const Expr rotation = parse_xu("x*cos(theta) - u*sin(theta)");
  REQUIRE(rotation.kind() == ExprKind::Sub);
  REQUIRE(rotation.child(0).kind() == ExprKind::Mul);
  CHECK(rotation.child(0).child(1).kind() == ExprKind::Cos);
  CHECK(rotation.child(1).child(1).kind() == ExprKind::Sin);
}

TEST_CASE("parse reports faults with byte offsets") {
  CHECK_THROWS_WITH_AS(parse_xu("(x"), doctest::Contains("offset 2"), SyntaxError);
  try {
    parse_xu("(x");
    FAIL("expected SyntaxError");
  } catch (const SyntaxError& error) {
    CHECK(error.offset() == 2);
  }

  CHECK_THROWS_AS(parse_xu("tan(x)"), UnknownFunctionError);
  try {
    parse_xu("x + tan(u)");
    FAIL("expected UnknownFunctionError");
  } catch (const UnknownFunctionError& error) {
    CHECK(error.name() == "tan");
    CHECK(error.offset() == 4);
  }

  CHECK_THROWS_AS(parse_xu("y + 1"), UnknownSymbolError);
  CHECK_THROWS_AS(parse_xu("x^-1"), SyntaxError);
  CHECK_THROWS_AS(parse_xu("x^2.5"), SyntaxError);
  CHECK_THROWS_AS(parse_xu("x +"), SyntaxError);
  CHECK_THROWS_AS(parse_xu("x x"), SyntaxError);
  CHECK_THROWS_AS(parse_xu(""), SyntaxError);
  CHECK_THROWS_AS(parse_xu("1.2.3"), SyntaxError);
  CHECK_THROWS_AS(parse("x", SymbolTable{{"x"}, {"x"}}), SyntaxError);
}

TEST_CASE("precedence and associativity") {
  CHECK(eval_at(parse_xu("2 + 3*4"), {}) == 14.0);
  CHECK(eval_at(parse_xu("2*3^2"), {}) == 18.0);
  CHECK(eval_at(parse_xu("8/4/2"), {}) == 1.0);
  CHECK(eval_at(parse_xu("8 - 4 - 2"), {}) == 2.0);
  // Unary minus binds looser than ^.
  CHECK(eval_at(parse_xu("-x^2"), {{"x", 2.0}}) == -4.0);
  CHECK(eval_at(parse_xu("(-x)^2"), {{"x", 2.0}}) == 4.0);
  CHECK(eval_at(parse_xu("-x*u"), {{"x", 2.0}, {"u", 3.0}}) == -6.0);
  CHECK(eval_at(parse_xu("x^0"), {{"x", 5.0}}) == 1.0);
  CHECK(eval_at(parse_xu("2e-1 + 1.5e1"), {}) == doctest::Approx(15.2).epsilon(1e-15));
}

TEST_CASE("evaluate") {
  CHECK(eval_at(parse_xu("x + eps*u^2"), {{"x", 1.0}, {"u", 2.0}, {"eps", 0.5}}) == 3.0);
  CHECK(eval_at(parse_xu("u"), {{"u", 7.0}}) == 7.0);
  // Extra entries are ignored.
  CHECK(eval_at(parse_xu("x"), {{"x", 1.0}, {"u", 9.0}}) == 1.0);

  CHECK_THROWS_AS(eval_at(parse_xu("1/(x - 1)"), {{"x", 1.0}}), DomainFaultError);
  CHECK_THROWS_AS(eval_at(parse_xu("sqrt(x)"), {{"x", -1.0}}), DomainFaultError);
  CHECK_THROWS_AS(eval_at(parse_xu("x + u"), {{"x", 1.0}}), UnboundSymbolError);

  try {
    eval_at(parse_xu("u + 1/(x - 1)"), {{"x", 1.0}, {"u", 0.0}});
    FAIL("expected DomainFaultError");
  } catch (const DomainFaultError& error) {
    CHECK(error.node() == "1/(x - 1)");
  }
}

TEST_CASE("differentiate matches finite differences on the worked forms") {
  oracle::ExprGenerator gen({"x"}, 42);

  const Expr e = parse_xu("x + eps*x^2");
  const Expr de = e.differentiate("x");
  for (int i = 0; i < 20; ++i) {
    const double x = gen.real(-2.0, 2.0);
    const double eps = gen.real(-1.0, 1.0);
    const auto f = [&](double t) {
      return e.evaluate(Bindings{{"x", t}, {"eps", eps}});
    };
    const double fd = oracle::central_fd(f, x);
    const double exact = de.evaluate(Bindings{{"x", x}, {"eps", eps}});
    CHECK(std::abs(exact - fd) <= 1e-7 * (1.0 + std::abs(fd)));
    CHECK(exact == doctest::Approx(1.0 + 2.0 * eps * x).epsilon(1e-12));
  }

  const Expr identity = parse_xu("u").differentiate("u");
  CHECK(identity.kind() == ExprKind::Constant);
  CHECK(identity.constant_value() == 1.0);

  const Expr curve = parse_xu("x*cos(theta) - x^2*sin(theta)");
  const Expr dcurve = curve.differentiate("x");
  for (int i = 0; i < 20; ++i) {
    const double x = gen.real(-2.0, 2.0);
    const double theta = gen.real(-3.0, 3.0);
    const auto f = [&](double t) {
      return curve.evaluate(Bindings{{"x", t}, {"theta", theta}});
    };
    const double fd = oracle::central_fd(f, x);
    const double exact = dcurve.evaluate(Bindings{{"x", x}, {"theta", theta}});
    CHECK(std::abs(exact - fd) <= 1e-7 * (1.0 + std::abs(fd)));
    CHECK(exact ==
          doctest::Approx(std::cos(theta) - 2.0 * x * std::sin(theta)).epsilon(1e-12));
  }
}

TEST_CASE("differentiation rules cover the whole grammar") {
  oracle::ExprGenerator gen({"x"}, 7);
  for (const char* text : {"sin(x^2)", "cos(3*x)", "exp(x/2)", "sqrt(x^2 + 1)",
                           "x/(x^2 + 1)", "exp(sin(x))*x", "sqrt(exp(x))"}) {
    const Expr e = parse_xu(text);
    const Expr de = e.differentiate("x");
    for (int i = 0; i < 10; ++i) {
      const double x = gen.real(-1.5, 1.5);
      const auto f = [&](double t) { return e.evaluate(Bindings{{"x", t}}); };
      const double fd = oracle::central_fd(f, x);
      const double exact = de.evaluate(Bindings{{"x", x}});
      CHECK(std::abs(exact - fd) <= 1e-6 * (1.0 + std::abs(fd)));
    }
  }
}

TEST_CASE("property: derivatives of random trees match central differences") {
  oracle::ExprGenerator gen({"x", "u"}, 2024);
  int tested = 0;
  for (int trial = 0; trial < 400 && tested < 200; ++trial) {
    const Expr e = gen.tree(6);
    if (!e.depends_on("x")) continue;
    const Expr de = e.differentiate("x");
    const Bindings base = gen.bindings();
    const double x = *base.find("x");
    try {
      const auto f = [&](double t) {
        Bindings b = base;
        b.set("x", t);
        return e.evaluate(b);
      };
      const double left = f(x - 1e-6);
      const double mid = f(x);
      const double right = f(x + 1e-6);
      if (!std::isfinite(left) || !std::isfinite(mid) || !std::isfinite(right)) continue;
      // Skip pole neighborhoods where the difference quotient is unstable.
      if (std::abs(left - mid) > 1e-2 || std::abs(right - mid) > 1e-2) continue;
      const double fd = (right - left) / 2e-6;
      const double exact = de.evaluate(base);
      if (!std::isfinite(exact)) continue;
      CHECK(std::abs(exact - fd) <= 1e-5 * (1.0 + std::abs(fd)));
      ++tested;
    } catch (const Error&) {
      continue;  // pole or unbound sqrt region: outside the contract
    }
  }
  CHECK(tested >= 100);
}

TEST_CASE("property: print/parse round trip evaluates identically") {
  oracle::ExprGenerator gen({"x", "u"}, 99);
  SymbolTable symbols{{"x", "u"}, {}};
  int compared = 0;
  for (int trial = 0; trial < 120; ++trial) {
    const Expr e = gen.tree(5);
    const Expr reparsed = parse(e.to_string(), symbols);
    for (int i = 0; i < 5; ++i) {
      const Bindings b = gen.bindings();
      double expected = 0.0;
      bool faulted = false;
      try {
        expected = e.evaluate(b);
      } catch (const Error&) {
        faulted = true;
      }
      if (faulted) {
        CHECK_THROWS_AS(reparsed.evaluate(b), Error);
      } else {
        CHECK(reparsed.evaluate(b) == expected);  // same arithmetic path, bitwise
        ++compared;
      }
    }
  }
  CHECK(compared >= 100);
}

TEST_CASE("property: differentiation is linear") {
  oracle::ExprGenerator gen({"x"}, 5);
  for (int trial = 0; trial < 40; ++trial) {
    const Expr e1 = gen.tree(4);
    const Expr e2 = gen.tree(4);
    const double a = gen.real(-2.0, 2.0);
    const Expr combined = (Expr::constant(a) * e1 + e2).differentiate("x");
    const Expr split = Expr::constant(a) * e1.differentiate("x") + e2.differentiate("x");
    for (int i = 0; i < 5; ++i) {
      const Bindings b = gen.bindings();
      try {
        const double lhs = combined.evaluate(b);
        const double rhs = split.evaluate(b);
        if (!std::isfinite(lhs) || !std::isfinite(rhs)) continue;
        CHECK(std::abs(lhs - rhs) <= 1e-12 * (1.0 + std::abs(rhs)));
      } catch (const Error&) {
        continue;
      }
    }
  }
}

TEST_CASE("substitution is simultaneous") {
  const Expr e = parse_xu("x + u^2");
  const Expr swapped = e.substitute(
      {{"x", Expr::variable("u")}, {"u", Expr::variable("x")}});
  CHECK(swapped.evaluate(Bindings{{"x", 3.0}, {"u", 5.0}}) == 5.0 + 9.0);

  const Expr closed = e.substitute({{"u", Expr::constant(2.0)}});
  CHECK(closed.free_symbols() == std::set<std::string>{"x"});
  CHECK(closed.evaluate(Bindings{{"x", 1.0}}) == 5.0);
}

TEST_CASE("free symbols and depends_on") {
  const Expr e = parse_xu("x*cos(theta) - u*sin(theta)");
  CHECK(e.free_symbols() == std::set<std::string>{"x", "u", "theta"});
  CHECK(e.depends_on("theta"));
  CHECK(!e.depends_on("eps"));
}

TEST_CASE("printer keeps structure readable") {
  CHECK(parse_xu("x + eps*u^2").to_string() == "x + eps*u^2");
  CHECK(parse_xu("-x^2").to_string() == "-x^2");
  CHECK(parse_xu("(x + 1)^2").to_string() == "(x + 1)^2");
  CHECK(parse_xu("x/(u*x)").to_string() == "x/(u*x)");
  CHECK(parse_xu("sqrt(x^2 + 1)").to_string() == "sqrt(x^2 + 1)");
}
