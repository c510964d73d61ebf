#pragma once

#include <paract/expr.hpp>
#include <paract/geometry.hpp>

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace paract {

/// Raised by operations whose certified path is 1-d when handed more
/// dimensions.
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

/// The first component's derivative is too small to divide by.
class SingularParametrizationError : public Error {
 public:
  using Error::Error;
};

/// A plain 1-d real function with an explicit open-interval domain. The
/// evaluation may be expression-backed or numeric (for instance the result
/// of inverting a monotone map), so downstream operations are agnostic to a
/// function's origin.
struct NumericFunction {
  OpenBox domain;
  std::function<double(double)> eval;

  double operator()(double x) const { return eval(x); }
};

/// U : Δ → ℝ given by an expression in the declared variables.
struct ScalarFunction {
  OpenBox domain;                       // Δ
  std::vector<std::string> variables;   // one name per axis
  Expr body;

  double operator()(std::span<const double> x) const;
  double operator()(double x) const;    // 1-d convenience
  NumericFunction to_numeric() const;   // 1-d only
};

/// V : Λ → M with components (V₁, V₂); V₁ has one expression per axis of
/// the ambient Ω and V₂ is scalar. All components share the declared
/// parameter names.
struct ParametricFunction {
  OpenBox domain;                       // Λ
  std::vector<std::string> parameters;  // one name per axis
  std::vector<Expr> first;              // V₁
  Expr second;                          // V₂

  /// (V₁(p)…, V₂(p)) — a point of M.
  std::vector<double> value(std::span<const double> p) const;
  std::vector<double> value(double p) const;  // 1-d convenience
};

ScalarFunction make_scalar(OpenBox domain, std::string variable, Expr body);
ScalarFunction make_scalar(OpenBox domain, std::string variable, std::string_view source);
ParametricFunction make_parametric(OpenBox domain, std::string parameter, Expr first,
                                   Expr second);
ParametricFunction make_parametric(OpenBox domain, std::string parameter,
                                   std::string_view first_source,
                                   std::string_view second_source);

/// Checks the declared-symbol and finite-evaluation invariants on the
/// standard grid; throws on violation.
void validate(const ScalarFunction& u, int resolution = 64);
void validate(const ParametricFunction& v, int resolution = 64,
              const OpenBox* omega = nullptr);

/// The canonical representation x ↦ (x, U(x)) with the variables renamed to
/// parameter names ("p", or "p1…pn" beyond one dimension).
ParametricFunction canonical_parametrize(const ScalarFunction& u);

/// Sampled graph { (x, U(x)) } of a scalar function.
PointCloud graph_cloud(const ScalarFunction& u, const Grid& grid);
PointCloud graph_cloud(const NumericFunction& u, const Grid& grid);

/// Sampled image { (V₁(p), V₂(p)) } of a parametric function.
PointCloud image_cloud(const ParametricFunction& v, const Grid& grid);

/// First or second derivative of the locally recovered graph at x = V₁(p),
/// computed from the parametric form alone:
///   order 1:  V₂′/V₁′
///   order 2:  (V₂″·V₁′ − V₂′·V₁″) / V₁′³
/// Requires |V₁′(p)| > delta_reg; 1-d only.
double parametric_derivative(const ParametricFunction& v, double p, int order,
                             double delta_reg = 1e-8);

}  // namespace paract
