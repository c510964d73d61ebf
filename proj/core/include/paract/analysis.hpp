#pragma once

#include <paract/actions.hpp>
#include <paract/expr.hpp>
#include <paract/functions.hpp>
#include <paract/geometry.hpp>
#include <paract/inversion.hpp>

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace paract {

/// The first component wandered outside the window on which the compared
/// function is known.
class RangeEscapeError : public Error {
 public:
  using Error::Error;
};

/// Sampled verdict for a relation between parametrizations: whether it
/// holds, the largest pointwise violation found, and where.
struct RelationVerdict {
  bool holds = false;
  double max_defect = 0.0;
  std::optional<std::vector<double>> defect_point;
};

/// A concrete smooth map between parameter domains, given componentwise by
/// expressions: the witness φ (or λ) of a refinement or diagram hypothesis.
struct Witness {
  OpenBox source;
  OpenBox target;
  std::vector<std::string> source_parameters;
  std::vector<Expr> components;  // one expression per target axis

  std::vector<double> operator()(std::span<const double> p) const;
};

Witness identity_witness(const OpenBox& domain, std::vector<std::string> parameters);
Witness make_witness(OpenBox source, OpenBox target, std::string parameter,
                     std::string_view source_text);

/// Decides membership of V in the parametrizations of U by the two sampled
/// conditions that characterize it: V₂ = U ∘ V₁ on the grid (functional
/// defect at most `tol_fun`) and V₁ covering U's domain up to twice the
/// grid spacing. 1-d certified path.
RelationVerdict is_parametrization_of(const ParametricFunction& v, const NumericFunction& u,
                                      int resolution = 1024, double tol_fun = 1e-9);
RelationVerdict is_parametrization_of(const ParametricFunction& v, const ScalarFunction& u,
                                      int resolution = 1024, double tol_fun = 1e-9);

/// Verifies V ≤ V′ for the supplied witness: V = V′ ∘ φ on the grid and φ
/// surjective onto V′'s domain (interval covering). A negative verdict
/// refutes only this witness, not the relation.
RelationVerdict refines_with_witness(const ParametricFunction& v,
                                     const ParametricFunction& v_prime, const Witness& phi,
                                     int resolution = 1024, double tol = 1e-9);

/// Equivalence as equality of sampled images: symmetric covering distance
/// of the two image clouds at most `tol_set` (default: twice the larger
/// cloud spacing, the resolution scale of the samplings).
RelationVerdict equivalent(const ParametricFunction& v, const ParametricFunction& v_prime,
                           const Grid& grid_v, const Grid& grid_v_prime,
                           std::optional<double> tol_set = std::nullopt);

/// Graph recovery: when the sign scan certifies V₁ monotone, returns the
/// numeric U = V₂ ∘ V₁⁻¹ on (min V₁, max V₁). NotInvertible (the image is
/// not a graph) carries the sign-change witness; Inconclusive refuses.
struct DeparametrizeResult {
  InvertibilityReport report;
  std::optional<NumericFunction> function;

  bool ok() const { return function.has_value(); }
};

DeparametrizeResult try_deparametrize(const ParametricFunction& v, int samples = 1024,
                                      double delta_reg = kDeltaReg,
                                      double inverse_tol = 1e-12);

/// An evaluable map between Euclidean boxes; the common currency of the
/// commutativity checker. Adapters below wrap the concrete objects.
struct MapRef {
  std::size_t in_dim = 0;
  std::size_t out_dim = 0;
  std::function<std::vector<double>(std::span<const double>)> eval;
};

MapRef as_map(const ParametricFunction& v);  // n → n+1
MapRef as_map(const Witness& phi);           // source dim → target dim
MapRef as_map(const NumericFunction& f);     // 1 → 1
MapRef as_map(const Expr& body, std::string input_name);  // 1 → 1
MapRef graph_map(const NumericFunction& f);  // x ↦ (x, f(x))
MapRef identity_map(std::size_t dim);
MapRef compose(const MapRef& outer, const MapRef& inner);

/// Numeric inverse of a 1-d map certified monotone by the sign scan,
/// defined on its sampled range. Engaged only on an Invertible verdict.
std::optional<MapRef> inverse_map(const Expr& body, const std::string& input_name,
                                  const OpenBox& domain, int samples = 1024,
                                  double delta_reg = kDeltaReg, double inverse_tol = 1e-12);

/// Generic commutative-triangle check on the source grid:
/// holds iff max over the grid of |right(left(p)) − top(p)| ≤ tol
/// (max-abs over components).
RelationVerdict check_commutes(const MapRef& top, const MapRef& left, const MapRef& right,
                               const Grid& source, double tol);

}  // namespace paract
