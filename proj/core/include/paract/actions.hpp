#pragma once

#include <paract/expr.hpp>
#include <paract/functions.hpp>
#include <paract/geometry.hpp>
#include <paract/inversion.hpp>

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace paract {

class NotProjectableError : public Error {
 public:
  using Error::Error;
};

/// One-parameter group acting on M = Ω × ℝ by
///   x̃ = g₁(x, u; ε),  ũ = g₂(x, u; ε)
/// with the additive law g_{ε₁} ∘ g_{ε₂} = g_{ε₁+ε₂} and the identity at
/// `identity_value`. Both worked families here (shears, rotation, scaling,
/// translation) are additive in their parameter.
struct GroupAction {
  std::string name;
  std::vector<std::string> variables;  // x names, one per Ω axis
  std::string dependent;               // u
  std::string parameter;               // ε
  std::vector<Expr> g1;                // one component per Ω axis
  Expr g2;
  double identity_value = 0.0;

  std::size_t ambient_dim() const { return variables.size(); }
};

/// A group element: an action at a chosen parameter value.
struct GroupElement {
  GroupAction action;
  double value = 0.0;
};

GroupElement at(GroupAction action, double value);

/// An arbitrary smooth map M → M, not required to be invertible.
struct SmoothEndomorphism {
  std::string name;
  std::vector<std::string> variables;
  std::string dependent;
  std::vector<Expr> h1;
  Expr h2;
};

/// Pointwise action on M: (x…, u) ↦ (g₁(x,u;ε)…, g₂(x,u;ε)).
std::vector<double> apply_point(const GroupElement& g, std::span<const double> point);
std::vector<double> apply_point(const GroupElement& g, double x, double u);

/// Sampled projectability (fibre preservation) test: true iff every
/// component of ∂g₁/∂u evaluates to at most `tol` in magnitude at every
/// probe point. The probe grid ranges over (x…, u, ε).
bool is_projectable(const GroupAction& action, const Grid& probe, double tol = 1e-12);

/// Default probe over Ω-window × u-window × ε-window for the sampled
/// projectability test.
Grid default_projectability_probe(const GroupAction& action,
                                  const OpenBox& omega_window,
                                  OpenBox::Axis u_window = {-3.0, 3.0},
                                  OpenBox::Axis parameter_window = {-2.0, 2.0},
                                  int resolution = 8);

/// The map α : Δ ∋ x ↦ g₁(x, U(x); ε) whose smooth invertibility decides
/// whether the classical action of g on U exists globally, together with
/// its exact derivative and the sign-scan verdict.
struct AlphaAnalysis {
  Expr alpha;        // in U's variable
  Expr alpha_prime;  // exact derivative
  InvertibilityReport report;
};

AlphaAnalysis alpha_map(const GroupElement& g, const ScalarFunction& u,
                        int samples = 1024, double delta_reg = kDeltaReg);

/// Result of pulling a group element back to a plain function. `function`
/// is engaged iff the verdict is Invertible; otherwise the report explains
/// the refusal (NotInvertible carries a witness, Inconclusive refuses
/// rather than guesses).
struct ClassicalActResult {
  InvertibilityReport report;
  std::optional<NumericFunction> function;

  bool ok() const { return function.has_value(); }
};

/// Classical graph-based action: Ũ(x̃) = g₂(α⁻¹(x̃), U(α⁻¹(x̃))) on
/// Δ̃ = (min α, max α). The result evaluates by bracketed bisection with
/// Newton refinement (tolerance `inverse_tol` on x), so it is numeric, not
/// expression-backed. 1-d only.
ClassicalActResult classical_act(const GroupElement& g, const ScalarFunction& u,
                                 int samples = 1024, double delta_reg = kDeltaReg,
                                 double inverse_tol = 1e-12);

/// Specialization for projectable actions, where α(x) = g₁(x; ε) does not
/// involve U. Throws NotProjectableError when the sampled test fails;
/// agrees with classical_act wherever both apply.
ClassicalActResult projectable_act(const GroupElement& g, const ScalarFunction& u,
                                   int samples = 1024, double delta_reg = kDeltaReg,
                                   double inverse_tol = 1e-12);

/// The global action by composition, gV = g ∘ V, built symbolically. Total:
/// no invertibility condition, and the result keeps V's domain.
ParametricFunction act(const GroupElement& g, const ParametricFunction& v);

/// Composition with an arbitrary smooth endomorphism of M; h need not be
/// invertible.
ParametricFunction semigroup_act(const SmoothEndomorphism& h, const ParametricFunction& v);

SmoothEndomorphism identity_endomorphism(std::size_t ambient_dim = 1);
SmoothEndomorphism compose(const SmoothEndomorphism& outer, const SmoothEndomorphism& inner);

/// Largest deviation of the action at `identity_value` from the identity
/// map over the probe grid of M (max-abs over components).
double identity_defect(const GroupAction& action, const Grid& m_probe);

/// Largest deviation of g_{ε₁} ∘ g_{ε₂} from g_{ε₁+ε₂} over the probe grid.
double additivity_defect(const GroupAction& action, const Grid& m_probe, double e1,
                         double e2);

// Builtin one-parameter families on M ⊆ ℝ², all with additive law and
// identity at 0.
GroupAction translation_action();      // x̃ = x + ε,    ũ = u
GroupAction scaling_action();          // x̃ = x,        ũ = e^ε·u
GroupAction linear_shear_action();     // x̃ = x + ε·u,  ũ = u
GroupAction quadratic_shear_action();  // x̃ = x + ε·u², ũ = u
GroupAction rotation_action();         // rotation of the (x, u) plane by ε
const std::vector<GroupAction>& builtin_actions();

}  // namespace paract
