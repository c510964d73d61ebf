#include <paract/actions.hpp>

#include <cmath>
#include <utility>

namespace paract {

GroupElement at(GroupAction action, double value) {
  return GroupElement{std::move(action), value};
}

namespace {

Bindings bind_point(const GroupAction& action, std::span<const double> point) {
  if (point.size() != action.ambient_dim() + 1)
    throw DimensionMismatchError("apply_point: expected a point of M");
  Bindings bindings;
  for (std::size_t i = 0; i < action.variables.size(); ++i)
    bindings.set(action.variables[i], point[i]);
  bindings.set(action.dependent, point.back());
  return bindings;
}

// Substitution map sending the action's symbols onto the components of a
// parametric function, with the parameter frozen at the element's value.
std::map<std::string, Expr> composition_map(const GroupElement& g,
                                            const ParametricFunction& v) {
  if (v.first.size() != g.action.ambient_dim())
    throw DimensionMismatchError("act: ambient dimensions differ");
  std::map<std::string, Expr> map;
  for (std::size_t i = 0; i < v.first.size(); ++i)
    map.emplace(g.action.variables[i], v.first[i]);
  map.emplace(g.action.dependent, v.second);
  map.emplace(g.action.parameter, Expr::constant(g.value));
  return map;
}

}  // namespace

std::vector<double> apply_point(const GroupElement& g, std::span<const double> point) {
  Bindings bindings = bind_point(g.action, point);
  bindings.set(g.action.parameter, g.value);
  std::vector<double> out;
  out.reserve(point.size());
  for (const Expr& component : g.action.g1) out.push_back(component.evaluate(bindings));
  out.push_back(g.action.g2.evaluate(bindings));
  return out;
}

std::vector<double> apply_point(const GroupElement& g, double x, double u) {
  const double point[2] = {x, u};
  return apply_point(g, std::span<const double>(point, 2));
}

bool is_projectable(const GroupAction& action, const Grid& probe, double tol) {
  if (probe.dim() != action.ambient_dim() + 2)
    throw DimensionMismatchError("is_projectable: probe must range over (x…, u, ε)");
  std::vector<Expr> derivatives;
  derivatives.reserve(action.g1.size());
  for (const Expr& component : action.g1)
    derivatives.push_back(component.differentiate(action.dependent));

  for (std::size_t i = 0; i < probe.size(); ++i) {
    const std::vector<double> point = probe.point(i);
    Bindings bindings;
    for (std::size_t a = 0; a < action.variables.size(); ++a)
      bindings.set(action.variables[a], point[a]);
    bindings.set(action.dependent, point[point.size() - 2]);
    bindings.set(action.parameter, point.back());
    for (const Expr& derivative : derivatives) {
      if (std::abs(derivative.evaluate(bindings)) > tol) return false;
    }
  }
  return true;
}

Grid default_projectability_probe(const GroupAction& action, const OpenBox& omega_window,
                                  OpenBox::Axis u_window, OpenBox::Axis parameter_window,
                                  int resolution) {
  std::vector<OpenBox::Axis> axes;
  axes.reserve(action.ambient_dim() + 2);
  for (std::size_t i = 0; i < omega_window.dim(); ++i) axes.push_back(omega_window.axis(i));
  axes.push_back(u_window);
  axes.push_back(parameter_window);
  return sample(OpenBox(std::move(axes)), resolution);
}

namespace {

void require_scalar_1d(const GroupAction& action, const ScalarFunction& u,
                       const char* what) {
  if (action.ambient_dim() != 1 || u.domain.dim() != 1)
    throw UnsupportedError(std::string(what) + ": 1-d functions only");
}

// α(x) = g₁(x, U(x); ε) by substitution, in U's own variable.
Expr substitute_alpha(const GroupElement& g, const ScalarFunction& u) {
  std::map<std::string, Expr> map;
  map.emplace(g.action.variables[0], Expr::variable(u.variables[0]));
  map.emplace(g.action.dependent, u.body);
  map.emplace(g.action.parameter, Expr::constant(g.value));
  return g.action.g1[0].substitute(map);
}

// Builds the numeric Ũ on Δ̃ = (lo, hi) from the certified-monotone α.
NumericFunction build_classical_result(const GroupElement& g, const ScalarFunction& u,
                                       const Expr& alpha, const Expr& alpha_prime,
                                       int samples, double inverse_tol) {
  const std::string variable = u.variables[0];
  const auto alpha_fn = [alpha, variable](double x) {
    return alpha.evaluate(Bindings{{variable, x}});
  };
  const auto alpha_prime_fn = [alpha_prime, variable](double x) {
    return alpha_prime.evaluate(Bindings{{variable, x}});
  };
  const auto [lo, hi] = sampled_range(alpha_fn, u.domain, samples + 1);

  // ũ = g₂(x, U(x); ε) as an expression of x, evaluated at x = α⁻¹(x̃).
  std::map<std::string, Expr> map;
  map.emplace(g.action.variables[0], Expr::variable(variable));
  map.emplace(g.action.dependent, u.body);
  map.emplace(g.action.parameter, Expr::constant(g.value));
  const Expr u_tilde = g.action.g2.substitute(map);

  const double domain_lo = u.domain.axis(0).lo;
  const double domain_hi = u.domain.axis(0).hi;
  auto eval = [alpha_fn, alpha_prime_fn, u_tilde, variable, domain_lo, domain_hi,
               inverse_tol](double x_tilde) {
    const double x = invert_monotone(alpha_fn, alpha_prime_fn, domain_lo, domain_hi,
                                     x_tilde, inverse_tol);
    return u_tilde.evaluate(Bindings{{variable, x}});
  };
  return NumericFunction{OpenBox::interval(lo, hi), std::move(eval)};
}

}  // namespace

AlphaAnalysis alpha_map(const GroupElement& g, const ScalarFunction& u, int samples,
                        double delta_reg) {
  require_scalar_1d(g.action, u, "alpha_map");
  AlphaAnalysis analysis{substitute_alpha(g, u), Expr(), InvertibilityReport{}};
  analysis.alpha_prime = analysis.alpha.differentiate(u.variables[0]);
  const std::string variable = u.variables[0];
  const Expr alpha_prime = analysis.alpha_prime;
  analysis.report = scan_derivative_sign(
      [alpha_prime, variable](double x) {
        return alpha_prime.evaluate(Bindings{{variable, x}});
      },
      u.domain, samples, delta_reg);
  return analysis;
}

ClassicalActResult classical_act(const GroupElement& g, const ScalarFunction& u,
                                 int samples, double delta_reg, double inverse_tol) {
  const AlphaAnalysis analysis = alpha_map(g, u, samples, delta_reg);
  ClassicalActResult result{analysis.report, std::nullopt};
  if (analysis.report.verdict != Invertibility::Invertible) return result;
  result.function = build_classical_result(g, u, analysis.alpha, analysis.alpha_prime,
                                           samples, inverse_tol);
  return result;
}

ClassicalActResult projectable_act(const GroupElement& g, const ScalarFunction& u,
                                   int samples, double delta_reg, double inverse_tol) {
  require_scalar_1d(g.action, u, "projectable_act");
  const Grid probe = default_projectability_probe(g.action, u.domain);
  if (!is_projectable(g.action, probe))
    throw NotProjectableError("projectable_act: action is not fibre-preserving on the probe");

  // α(x) = g₁(x; ε); the fibre coordinate provably does not enter, so it is
  // pinned to an arbitrary section (u = 0).
  std::map<std::string, Expr> map;
  map.emplace(g.action.variables[0], Expr::variable(u.variables[0]));
  map.emplace(g.action.dependent, Expr::constant(0.0));
  map.emplace(g.action.parameter, Expr::constant(g.value));
  const Expr alpha = g.action.g1[0].substitute(map);
  const Expr alpha_prime = alpha.differentiate(u.variables[0]);

  const std::string variable = u.variables[0];
  InvertibilityReport report = scan_derivative_sign(
      [alpha_prime, variable](double x) {
        return alpha_prime.evaluate(Bindings{{variable, x}});
      },
      u.domain, samples, delta_reg);

  ClassicalActResult result{report, std::nullopt};
  if (report.verdict != Invertibility::Invertible) return result;
  result.function =
      build_classical_result(g, u, alpha, alpha_prime, samples, inverse_tol);
  return result;
}

ParametricFunction act(const GroupElement& g, const ParametricFunction& v) {
  const std::map<std::string, Expr> map = composition_map(g, v);
  std::vector<Expr> first;
  first.reserve(g.action.g1.size());
  for (const Expr& component : g.action.g1) first.push_back(component.substitute(map));
  return ParametricFunction{v.domain, v.parameters, std::move(first),
                            g.action.g2.substitute(map)};
}

ParametricFunction semigroup_act(const SmoothEndomorphism& h, const ParametricFunction& v) {
  if (v.first.size() != h.h1.size())
    throw DimensionMismatchError("semigroup_act: ambient dimensions differ");
  std::map<std::string, Expr> map;
  for (std::size_t i = 0; i < v.first.size(); ++i) map.emplace(h.variables[i], v.first[i]);
  map.emplace(h.dependent, v.second);
  std::vector<Expr> first;
  first.reserve(h.h1.size());
  for (const Expr& component : h.h1) first.push_back(component.substitute(map));
  return ParametricFunction{v.domain, v.parameters, std::move(first),
                            h.h2.substitute(map)};
}

SmoothEndomorphism identity_endomorphism(std::size_t ambient_dim) {
  SmoothEndomorphism h;
  h.name = "identity";
  h.dependent = "u";
  if (ambient_dim == 1) {
    h.variables = {"x"};
  } else {
    for (std::size_t i = 1; i <= ambient_dim; ++i)
      h.variables.push_back("x" + std::to_string(i));
  }
  for (const std::string& name : h.variables) h.h1.push_back(Expr::variable(name));
  h.h2 = Expr::variable(h.dependent);
  return h;
}

SmoothEndomorphism compose(const SmoothEndomorphism& outer, const SmoothEndomorphism& inner) {
  if (outer.h1.size() != inner.h1.size())
    throw DimensionMismatchError("compose: ambient dimensions differ");
  std::map<std::string, Expr> map;
  for (std::size_t i = 0; i < inner.h1.size(); ++i)
    map.emplace(outer.variables[i], inner.h1[i]);
  map.emplace(outer.dependent, inner.h2);
  SmoothEndomorphism h;
  h.name = outer.name + "∘" + inner.name;
  h.variables = inner.variables;
  h.dependent = inner.dependent;
  for (const Expr& component : outer.h1) h.h1.push_back(component.substitute(map));
  h.h2 = outer.h2.substitute(map);
  return h;
}

namespace {

void require_m_probe(const GroupAction& action, const Grid& m_probe, const char* what) {
  if (m_probe.dim() != action.ambient_dim() + 1)
    throw DimensionMismatchError(std::string(what) + ": probe must range over M");
}

// Evaluates the action at the bound parameter into `out`; bindings already
// hold the source point and parameter value.
void transform_into(const GroupAction& action, const Bindings& bindings,
                    std::span<double> out) {
  for (std::size_t c = 0; c < action.g1.size(); ++c)
    out[c] = action.g1[c].evaluate(bindings);
  out.back() = action.g2.evaluate(bindings);
}

void bind_into(Bindings& bindings, const GroupAction& action, std::span<const double> point,
               double parameter_value) {
  for (std::size_t a = 0; a < action.variables.size(); ++a)
    bindings.set(action.variables[a], point[a]);
  bindings.set(action.dependent, point.back());
  bindings.set(action.parameter, parameter_value);
}

}  // namespace

double identity_defect(const GroupAction& action, const Grid& m_probe) {
  require_m_probe(action, m_probe, "identity_defect");
  const std::size_t width = action.ambient_dim() + 1;
  Bindings bindings;
  std::vector<double> point(width);
  std::vector<double> image(width);
  double worst = 0.0;
  for (std::size_t i = 0; i < m_probe.size(); ++i) {
    m_probe.point_into(i, point);
    bind_into(bindings, action, point, action.identity_value);
    transform_into(action, bindings, image);
    for (std::size_t c = 0; c < width; ++c)
      worst = std::max(worst, std::abs(image[c] - point[c]));
  }
  return worst;
}

double additivity_defect(const GroupAction& action, const Grid& m_probe, double e1,
                         double e2) {
  require_m_probe(action, m_probe, "additivity_defect");
  const std::size_t width = action.ambient_dim() + 1;
  Bindings bindings;
  std::vector<double> point(width);
  std::vector<double> stage(width);
  std::vector<double> composed(width);
  std::vector<double> direct(width);
  double worst = 0.0;
  for (std::size_t i = 0; i < m_probe.size(); ++i) {
    m_probe.point_into(i, point);
    bind_into(bindings, action, point, e2);
    transform_into(action, bindings, stage);
    bind_into(bindings, action, stage, e1);
    transform_into(action, bindings, composed);
    bind_into(bindings, action, point, e1 + e2);
    transform_into(action, bindings, direct);
    for (std::size_t c = 0; c < width; ++c)
      worst = std::max(worst, std::abs(composed[c] - direct[c]));
  }
  return worst;
}

namespace {

GroupAction make_action(std::string name, std::string_view g1_source,
                        std::string_view g2_source, std::string parameter) {
  SymbolTable symbols;
  symbols.variables = {"x", "u"};
  symbols.parameters = {parameter};
  GroupAction action;
  action.name = std::move(name);
  action.variables = {"x"};
  action.dependent = "u";
  action.g1 = {parse(g1_source, symbols)};
  action.g2 = parse(g2_source, symbols);
  action.parameter = std::move(parameter);
  return action;
}

}  // namespace

GroupAction translation_action() {
  return make_action("translation", "x + eps", "u", "eps");
}

GroupAction scaling_action() {
  return make_action("scaling", "x", "exp(eps)*u", "eps");
}

GroupAction linear_shear_action() {
  return make_action("linear-shear", "x + eps*u", "u", "eps");
}

GroupAction quadratic_shear_action() {
  return make_action("quadratic-shear", "x + eps*u^2", "u", "eps");
}

GroupAction rotation_action() {
  return make_action("rotation", "x*cos(theta) - u*sin(theta)",
                     "x*sin(theta) + u*cos(theta)", "theta");
}

const std::vector<GroupAction>& builtin_actions() {
  static const std::vector<GroupAction> families = {
      translation_action(), scaling_action(), linear_shear_action(),
      quadratic_shear_action(), rotation_action()};
  return families;
}

}  // namespace paract
