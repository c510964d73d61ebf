#include <paract/functions.hpp>

#include <cmath>
#include <utility>

namespace paract {

namespace {

Bindings bind_axes(const std::vector<std::string>& names, std::span<const double> values) {
  if (names.size() != values.size())
    throw DimensionMismatchError("point dimension does not match declared symbols");
  Bindings bindings;
  for (std::size_t i = 0; i < names.size(); ++i) bindings.set(names[i], values[i]);
  return bindings;
}

std::vector<std::string> parameter_names(std::size_t n) {
  if (n == 1) return {"p"};
  std::vector<std::string> names;
  names.reserve(n);
  for (std::size_t i = 1; i <= n; ++i) names.push_back("p" + std::to_string(i));
  return names;
}

}  // namespace

double ScalarFunction::operator()(std::span<const double> x) const {
  return body.evaluate(bind_axes(variables, x));
}

double ScalarFunction::operator()(double x) const {
  return (*this)(std::span<const double>(&x, 1));
}

NumericFunction ScalarFunction::to_numeric() const {
  if (domain.dim() != 1) throw UnsupportedError("to_numeric: 1-d functions only");
  const Expr expr = body;
  const std::string name = variables[0];
  return NumericFunction{domain, [expr, name](double x) {
                           return expr.evaluate(Bindings{{name, x}});
                         }};
}

std::vector<double> ParametricFunction::value(std::span<const double> p) const {
  const Bindings bindings = bind_axes(parameters, p);
  std::vector<double> out;
  out.reserve(first.size() + 1);
  for (const Expr& component : first) out.push_back(component.evaluate(bindings));
  out.push_back(second.evaluate(bindings));
  return out;
}

std::vector<double> ParametricFunction::value(double p) const {
  return value(std::span<const double>(&p, 1));
}

ScalarFunction make_scalar(OpenBox domain, std::string variable, Expr body) {
  return ScalarFunction{std::move(domain), {std::move(variable)}, std::move(body)};
}

ScalarFunction make_scalar(OpenBox domain, std::string variable, std::string_view source) {
  SymbolTable symbols;
  symbols.variables.insert(variable);
  Expr body = parse(source, symbols);
  return make_scalar(std::move(domain), std::move(variable), std::move(body));
}

ParametricFunction make_parametric(OpenBox domain, std::string parameter, Expr first,
                                   Expr second) {
  return ParametricFunction{std::move(domain), {std::move(parameter)},
                            {std::move(first)}, std::move(second)};
}

ParametricFunction make_parametric(OpenBox domain, std::string parameter,
                                   std::string_view first_source,
                                   std::string_view second_source) {
  SymbolTable symbols;
  symbols.variables.insert(parameter);
  Expr first = parse(first_source, symbols);
  Expr second = parse(second_source, symbols);
  return make_parametric(std::move(domain), std::move(parameter), std::move(first),
                         std::move(second));
}

namespace {

void require_declared(const Expr& expr, const std::vector<std::string>& names,
                      const char* what) {
  for (const std::string& symbol : expr.free_symbols()) {
    bool declared = false;
    for (const std::string& name : names) {
      if (name == symbol) {
        declared = true;
        break;
      }
    }
    if (!declared)
      throw Error(std::string(what) + ": free symbol '" + symbol + "' is not declared");
  }
}

}  // namespace

void validate(const ScalarFunction& u, int resolution) {
  if (u.variables.size() != u.domain.dim())
    throw DimensionMismatchError("ScalarFunction: one variable per axis required");
  require_declared(u.body, u.variables, "ScalarFunction");
  const Grid grid = sample(u.domain, resolution);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double value = u(grid.point(i));
    if (!std::isfinite(value))
      throw Error("ScalarFunction: body is not finite on the domain grid");
  }
}

void validate(const ParametricFunction& v, int resolution, const OpenBox* omega) {
  if (v.parameters.size() != v.domain.dim())
    throw DimensionMismatchError("ParametricFunction: one parameter per axis required");
  if (v.first.empty())
    throw Error("ParametricFunction: first component must have at least one entry");
  for (const Expr& component : v.first)
    require_declared(component, v.parameters, "ParametricFunction");
  require_declared(v.second, v.parameters, "ParametricFunction");
  const Grid grid = sample(v.domain, resolution);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const std::vector<double> m = v.value(grid.point(i));
    for (double coordinate : m) {
      if (!std::isfinite(coordinate))
        throw Error("ParametricFunction: image is not finite on the domain grid");
    }
    if (omega != nullptr) {
      const std::span<const double> x(m.data(), m.size() - 1);
      if (!omega->contains_closure(x))
        throw Error("ParametricFunction: first component leaves the ambient box");
    }
  }
}

ParametricFunction canonical_parametrize(const ScalarFunction& u) {
  const std::size_t n = u.domain.dim();
  std::vector<std::string> params = parameter_names(n);
  std::map<std::string, Expr> rename;
  std::vector<Expr> first;
  first.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    rename.emplace(u.variables[i], Expr::variable(params[i]));
    first.push_back(Expr::variable(params[i]));
  }
  return ParametricFunction{u.domain, std::move(params), std::move(first),
                            u.body.substitute(rename)};
}

PointCloud graph_cloud(const ScalarFunction& u, const Grid& grid) {
  if (grid.dim() != u.domain.dim())
    throw DimensionMismatchError("graph_cloud: grid dimension mismatch");
  PointCloud cloud(grid.dim() + 1);
  std::vector<double> point(grid.dim() + 1);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const std::vector<double> x = grid.point(i);
    for (std::size_t c = 0; c < x.size(); ++c) point[c] = x[c];
    point.back() = u(x);
    cloud.push(point);
  }
  return cloud;
}

PointCloud graph_cloud(const NumericFunction& u, const Grid& grid) {
  if (grid.dim() != 1) throw UnsupportedError("graph_cloud: numeric functions are 1-d");
  PointCloud cloud(2);
  for (double x : grid.axis_points(0)) cloud.push(x, u(x));
  return cloud;
}

PointCloud image_cloud(const ParametricFunction& v, const Grid& grid) {
  if (grid.dim() != v.domain.dim())
    throw DimensionMismatchError("image_cloud: grid dimension mismatch");
  PointCloud cloud(v.first.size() + 1);
  for (std::size_t i = 0; i < grid.size(); ++i) cloud.push(v.value(grid.point(i)));
  return cloud;
}

double parametric_derivative(const ParametricFunction& v, double p, int order,
                             double delta_reg) {
  if (v.domain.dim() != 1 || v.first.size() != 1)
    throw UnsupportedError("parametric_derivative: 1-d parametrizations only");
  if (order != 1 && order != 2)
    throw Error("parametric_derivative: order must be 1 or 2");

  const std::string& name = v.parameters[0];
  const Bindings at{{name, p}};
  const Expr v1_prime = v.first[0].differentiate(name);
  const Expr v2_prime = v.second.differentiate(name);
  const double d1 = v1_prime.evaluate(at);
  if (std::abs(d1) <= delta_reg)
    throw SingularParametrizationError(
        "parametric_derivative: first component is singular at the given point");
  const double d2 = v2_prime.evaluate(at);
  if (order == 1) return d2 / d1;

  const double dd1 = v1_prime.differentiate(name).evaluate(at);
  const double dd2 = v2_prime.differentiate(name).evaluate(at);
  return (dd2 * d1 - d2 * dd1) / (d1 * d1 * d1);
}

}  // namespace paract
