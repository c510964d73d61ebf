#include <paract/analysis.hpp>

#include <algorithm>
#include <cmath>
#include <utility>

namespace paract {

std::vector<double> Witness::operator()(std::span<const double> p) const {
  if (p.size() != source_parameters.size())
    throw DimensionMismatchError("Witness: point dimension mismatch");
  Bindings bindings;
  for (std::size_t i = 0; i < p.size(); ++i) bindings.set(source_parameters[i], p[i]);
  std::vector<double> out;
  out.reserve(components.size());
  for (const Expr& component : components) out.push_back(component.evaluate(bindings));
  return out;
}

Witness identity_witness(const OpenBox& domain, std::vector<std::string> parameters) {
  std::vector<Expr> components;
  components.reserve(parameters.size());
  for (const std::string& name : parameters) components.push_back(Expr::variable(name));
  return Witness{domain, domain, std::move(parameters), std::move(components)};
}

Witness make_witness(OpenBox source, OpenBox target, std::string parameter,
                     std::string_view source_text) {
  SymbolTable symbols;
  symbols.variables.insert(parameter);
  std::vector<Expr> components = {parse(source_text, symbols)};
  return Witness{std::move(source), std::move(target), {std::move(parameter)},
                 std::move(components)};
}

namespace {

void require_1d(const ParametricFunction& v, const char* what) {
  if (v.domain.dim() != 1 || v.first.size() != 1)
    throw UnsupportedError(std::string(what) + ": 1-d parametrizations only");
}

// Covering check for the sampled closure of a 1-d range against a target
// interval, with the stated margin.
bool covers_interval(double sampled_lo, double sampled_hi, const OpenBox::Axis& target,
                     double margin) {
  return sampled_lo <= target.lo + margin && sampled_hi >= target.hi - margin;
}

struct RangeScan {
  double lo;
  double hi;
};

RangeScan scan_range(const Expr& body, const std::string& parameter, const OpenBox& domain,
                     int samples) {
  const auto f = [&body, &parameter](double p) {
    return body.evaluate(Bindings{{parameter, p}});
  };
  const auto [lo, hi] = sampled_range(f, domain, samples + 1);
  return {lo, hi};
}

}  // namespace

RelationVerdict is_parametrization_of(const ParametricFunction& v, const NumericFunction& u,
                                      int resolution, double tol_fun) {
  require_1d(v, "is_parametrization_of");
  if (u.domain.dim() != 1)
    throw UnsupportedError("is_parametrization_of: 1-d functions only");

  const Grid grid = sample(v.domain, resolution);
  const std::string& parameter = v.parameters[0];
  const OpenBox::Axis delta = u.domain.axis(0);
  const double margin = 2.0 * u.domain.length(0) / resolution;

  RelationVerdict verdict;
  for (double p : grid.axis_points(0)) {
    const Bindings bindings{{parameter, p}};
    double x = v.first[0].evaluate(bindings);
    if (x < delta.lo - margin || x > delta.hi + margin)
      throw RangeEscapeError("is_parametrization_of: V1 leaves the function's window at p=" +
                             std::to_string(p));
    // The window is open; inversion-backed functions are only evaluable
    // inside, so clamp boundary grazes.
    x = std::clamp(x, delta.lo, delta.hi);
    const double defect = std::abs(v.second.evaluate(bindings) - u.eval(x));
    if (defect > verdict.max_defect) {
      verdict.max_defect = defect;
      verdict.defect_point = std::vector<double>{p};
    }
  }

  const RangeScan range = scan_range(v.first[0], parameter, v.domain, resolution);
  const bool surjective = covers_interval(range.lo, range.hi, delta, margin);
  verdict.holds = surjective && verdict.max_defect <= tol_fun;
  return verdict;
}

RelationVerdict is_parametrization_of(const ParametricFunction& v, const ScalarFunction& u,
                                      int resolution, double tol_fun) {
  return is_parametrization_of(v, u.to_numeric(), resolution, tol_fun);
}

RelationVerdict refines_with_witness(const ParametricFunction& v,
                                     const ParametricFunction& v_prime, const Witness& phi,
                                     int resolution, double tol) {
  require_1d(v, "refines_with_witness");
  require_1d(v_prime, "refines_with_witness");
  if (phi.components.size() != v_prime.domain.dim())
    throw DimensionMismatchError("refines_with_witness: witness target dimension mismatch");

  const Grid grid = sample(v.domain, resolution);
  RelationVerdict verdict;
  for (double p : grid.axis_points(0)) {
    const std::vector<double> left = v.value(p);
    const std::vector<double> mapped = phi(std::span<const double>(&p, 1));
    const std::vector<double> right = v_prime.value(mapped[0]);
    for (std::size_t c = 0; c < left.size(); ++c) {
      const double defect = std::abs(left[c] - right[c]);
      if (defect > verdict.max_defect) {
        verdict.max_defect = defect;
        verdict.defect_point = std::vector<double>{p};
      }
    }
  }

  const double margin = 2.0 * v_prime.domain.length(0) / resolution;
  const RangeScan range =
      scan_range(phi.components[0], phi.source_parameters[0], v.domain, resolution);
  const bool surjective =
      covers_interval(range.lo, range.hi, v_prime.domain.axis(0), margin);
  verdict.holds = surjective && verdict.max_defect <= tol;
  return verdict;
}

RelationVerdict equivalent(const ParametricFunction& v, const ParametricFunction& v_prime,
                           const Grid& grid_v, const Grid& grid_v_prime,
                           std::optional<double> tol_set) {
  const PointCloud image_v = image_cloud(v, grid_v);
  const PointCloud image_v_prime = image_cloud(v_prime, grid_v_prime);
  const double tol =
      tol_set.value_or(2.0 * std::max(cloud_spacing(image_v), cloud_spacing(image_v_prime)));
  RelationVerdict verdict;
  verdict.max_defect = symmetric_covering_distance(image_v, image_v_prime);
  verdict.holds = verdict.max_defect <= tol;
  return verdict;
}

DeparametrizeResult try_deparametrize(const ParametricFunction& v, int samples,
                                      double delta_reg, double inverse_tol) {
  require_1d(v, "try_deparametrize");
  const std::string parameter = v.parameters[0];
  const Expr v1 = v.first[0];
  const Expr v1_prime = v1.differentiate(parameter);
  const auto v1_fn = [v1, parameter](double p) {
    return v1.evaluate(Bindings{{parameter, p}});
  };
  const auto v1_prime_fn = [v1_prime, parameter](double p) {
    return v1_prime.evaluate(Bindings{{parameter, p}});
  };

  DeparametrizeResult result;
  result.report = scan_derivative_sign(v1_prime_fn, v.domain, samples, delta_reg);
  if (result.report.verdict != Invertibility::Invertible) return result;

  const auto [lo, hi] = sampled_range(v1_fn, v.domain, samples + 1);
  const Expr v2 = v.second;
  const double domain_lo = v.domain.axis(0).lo;
  const double domain_hi = v.domain.axis(0).hi;
  auto eval = [v1_fn, v1_prime_fn, v2, parameter, domain_lo, domain_hi,
               inverse_tol](double x) {
    const double p =
        invert_monotone(v1_fn, v1_prime_fn, domain_lo, domain_hi, x, inverse_tol);
    return v2.evaluate(Bindings{{parameter, p}});
  };
  result.function = NumericFunction{OpenBox::interval(lo, hi), std::move(eval)};
  return result;
}

MapRef as_map(const ParametricFunction& v) {
  return MapRef{v.domain.dim(), v.first.size() + 1,
                [v](std::span<const double> p) { return v.value(p); }};
}

MapRef as_map(const Witness& phi) {
  return MapRef{phi.source_parameters.size(), phi.components.size(),
                [phi](std::span<const double> p) { return phi(p); }};
}

MapRef as_map(const NumericFunction& f) {
  return MapRef{1, 1, [f](std::span<const double> x) {
                  return std::vector<double>{f.eval(x[0])};
                }};
}

MapRef as_map(const Expr& body, std::string input_name) {
  return MapRef{1, 1, [body, input_name](std::span<const double> x) {
                  return std::vector<double>{body.evaluate(Bindings{{input_name, x[0]}})};
                }};
}

MapRef graph_map(const NumericFunction& f) {
  return MapRef{1, 2, [f](std::span<const double> x) {
                  return std::vector<double>{x[0], f.eval(x[0])};
                }};
}

MapRef identity_map(std::size_t dim) {
  return MapRef{dim, dim, [](std::span<const double> p) {
                  return std::vector<double>(p.begin(), p.end());
                }};
}

MapRef compose(const MapRef& outer, const MapRef& inner) {
  if (inner.out_dim != outer.in_dim)
    throw DimensionMismatchError("compose: inner codomain does not match outer domain");
  return MapRef{inner.in_dim, outer.out_dim,
                [outer, inner](std::span<const double> p) {
                  const std::vector<double> mid = inner.eval(p);
                  return outer.eval(mid);
                }};
}

std::optional<MapRef> inverse_map(const Expr& body, const std::string& input_name,
                                  const OpenBox& domain, int samples, double delta_reg,
                                  double inverse_tol) {
  const Expr derivative = body.differentiate(input_name);
  const auto f = [body, input_name](double x) {
    return body.evaluate(Bindings{{input_name, x}});
  };
  const auto df = [derivative, input_name](double x) {
    return derivative.evaluate(Bindings{{input_name, x}});
  };
  const InvertibilityReport report = scan_derivative_sign(df, domain, samples, delta_reg);
  if (report.verdict != Invertibility::Invertible) return std::nullopt;
  const double lo = domain.axis(0).lo;
  const double hi = domain.axis(0).hi;
  return MapRef{1, 1, [f, df, lo, hi, inverse_tol](std::span<const double> x) {
                  return std::vector<double>{
                      invert_monotone(f, df, lo, hi, x[0], inverse_tol)};
                }};
}

RelationVerdict check_commutes(const MapRef& top, const MapRef& left, const MapRef& right,
                               const Grid& source, double tol) {
  if (source.dim() != top.in_dim || source.dim() != left.in_dim)
    throw DimensionMismatchError("check_commutes: source grid dimension mismatch");
  if (left.out_dim != right.in_dim)
    throw DimensionMismatchError("check_commutes: left codomain does not match right domain");
  if (right.out_dim != top.out_dim)
    throw DimensionMismatchError("check_commutes: right codomain does not match top codomain");

  RelationVerdict verdict;
  for (std::size_t i = 0; i < source.size(); ++i) {
    const std::vector<double> p = source.point(i);
    const std::vector<double> via = right.eval(left.eval(p));
    const std::vector<double> direct = top.eval(p);
    for (std::size_t c = 0; c < via.size(); ++c) {
      const double defect = std::abs(via[c] - direct[c]);
      if (defect > verdict.max_defect) {
        verdict.max_defect = defect;
        verdict.defect_point = p;
      }
    }
  }
  verdict.holds = verdict.max_defect <= tol;
  return verdict;
}

}  // namespace paract
