#include <paract/inversion.hpp>

#include <cmath>
#include <limits>

namespace paract {

const char* to_string(Invertibility verdict) {
  switch (verdict) {
    case Invertibility::Invertible: return "invertible";
    case Invertibility::NotInvertible: return "not-invertible";
    case Invertibility::Inconclusive: return "inconclusive";
  }
  return "?";
}

namespace {

// Refines a sign change of `f` bracketed by [lo, hi] down to ~1e-13·|hi−lo|.
double bisect_sign_change(const std::function<double(double)>& f, double lo, double hi,
                          double f_lo) {
  for (int i = 0; i < 100 && hi - lo > 1e-13 * (1.0 + std::abs(lo) + std::abs(hi)); ++i) {
    const double mid = 0.5 * (lo + hi);
    const double f_mid = f(mid);
    if ((f_mid < 0.0) == (f_lo < 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

InvertibilityReport scan_derivative_sign(const std::function<double(double)>& derivative,
                                         const OpenBox& domain, int samples,
                                         double delta_reg) {
  if (domain.dim() != 1) throw Error("scan_derivative_sign: 1-d domains only");
  const Grid grid = sample(domain, samples);
  const auto& points = grid.axis_points(0);

  InvertibilityReport report;
  report.min_abs_derivative = std::numeric_limits<double>::infinity();

  bool have_reference = false;
  double reference_x = 0.0;
  bool reference_negative = false;

  for (double x : points) {
    const double d = derivative(x);
    const double magnitude = std::abs(d);
    if (magnitude < report.min_abs_derivative) report.min_abs_derivative = magnitude;
    if (magnitude <= delta_reg) continue;
    const bool negative = d < 0.0;
    if (have_reference && negative != reference_negative) {
      report.verdict = Invertibility::NotInvertible;
      report.witness = bisect_sign_change(derivative, reference_x, x,
                                          reference_negative ? -1.0 : 1.0);
      return report;
    }
    have_reference = true;
    reference_x = x;
    reference_negative = negative;
  }

  report.verdict = report.min_abs_derivative >= delta_reg ? Invertibility::Invertible
                                                          : Invertibility::Inconclusive;
  return report;
}

double invert_monotone(const std::function<double(double)>& f,
                       const std::function<double(double)>& derivative, double lo,
                       double hi, double target, double tol) {
  double a = lo;
  double b = hi;
  double fa = f(a) - target;
  double fb = f(b) - target;
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if ((fa < 0.0) == (fb < 0.0))
    throw Error("invert_monotone: target is not bracketed by the domain");

  double x = 0.5 * (a + b);
  for (int iteration = 0; iteration < 200; ++iteration) {
    const double fx = f(x) - target;
    if (fx == 0.0) return x;
    if ((fx < 0.0) == (fa < 0.0)) {
      a = x;
      fa = fx;
    } else {
      b = x;
      fb = fx;
    }
    if (b - a <= tol) return 0.5 * (a + b);

    double next = 0.0;
    bool newton_ok = false;
    const double d = derivative(x);
    if (std::abs(d) > 1e-300) {
      next = x - fx / d;
      newton_ok = next > a && next < b;
    }
    if (newton_ok && std::abs(next - x) <= tol) {
      // Converged; one more bracket-consistency look is unnecessary since
      // monotonicity pins the root inside [a, b].
      return next;
    }
    x = newton_ok ? next : 0.5 * (a + b);
  }
  return x;
}

std::pair<double, double> sampled_range(const std::function<double(double)>& f,
                                        const OpenBox& domain, int samples) {
  if (domain.dim() != 1) throw Error("sampled_range: 1-d domains only");
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (double x : linspace_closed(domain.axis(0).lo, domain.axis(0).hi, samples)) {
    const double value = f(x);
    if (value < lo) lo = value;
    if (value > hi) hi = value;
  }
  return {lo, hi};
}

}  // namespace paract
