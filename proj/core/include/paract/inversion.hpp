#pragma once

#include <paract/geometry.hpp>

#include <functional>
#include <optional>

namespace paract {

enum class Invertibility { Invertible, NotInvertible, Inconclusive };

/// Outcome of the derivative-sign scan that backs every invertibility
/// decision. A sampled check can never certify smooth invertibility exactly,
/// so Inconclusive is surfaced rather than hidden.
struct InvertibilityReport {
  Invertibility verdict = Invertibility::Inconclusive;
  /// Location where the derivative changes sign (NotInvertible only).
  std::optional<double> witness;
  double min_abs_derivative = 0.0;
};

const char* to_string(Invertibility verdict);

/// Default regularity threshold: derivatives of smaller magnitude are
/// treated as singular rather than trusted in quotients.
inline constexpr double kDeltaReg = 1e-8;

/// Evaluates `derivative` on a half-step interior grid of the 1-d `domain`.
/// A sign change with magnitude above `delta_reg` on both sides yields
/// NotInvertible with the witness refined by bisection; magnitude at least
/// `delta_reg` everywhere with constant sign yields Invertible; anything
/// else is Inconclusive.
InvertibilityReport scan_derivative_sign(const std::function<double(double)>& derivative,
                                         const OpenBox& domain, int samples = 1024,
                                         double delta_reg = kDeltaReg);

/// Solves f(x) = target for x in [lo, hi] where f is strictly monotone:
/// bracketed bisection refined with Newton steps. Tolerance is on x.
double invert_monotone(const std::function<double(double)>& f,
                       const std::function<double(double)>& derivative, double lo,
                       double hi, double target, double tol = 1e-12);

/// Range of f over the closure of the 1-d `domain`, sampled on an inclusive
/// uniform grid; for monotone f the result is exact up to rounding.
std::pair<double, double> sampled_range(const std::function<double(double)>& f,
                                        const OpenBox& domain, int samples = 1025);

}  // namespace paract
