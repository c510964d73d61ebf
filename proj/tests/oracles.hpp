// Independent numeric oracles used to freeze expected values. Everything
// here is deliberately separate from the library's implementation paths:
// finite differences instead of symbolic derivatives, plain scans instead
// of the library's verdict machinery, and a naive nearest-neighbor pairing
// instead of covering_distance.
#pragma once

#include <paract/expr.hpp>
#include <paract/geometry.hpp>

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <vector>

namespace oracle {

template <typename F>
double central_fd(F&& f, double x, double h = 1e-6) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

template <typename F>
double second_fd(F&& f, double x, double h = 1e-4) {
  return (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
}

// Nearest-neighbor directed distance by exhaustive pairing.
inline double naive_directed_distance(const paract::PointCloud& a,
                                      const paract::PointCloud& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < b.size(); ++j) {
      double sum = 0.0;
      for (std::size_t c = 0; c < a.dim(); ++c) {
        const double d = a.point(i)[c] - b.point(j)[c];
        sum += d * d;
      }
      best = std::min(best, std::sqrt(sum));
    }
    worst = std::max(worst, best);
  }
  return worst;
}

// First sign change of f over [lo, hi], located by scan plus bisection.
template <typename F>
std::optional<double> sign_scan_root(F&& f, double lo, double hi, int samples = 4096) {
  double prev_x = lo;
  double prev_f = f(lo);
  for (int i = 1; i <= samples; ++i) {
    const double x = lo + (hi - lo) * i / samples;
    const double fx = f(x);
    if ((fx < 0.0) != (prev_f < 0.0)) {
      double a = prev_x;
      double b = x;
      double fa = prev_f;
      for (int k = 0; k < 200 && b - a > 1e-14; ++k) {
        const double mid = 0.5 * (a + b);
        const double fm = f(mid);
        if ((fm < 0.0) == (fa < 0.0)) {
          a = mid;
          fa = fm;
        } else {
          b = mid;
        }
      }
      return 0.5 * (a + b);
    }
    prev_x = x;
    prev_f = fx;
  }
  return std::nullopt;
}

// Random expression trees over the given symbols, for property tests.
class ExprGenerator {
 public:
  ExprGenerator(std::vector<std::string> variables, std::uint64_t seed)
      : variables_(std::move(variables)), rng_(seed) {}

  paract::Expr tree(int max_depth) {
    if (max_depth <= 0 || pick(4) == 0) return leaf();
    switch (pick(8)) {
      case 0: return tree(max_depth - 1) + tree(max_depth - 1);
      case 1: return tree(max_depth - 1) - tree(max_depth - 1);
      case 2: return tree(max_depth - 1) * tree(max_depth - 1);
      case 3: return tree(max_depth - 1) / tree(max_depth - 1);
      case 4: return paract::pow(tree(max_depth - 1), pick(4));
      case 5: return paract::sin(tree(max_depth - 1));
      case 6: return paract::cos(tree(max_depth - 1));
      default: return -tree(max_depth - 1);
    }
  }

  paract::Bindings bindings(double lo = -2.0, double hi = 2.0) {
    paract::Bindings out;
    for (const std::string& name : variables_) out.set(name, real(lo, hi));
    return out;
  }

  double real(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng_);
  }

 private:
  int pick(int bound) { return std::uniform_int_distribution<int>(0, bound - 1)(rng_); }

  paract::Expr leaf() {
    switch (pick(3)) {
      case 0: return paract::Expr::constant(real(-2.0, 2.0));
      default:
        return paract::Expr::variable(
            variables_[static_cast<std::size_t>(pick(static_cast<int>(variables_.size())))]);
    }
  }

  std::vector<std::string> variables_;
  std::mt19937_64 rng_;
};

}  // namespace oracle
