#pragma once

#include <paract/error.hpp>

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace paract {

class DimensionMismatchError : public Error {
 public:
  using Error::Error;
};

/// Requested sample count exceeds the configured cap.
class OverflowRiskError : public Error {
 public:
  using Error::Error;
};

/// Open axis-aligned box ∏(lo_i, hi_i) with finite bounds. Unbounded domains
/// are represented by bounded windows chosen per scenario.
class OpenBox {
 public:
  struct Axis {
    double lo;
    double hi;
  };

  explicit OpenBox(std::vector<Axis> axes);
  static OpenBox interval(double lo, double hi);

  std::size_t dim() const { return axes_.size(); }
  const Axis& axis(std::size_t i) const { return axes_[i]; }
  double length(std::size_t i) const { return axes_[i].hi - axes_[i].lo; }

  /// Strict interior membership.
  bool contains(std::span<const double> point) const;
  /// Membership in the closure inflated by `margin` on every side.
  bool contains_closure(std::span<const double> point, double margin = 0.0) const;

  bool operator==(const OpenBox& other) const;

 private:
  std::vector<Axis> axes_;
};

/// Deterministic half-step interior sampling of a box: along each axis the
/// points are lo + (i + 1/2)·(hi − lo)/r, strictly inside the open box.
class Grid {
 public:
  Grid(OpenBox box, std::vector<int> resolution);

  const OpenBox& box() const { return box_; }
  std::size_t dim() const { return box_.dim(); }
  std::size_t size() const { return total_; }
  const std::vector<int>& resolution() const { return resolution_; }

  const std::vector<double>& axis_points(std::size_t axis) const { return axis_points_[axis]; }
  double spacing(std::size_t axis) const;
  /// Row-major point lookup: the last axis varies fastest.
  std::vector<double> point(std::size_t flat_index) const;
  /// Allocation-free variant for hot loops.
  void point_into(std::size_t flat_index, std::span<double> out) const;

 private:
  OpenBox box_;
  std::vector<int> resolution_;
  std::vector<std::vector<double>> axis_points_;
  std::size_t total_;
};

inline constexpr std::size_t kDefaultSampleCap = 10'000'000;

Grid sample(const OpenBox& box, std::vector<int> resolution,
            std::size_t cap = kDefaultSampleCap);
Grid sample(const OpenBox& box, int resolution, std::size_t cap = kDefaultSampleCap);

/// `count` evenly spaced points covering [lo, hi] inclusive; used where the
/// closure of an open domain must be probed (suprema, coverage checks).
std::vector<double> linspace_closed(double lo, double hi, int count);

/// Ordered list of points in ℝᵈ, stored row-major.
class PointCloud {
 public:
  explicit PointCloud(std::size_t dim);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return data_.size() / dim_; }
  bool empty() const { return data_.empty(); }

  void push(std::span<const double> point);
  void push(double x, double u);  // d = 2 convenience
  std::span<const double> point(std::size_t i) const;

  /// CSV: one point per row, '.' decimal separator, '\n' line endings,
  /// shortest round-trip number formatting. Locale independent.
  void write_csv(std::ostream& out, const std::vector<std::string>* header = nullptr) const;

 private:
  std::size_t dim_;
  std::vector<double> data_;
};

/// Directed Hausdorff distance: max over p∈a of the distance from p to b.
/// Brute-force pairing; fine at desk scale.
double covering_distance(const PointCloud& a, const PointCloud& b);

/// max(covering_distance(a, b), covering_distance(b, a)); the symmetric
/// surrogate for set equality of two sampled images.
double symmetric_covering_distance(const PointCloud& a, const PointCloud& b);

/// Largest Euclidean gap between consecutive points: the resolution scale of
/// a curve-sampled cloud, used to set tolerances for set comparisons.
double cloud_spacing(const PointCloud& cloud);

}  // namespace paract
