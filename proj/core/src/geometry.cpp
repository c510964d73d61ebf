#include <paract/geometry.hpp>

#include <charconv>
#include <cmath>
#include <limits>
#include <ostream>
#include <utility>

namespace paract {

OpenBox::OpenBox(std::vector<Axis> axes) : axes_(std::move(axes)) {
  if (axes_.empty()) throw Error("OpenBox: at least one axis required");
  for (const Axis& axis : axes_) {
    if (!std::isfinite(axis.lo) || !std::isfinite(axis.hi))
      throw Error("OpenBox: bounds must be finite");
    if (!(axis.lo < axis.hi)) throw Error("OpenBox: requires lo < hi on every axis");
  }
}

OpenBox OpenBox::interval(double lo, double hi) { return OpenBox({Axis{lo, hi}}); }

bool OpenBox::contains(std::span<const double> point) const {
  if (point.size() != axes_.size()) return false;
  for (std::size_t i = 0; i < axes_.size(); ++i) {
    if (!(axes_[i].lo < point[i] && point[i] < axes_[i].hi)) return false;
  }
  return true;
}

bool OpenBox::contains_closure(std::span<const double> point, double margin) const {
  if (point.size() != axes_.size()) return false;
  for (std::size_t i = 0; i < axes_.size(); ++i) {
    if (point[i] < axes_[i].lo - margin || point[i] > axes_[i].hi + margin) return false;
  }
  return true;
}

bool OpenBox::operator==(const OpenBox& other) const {
  if (axes_.size() != other.axes_.size()) return false;
  for (std::size_t i = 0; i < axes_.size(); ++i) {
    if (axes_[i].lo != other.axes_[i].lo || axes_[i].hi != other.axes_[i].hi) return false;
  }
  return true;
}

Grid::Grid(OpenBox box, std::vector<int> resolution)
    : box_(std::move(box)), resolution_(std::move(resolution)) {
  if (resolution_.size() != box_.dim())
    throw DimensionMismatchError("Grid: one resolution per axis required");
  total_ = 1;
  axis_points_.resize(resolution_.size());
  for (std::size_t axis = 0; axis < resolution_.size(); ++axis) {
    const int r = resolution_[axis];
    if (r < 2) throw Error("Grid: resolution must be at least 2 per axis");
    total_ *= static_cast<std::size_t>(r);
    const double lo = box_.axis(axis).lo;
    const double h = box_.length(axis) / r;
    auto& points = axis_points_[axis];
    points.reserve(static_cast<std::size_t>(r));
    for (int i = 0; i < r; ++i) points.push_back(lo + (i + 0.5) * h);
  }
}

double Grid::spacing(std::size_t axis) const {
  return box_.length(axis) / resolution_[axis];
}

std::vector<double> Grid::point(std::size_t flat_index) const {
  std::vector<double> out(dim());
  point_into(flat_index, out);
  return out;
}

void Grid::point_into(std::size_t flat_index, std::span<double> out) const {
  for (std::size_t axis = dim(); axis-- > 0;) {
    const auto r = static_cast<std::size_t>(resolution_[axis]);
    out[axis] = axis_points_[axis][flat_index % r];
    flat_index /= r;
  }
}

Grid sample(const OpenBox& box, std::vector<int> resolution, std::size_t cap) {
  std::size_t total = 1;
  for (int r : resolution) {
    if (r < 2) throw Error("sample: resolution must be at least 2 per axis");
    if (total > cap / static_cast<std::size_t>(r))
      throw OverflowRiskError("sample: requested grid exceeds the sample cap");
    total *= static_cast<std::size_t>(r);
  }
  return Grid(box, std::move(resolution));
}

Grid sample(const OpenBox& box, int resolution, std::size_t cap) {
  return sample(box, std::vector<int>(box.dim(), resolution), cap);
}

std::vector<double> linspace_closed(double lo, double hi, int count) {
  if (count < 2) throw Error("linspace_closed: at least two points required");
  std::vector<double> points(static_cast<std::size_t>(count));
  const double h = (hi - lo) / (count - 1);
  for (int i = 0; i < count; ++i) points[static_cast<std::size_t>(i)] = lo + i * h;
  points.back() = hi;
  return points;
}

PointCloud::PointCloud(std::size_t dim) : dim_(dim) {
  if (dim == 0) throw Error("PointCloud: dimension must be positive");
}

void PointCloud::push(std::span<const double> point) {
  if (point.size() != dim_)
    throw DimensionMismatchError("PointCloud: point dimension mismatch");
  for (double coordinate : point) {
    if (!std::isfinite(coordinate)) throw Error("PointCloud: points must be finite");
  }
  data_.insert(data_.end(), point.begin(), point.end());
}

void PointCloud::push(double x, double u) {
  const double point[2] = {x, u};
  push(std::span<const double>(point, 2));
}

std::span<const double> PointCloud::point(std::size_t i) const {
  return std::span<const double>(data_.data() + i * dim_, dim_);
}

namespace {

void append_number(std::string& line, double value) {
  char buffer[32];
  auto [end, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  (void)ec;
  line.append(buffer, end);
}

double squared_distance(std::span<const double> p, std::span<const double> q) {
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double d = p[i] - q[i];
    sum += d * d;
  }
  return sum;
}

}  // namespace

void PointCloud::write_csv(std::ostream& out, const std::vector<std::string>* header) const {
  std::string line;
  if (header != nullptr) {
    for (std::size_t i = 0; i < header->size(); ++i) {
      if (i > 0) line += ',';
      line += (*header)[i];
    }
    line += '\n';
    out << line;
  }
  for (std::size_t i = 0; i < size(); ++i) {
    line.clear();
    const auto p = point(i);
    for (std::size_t c = 0; c < dim_; ++c) {
      if (c > 0) line += ',';
      append_number(line, p[c]);
    }
    line += '\n';
    out << line;
  }
}

double covering_distance(const PointCloud& a, const PointCloud& b) {
  if (a.empty() || b.empty()) throw Error("covering_distance: clouds must be nonempty");
  if (a.dim() != b.dim())
    throw DimensionMismatchError("covering_distance: ambient dimensions differ");
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto p = a.point(i);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < b.size(); ++j) {
      const double d2 = squared_distance(p, b.point(j));
      if (d2 < best) best = d2;
    }
    if (best > worst) worst = best;
  }
  return std::sqrt(worst);
}

double symmetric_covering_distance(const PointCloud& a, const PointCloud& b) {
  return std::max(covering_distance(a, b), covering_distance(b, a));
}

double cloud_spacing(const PointCloud& cloud) {
  if (cloud.size() < 2) return 0.0;
  double worst = 0.0;
  for (std::size_t i = 1; i < cloud.size(); ++i) {
    const double d2 = squared_distance(cloud.point(i - 1), cloud.point(i));
    if (d2 > worst) worst = d2;
  }
  return std::sqrt(worst);
}

}  // namespace paract
