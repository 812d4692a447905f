// Sampled curves in R^N and the discrete operators used by the integrator,
// the entropy engine and the tangent-flow diagnostics.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "acsf/radius.hpp"

namespace acsf {

using Point = std::vector<double>;

/// Ordered pair of coordinate indices (0-based) spanning a coordinate plane.
struct Plane {
  std::size_t a = 0;
  std::size_t b = 1;

  /// The j-th plane (0-based) of a torus curve: coordinates (2j, 2j+1).
  static Plane of_frequency(std::size_t j) { return {2 * j, 2 * j + 1}; }
};

/// Points stored row-major: coordinate c of point i lives at coords[i*dim + c].
class Polyline {
 public:
  Polyline(std::size_t dim, std::vector<double> coords, bool closed)
      : dim_(dim), coords_(std::move(coords)), closed_(closed) {
    if (dim_ == 0) throw DomainError("polyline ambient dimension must be positive");
    if (coords_.size() % dim_ != 0)
      throw DomainError("coordinate count is not a multiple of the ambient dimension");
    if (size() == 0) throw DomainError("polyline needs at least one point");
    if (closed_ && size() < 3) throw DomainError("closed polyline needs at least 3 points");
  }

  static Polyline from_points(const std::vector<Point>& pts, bool closed) {
    if (pts.empty()) throw DomainError("polyline needs at least one point");
    const std::size_t dim = pts.front().size();
    std::vector<double> coords;
    coords.reserve(dim * pts.size());
    for (const auto& p : pts) {
      if (p.size() != dim) throw DomainError("inconsistent point dimensions");
      coords.insert(coords.end(), p.begin(), p.end());
    }
    return Polyline(dim, std::move(coords), closed);
  }

  std::size_t size() const { return coords_.size() / dim_; }
  std::size_t dim() const { return dim_; }
  bool closed() const { return closed_; }
  std::size_t segment_count() const { return closed_ ? size() : size() - 1; }

  std::span<const double> point(std::size_t i) const {
    return {coords_.data() + i * dim_, dim_};
  }
  std::span<double> point(std::size_t i) { return {coords_.data() + i * dim_, dim_}; }
  double operator()(std::size_t i, std::size_t c) const { return coords_[i * dim_ + c]; }
  double& operator()(std::size_t i, std::size_t c) { return coords_[i * dim_ + c]; }

  const std::vector<double>& coords() const { return coords_; }
  std::vector<double>& coords() { return coords_; }

  std::size_t next(std::size_t i) const { return i + 1 == size() ? 0 : i + 1; }
  std::size_t prev(std::size_t i) const { return i == 0 ? size() - 1 : i - 1; }

  /// Every coordinate multiplied by c.
  Polyline scaled(double c) const {
    Polyline out = *this;
    for (double& x : out.coords_) x *= c;
    return out;
  }

  /// Embeds into R^new_dim by appending zero coordinates.
  Polyline padded(std::size_t new_dim) const {
    if (new_dim < dim_) throw DomainError("cannot pad to a smaller dimension");
    std::vector<double> coords(size() * new_dim, 0.0);
    for (std::size_t i = 0; i < size(); ++i)
      for (std::size_t c = 0; c < dim_; ++c) coords[i * new_dim + c] = (*this)(i, c);
    return Polyline(new_dim, std::move(coords), closed_);
  }

 private:
  std::size_t dim_;
  std::vector<double> coords_;
  bool closed_;
};

namespace detail {

inline double distance(std::span<const double> p, std::span<const double> q) {
  double s = 0.0;
  for (std::size_t c = 0; c < p.size(); ++c) s += (p[c] - q[c]) * (p[c] - q[c]);
  return std::sqrt(s);
}

inline double norm(std::span<const double> p) {
  double s = 0.0;
  for (double x : p) s += x * x;
  return std::sqrt(s);
}

}  // namespace detail

/// Length of segment i (from point i to its successor).
inline double segment_length(const Polyline& pl, std::size_t i) {
  return detail::distance(pl.point(i), pl.point(pl.next(i)));
}

inline double polyline_length(const Polyline& pl) {
  if (pl.size() < 2) return 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < pl.segment_count(); ++i) total += segment_length(pl, i);
  return total;
}

inline double min_segment_length(const Polyline& pl) {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < pl.segment_count(); ++i) m = std::min(m, segment_length(pl, i));
  return m;
}

/// Three-point arclength Laplacian
///   2/(a+b) * ((p[i+1]-p[i])/b - (p[i]-p[i-1])/a)
/// at every vertex of a closed polyline, or at the interior vertices of an open one.
inline std::vector<Point> discrete_laplacian(const Polyline& pl) {
  const std::size_t n = pl.size();
  const std::size_t dim = pl.dim();
  const std::size_t first = pl.closed() ? 0 : 1;
  const std::size_t last = pl.closed() ? n : (n >= 2 ? n - 1 : 0);
  std::vector<Point> out;
  if (last > first) out.reserve(last - first);
  for (std::size_t i = first; i < last; ++i) {
    const auto p = pl.point(i);
    const auto prev = pl.point(pl.prev(i));
    const auto next = pl.point(pl.next(i));
    const double a = detail::distance(p, prev);
    const double b = detail::distance(next, p);
    if (!(a > 0.0) || !(b > 0.0))
      throw DomainError("degenerate segment at vertex " + std::to_string(i));
    Point lap(dim);
    const double w = 2.0 / (a + b);
    for (std::size_t c = 0; c < dim; ++c)
      lap[c] = w * ((next[c] - p[c]) / b - (p[c] - prev[c]) / a);
    out.push_back(std::move(lap));
  }
  return out;
}

/// Resamples to `count` points equally spaced in arclength along the
/// piecewise-linear curve.  Closed curves start at point 0; open curves keep
/// both endpoints.
inline Polyline resample_uniform(const Polyline& pl, std::size_t count) {
  if (count < 3) throw DomainError("resample needs at least 3 points");
  const std::size_t segs = pl.segment_count();
  if (segs == 0) throw DomainError("cannot resample a single point");
  std::vector<double> cumulative(segs + 1, 0.0);
  for (std::size_t i = 0; i < segs; ++i) cumulative[i + 1] = cumulative[i] + segment_length(pl, i);
  const double total = cumulative.back();
  if (!(total > 0.0)) throw DomainError("cannot resample a zero-length curve");

  const std::size_t dim = pl.dim();
  const double spacing = pl.closed() ? total / double(count) : total / double(count - 1);
  std::vector<double> coords(count * dim);
  std::size_t seg = 0;
  for (std::size_t k = 0; k < count; ++k) {
    double s = spacing * double(k);
    if (!pl.closed() && k + 1 == count) s = total;
    while (seg + 1 < segs && cumulative[seg + 1] <= s) ++seg;
    const double len = cumulative[seg + 1] - cumulative[seg];
    const double w = len > 0.0 ? std::clamp((s - cumulative[seg]) / len, 0.0, 1.0) : 0.0;
    const auto p = pl.point(seg);
    const auto q = pl.point(pl.next(seg));
    for (std::size_t c = 0; c < dim; ++c) coords[k * dim + c] = p[c] + w * (q[c] - p[c]);
  }
  return Polyline(dim, std::move(coords), pl.closed());
}

/// Signed number of turns of the projection onto `plane` around the origin.
/// Needs enough samples that successive angles differ by less than pi.
inline int winding_number(const Polyline& pl, Plane plane) {
  if (!pl.closed()) throw DomainError("winding number needs a closed polyline");
  if (plane.a >= pl.dim() || plane.b >= pl.dim() || plane.a == plane.b)
    throw DomainError("invalid coordinate plane");
  double rmin = std::numeric_limits<double>::infinity();
  double rmax = 0.0;
  for (std::size_t i = 0; i < pl.size(); ++i) {
    const double rr = std::hypot(pl(i, plane.a), pl(i, plane.b));
    rmin = std::min(rmin, rr);
    rmax = std::max(rmax, rr);
  }
  if (!(rmin > 1e-6 * rmax))
    throw DomainError("indeterminate winding: projection passes too near the origin");

  double total = 0.0;
  double prev = std::atan2(pl(0, plane.b), pl(0, plane.a));
  for (std::size_t k = 1; k <= pl.size(); ++k) {
    const std::size_t i = k % pl.size();
    const double cur = std::atan2(pl(i, plane.b), pl(i, plane.a));
    double d = cur - prev;
    while (d > std::numbers::pi) d -= 2.0 * std::numbers::pi;
    while (d <= -std::numbers::pi) d += 2.0 * std::numbers::pi;
    total += d;
    prev = cur;
  }
  return static_cast<int>(std::lround(total / (2.0 * std::numbers::pi)));
}

/// Largest distance from a vertex to the circle of radius rho centered at the
/// origin of `plane`, measured in R^N.
inline double distance_to_circle(const Polyline& pl, double rho, Plane plane) {
  if (plane.a >= pl.dim() || plane.b >= pl.dim() || plane.a == plane.b)
    throw DomainError("invalid coordinate plane");
  double worst = 0.0;
  for (std::size_t i = 0; i < pl.size(); ++i) {
    const double in_plane = std::hypot(pl(i, plane.a), pl(i, plane.b)) - rho;
    double off = 0.0;
    for (std::size_t c = 0; c < pl.dim(); ++c)
      if (c != plane.a && c != plane.b) off += pl(i, c) * pl(i, c);
    worst = std::max(worst, std::sqrt(in_plane * in_plane + off));
  }
  return worst;
}

/// Tensor-product grid of points in R^N, e.g. a sampled product of two curves.
/// Point (i, j) is stored at coords[(i*cols + j)*dim].  A wrapped direction
/// connects its last row (column) back to the first.
class GridMesh {
 public:
  GridMesh(std::size_t rows, std::size_t cols, std::size_t dim, std::vector<double> coords,
           bool wrap_rows, bool wrap_cols)
      : rows_(rows), cols_(cols), dim_(dim), coords_(std::move(coords)),
        wrap_rows_(wrap_rows), wrap_cols_(wrap_cols) {
    if (rows_ < 2 || cols_ < 2) throw DomainError("grid mesh needs at least 2x2 points");
    if (dim_ == 0 || coords_.size() != rows_ * cols_ * dim_)
      throw DomainError("grid mesh coordinate count mismatch");
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t dim() const { return dim_; }
  bool wrap_rows() const { return wrap_rows_; }
  bool wrap_cols() const { return wrap_cols_; }
  std::size_t cell_rows() const { return wrap_rows_ ? rows_ : rows_ - 1; }
  std::size_t cell_cols() const { return wrap_cols_ ? cols_ : cols_ - 1; }
  std::size_t cell_count() const { return cell_rows() * cell_cols(); }

  std::span<const double> point(std::size_t i, std::size_t j) const {
    return {coords_.data() + (i * cols_ + j) * dim_, dim_};
  }
  const std::vector<double>& coords() const { return coords_; }

 private:
  std::size_t rows_, cols_, dim_;
  std::vector<double> coords_;
  bool wrap_rows_, wrap_cols_;
};

/// The product a x b sampled on the grid of their vertices, in R^(Na + Nb).
inline GridMesh product_mesh(const Polyline& a, const Polyline& b) {
  if (a.size() < 2 || b.size() < 2) throw DomainError("product factors need at least 2 points");
  const std::size_t dim = a.dim() + b.dim();
  std::vector<double> coords;
  coords.reserve(a.size() * b.size() * dim);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) {
      const auto p = a.point(i);
      const auto q = b.point(j);
      coords.insert(coords.end(), p.begin(), p.end());
      coords.insert(coords.end(), q.begin(), q.end());
    }
  return GridMesh(a.size(), b.size(), dim, std::move(coords), a.closed(), b.closed());
}

/// Distance from q to the segment [p0, p1].
inline double point_segment_distance(std::span<const double> q, std::span<const double> p0,
                                     std::span<const double> p1) {
  double dd = 0.0, qd = 0.0;
  for (std::size_t c = 0; c < q.size(); ++c) {
    const double d = p1[c] - p0[c];
    dd += d * d;
    qd += (q[c] - p0[c]) * d;
  }
  const double w = dd > 0.0 ? std::clamp(qd / dd, 0.0, 1.0) : 0.0;
  double s = 0.0;
  for (std::size_t c = 0; c < q.size(); ++c) {
    const double e = q[c] - (p0[c] + w * (p1[c] - p0[c]));
    s += e * e;
  }
  return std::sqrt(s);
}

/// Distance from q to the piecewise-linear curve.
inline double point_polyline_distance(std::span<const double> q, const Polyline& pl) {
  if (pl.size() == 1) return detail::distance(q, pl.point(0));
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < pl.segment_count(); ++i)
    best = std::min(best, point_segment_distance(q, pl.point(i), pl.point(pl.next(i))));
  return best;
}

/// Smallest singular value of the (points x dim) matrix with centered columns.
/// Positive exactly when the points do not lie in an affine hyperplane.
inline double min_centered_singular_value(const Polyline& pl) {
  const auto rows = static_cast<Eigen::Index>(pl.size());
  const auto cols = static_cast<Eigen::Index>(pl.dim());
  Eigen::MatrixXd a(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index c = 0; c < cols; ++c) a(i, c) = pl(std::size_t(i), std::size_t(c));
  a.rowwise() -= a.colwise().mean();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
  const auto& sv = svd.singularValues();
  if (rows < cols) return 0.0;
  return sv(sv.size() - 1);
}

}  // namespace acsf
