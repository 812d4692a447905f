// Gaussian F-functional and entropy of sampled curves and product meshes.
//
//   F_(s,y)(M) = (4 pi)^(-n/2) * integral over s*M + y of exp(-|x|^2 / 4)
//   lambda(M)  = sup over s > 0, y in R^N of F_(s,y)(M)
//
// The piecewise-linear curve (or the rectangle cells of a product mesh) is
// integrated exactly: along a segment the Gaussian factors into a transverse
// exponential and an erf difference.  The supremum is searched by Nelder-Mead
// in (ln s, z) with y = -s z, from several deterministic starts.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <random>
#include <span>
#include <vector>

#include "acsf/families.hpp"
#include "acsf/nelder_mead.hpp"
#include "acsf/polyline.hpp"

namespace acsf {

/// Entropy of the round circle, sqrt(2 pi / e): the maximum over s of s sqrt(pi) exp(-s^2/4),
/// attained at s = sqrt(2).
inline double circle_entropy() { return std::sqrt(2.0 * std::numbers::pi / std::numbers::e); }

struct FParams {
  double scale = 1.0;
  Point translation;  // empty means the origin
};

struct EntropyOptions {
  std::size_t restarts = 8;
  double tolerance = 1e-6;
  std::uint64_t seed = 1;
};

struct EntropyEstimate {
  double value = 0.0;
  FParams best_params;
  std::size_t restarts_used = 0;
  std::size_t quadrature_points = 0;  // segments or cells integrated
  bool converged = false;
};

namespace detail {

// erf(a) - erf(b) without cancellation in the tails.
inline double erf_diff(double a, double b) {
  if (a > 0.0 && b > 0.0) return std::erfc(b) - std::erfc(a);
  if (a < 0.0 && b < 0.0) return std::erfc(-a) - std::erfc(-b);
  return std::erf(a) - std::erf(b);
}

// integral_0^len exp(-(u + c)^2 / 4) du / sqrt(pi)
inline double gaussian_run(double len, double c) { return erf_diff(0.5 * (len + c), 0.5 * c); }

// Segments (or cells) in unscaled coordinates; evaluated at x = s (p - z).
class CurveIntegrand {
 public:
  explicit CurveIntegrand(const Polyline& pl) : dim_(pl.dim()) {
    if (pl.size() < 2) return;
    for (std::size_t i = 0; i < pl.segment_count(); ++i) {
      const auto p = pl.point(i);
      const auto q = pl.point(pl.next(i));
      const double len = distance(p, q);
      if (!(len > 0.0)) continue;
      start_.insert(start_.end(), p.begin(), p.end());
      for (std::size_t c = 0; c < dim_; ++c) dir_.push_back((q[c] - p[c]) / len);
      len_.push_back(len);
    }
  }

  std::size_t size() const { return len_.size(); }

  double operator()(double s, std::span<const double> z) const {
    double total = 0.0;
    std::vector<double> x(dim_);
    for (std::size_t i = 0; i < len_.size(); ++i) {
      const double* p = &start_[i * dim_];
      const double* d = &dir_[i * dim_];
      double along = 0.0;
      for (std::size_t c = 0; c < dim_; ++c) {
        x[c] = s * (p[c] - z[c]);
        along += x[c] * d[c];
      }
      double perp2 = 0.0;
      for (std::size_t c = 0; c < dim_; ++c) {
        const double e = x[c] - along * d[c];
        perp2 += e * e;
      }
      if (perp2 > 2980.0) continue;  // exp(-745) underflows
      total += std::exp(-0.25 * perp2) * gaussian_run(s * len_[i], along);
    }
    // sqrt(pi) / sqrt(4 pi) = 1/2
    return 0.5 * total;
  }

 private:
  std::size_t dim_;
  std::vector<double> start_, dir_, len_;
};

class MeshIntegrand {
 public:
  explicit MeshIntegrand(const GridMesh& mesh) : dim_(mesh.dim()) {
    for (std::size_t i = 0; i < mesh.cell_rows(); ++i)
      for (std::size_t j = 0; j < mesh.cell_cols(); ++j) {
        const auto p = mesh.point(i, j);
        const auto p1 = mesh.point((i + 1) % mesh.rows(), j);
        const auto p2 = mesh.point(i, (j + 1) % mesh.cols());
        std::vector<double> e1(dim_), e2(dim_);
        for (std::size_t c = 0; c < dim_; ++c) {
          e1[c] = p1[c] - p[c];
          e2[c] = p2[c] - p[c];
        }
        const double l1 = norm(e1);
        if (!(l1 > 0.0)) continue;
        for (double& v : e1) v /= l1;
        double proj = 0.0;
        for (std::size_t c = 0; c < dim_; ++c) proj += e2[c] * e1[c];
        for (std::size_t c = 0; c < dim_; ++c) e2[c] -= proj * e1[c];
        const double l2 = norm(e2);
        if (!(l2 > 0.0)) continue;
        for (double& v : e2) v /= l2;
        corner_.insert(corner_.end(), p.begin(), p.end());
        e1_.insert(e1_.end(), e1.begin(), e1.end());
        e2_.insert(e2_.end(), e2.begin(), e2.end());
        l1_.push_back(l1);
        l2_.push_back(l2);
      }
  }

  std::size_t size() const { return l1_.size(); }

  double operator()(double s, std::span<const double> z) const {
    double total = 0.0;
    std::vector<double> x(dim_);
    for (std::size_t i = 0; i < l1_.size(); ++i) {
      const double* p = &corner_[i * dim_];
      const double* a = &e1_[i * dim_];
      const double* b = &e2_[i * dim_];
      double ca = 0.0, cb = 0.0;
      for (std::size_t c = 0; c < dim_; ++c) {
        x[c] = s * (p[c] - z[c]);
        ca += x[c] * a[c];
        cb += x[c] * b[c];
      }
      double perp2 = 0.0;
      for (std::size_t c = 0; c < dim_; ++c) {
        const double e = x[c] - ca * a[c] - cb * b[c];
        perp2 += e * e;
      }
      if (perp2 > 2980.0) continue;
      total += std::exp(-0.25 * perp2) * gaussian_run(s * l1_[i], ca) * gaussian_run(s * l2_[i], cb);
    }
    // pi / (4 pi) = 1/4
    return 0.25 * total;
  }

 private:
  std::size_t dim_;
  std::vector<double> corner_, e1_, e2_, l1_, l2_;
};

inline std::vector<double> pull_back_translation(const FParams& params, std::size_t dim) {
  if (!(params.scale > 0.0)) throw DomainError("F-functional scale must be positive");
  std::vector<double> z(dim, 0.0);
  if (params.translation.empty()) return z;
  if (params.translation.size() != dim) throw DomainError("translation dimension mismatch");
  for (std::size_t c = 0; c < dim; ++c) z[c] = -params.translation[c] / params.scale;
  return z;
}

template <class Integrand>
EntropyEstimate maximize_f(const Integrand& integrand, std::span<const double> points,
                           std::size_t dim, const EntropyOptions& opts) {
  EntropyEstimate out;
  out.quadrature_points = integrand.size();
  const std::size_t count = points.size() / dim;
  if (integrand.size() == 0 || count == 0) {
    out.best_params = {1.0, Point(dim, 0.0)};
    out.converged = true;
    return out;
  }

  Point centroid(dim, 0.0);
  for (std::size_t i = 0; i < count; ++i)
    for (std::size_t c = 0; c < dim; ++c) centroid[c] += points[i * dim + c] / double(count);
  double spread2 = 0.0;
  for (std::size_t i = 0; i < count; ++i)
    for (std::size_t c = 0; c < dim; ++c) {
      const double e = points[i * dim + c] - centroid[c];
      spread2 += e * e / double(count);
    }
  double size = std::sqrt(spread2);
  if (!(size > 0.0)) size = 1.0;
  const double log_s0 = std::log(std::sqrt(2.0) / size);

  struct Start {
    double log_s;
    Point z;
  };
  std::vector<Start> starts;
  const std::size_t restarts = std::max<std::size_t>(opts.restarts, 1);
  const std::size_t grid = std::max<std::size_t>(1, (restarts + 1) / 2);
  // y = 0 on a log grid in s: s0, s0/4, 4 s0, s0/16, ...
  for (std::size_t g = 0; g < grid; ++g) {
    const double k = g == 0 ? 0.0 : (g % 2 ? -1.0 : 1.0) * double((g + 1) / 2);
    starts.push_back({log_s0 + k * std::log(4.0), Point(dim, 0.0)});
  }
  if (starts.size() < restarts) starts.push_back({log_s0, centroid});
  std::mt19937_64 rng(opts.seed);
  std::uniform_int_distribution<std::size_t> pick(0, count - 1);
  while (starts.size() < restarts) {
    const std::size_t v = pick(rng);
    starts.push_back({log_s0, Point(points.begin() + std::ptrdiff_t(v * dim),
                                    points.begin() + std::ptrdiff_t((v + 1) * dim))});
  }

  auto objective = [&](const std::vector<double>& x) {
    if (x[0] < -60.0 || x[0] > 60.0) return -1.0;
    return integrand(std::exp(x[0]), std::span<const double>(x).subspan(1));
  };
  std::vector<double> steps(dim + 1, 0.25 * size);
  steps[0] = 0.5;

  struct Found {
    double value;
    double scale;
    Point z;
    bool converged;
  };
  std::vector<Found> found;
  for (const auto& st : starts) {
    std::vector<double> x0(dim + 1);
    x0[0] = st.log_s;
    std::copy(st.z.begin(), st.z.end(), x0.begin() + 1);
    auto res = nelder_mead_maximize(objective, x0, steps);
    // Restart from the optimum to shake off a collapsed simplex.
    for (int polish = 0; polish < 3; ++polish) {
      std::vector<double> small(steps);
      for (double& v : small) v *= 0.1;
      auto again = nelder_mead_maximize(objective, res.x, small);
      const bool improved = again.value > res.value + 1e-3 * opts.tolerance;
      again.evaluations += res.evaluations;
      if (again.value >= res.value) res = std::move(again);
      if (!improved) break;
    }
    found.push_back({res.value, std::exp(res.x[0]), Point(res.x.begin() + 1, res.x.end()),
                     res.converged});
  }

  // Deterministic reduction: largest value, ties to the smaller scale.
  std::stable_sort(found.begin(), found.end(), [](const Found& a, const Found& b) {
    if (a.value != b.value) return a.value > b.value;
    return a.scale < b.scale;
  });
  const Found& best = found.front();
  out.value = best.value;
  out.best_params.scale = best.scale;
  out.best_params.translation.resize(dim);
  for (std::size_t c = 0; c < dim; ++c) out.best_params.translation[c] = -best.scale * best.z[c];
  out.restarts_used = found.size();
  out.converged = found.size() == 1 ? best.converged
                                    : std::abs(found[0].value - found[1].value) <= opts.tolerance;
  return out;
}

}  // namespace detail

/// F at (s, y) for the piecewise-linear curve.
inline double f_functional(const Polyline& pl, const FParams& params) {
  const auto z = detail::pull_back_translation(params, pl.dim());
  return detail::CurveIntegrand(pl)(params.scale, z);
}

/// Two-dimensional F at (s, y) for a grid mesh, normalized by (4 pi)^-1.
inline double f_functional(const GridMesh& mesh, const FParams& params) {
  const auto z = detail::pull_back_translation(params, mesh.dim());
  return detail::MeshIntegrand(mesh)(params.scale, z);
}

/// Closed form of F for the centered torus curve of radius parameter r:
///   s sqrt(pi) exp(-s^2/4 sum r^(2k^2)) sqrt(sum k^2 r^(2k^2)).
inline double f_functional_torus_closed(const FrequencyVector& freqs, double r, double s) {
  detail::require_positive(r);
  if (!(s > 0.0)) throw DomainError("F-functional scale must be positive");
  const double log_r = std::log(r);
  const double radius2 = std::exp(detail::log_power_sum(freqs, log_r));
  const double speed = std::exp(0.5 * detail::log_weighted_power_sum(freqs, log_r, false));
  return s * std::sqrt(std::numbers::pi) * std::exp(-0.25 * s * s * radius2) * speed;
}

inline EntropyEstimate entropy(const Polyline& pl, const EntropyOptions& opts = {}) {
  return detail::maximize_f(detail::CurveIntegrand(pl), pl.coords(), pl.dim(), opts);
}

inline EntropyEstimate entropy(const GridMesh& mesh, const EntropyOptions& opts = {}) {
  return detail::maximize_f(detail::MeshIntegrand(mesh), mesh.coords(), mesh.dim(), opts);
}

struct SweepRow {
  double t = 0.0;
  EntropyEstimate estimate;
  double closed_form_y0 = 0.0;  // sup over s of the centered closed form
};

/// sup over s of f_functional_torus_closed, i.e. lambda(S^1) * speed / radius.
inline double torus_centered_entropy(const FrequencyVector& freqs, double log_r) {
  const double ratio = std::exp(0.5 * (detail::log_weighted_power_sum(freqs, log_r, false) -
                                       detail::log_power_sum(freqs, log_r)));
  return circle_entropy() * ratio;
}

inline std::vector<SweepRow> entropy_sweep(const TorusCurveFamily& family,
                                           std::span<const double> t_grid, std::size_t n_points,
                                           const EntropyOptions& opts = {}) {
  for (std::size_t i = 1; i < t_grid.size(); ++i)
    if (!(t_grid[i] > t_grid[i - 1])) throw DomainError("entropy sweep times must increase");
  std::vector<SweepRow> rows;
  rows.reserve(t_grid.size());
  for (double t : t_grid) {
    const double log_r = family.profile().log_radius(t);
    rows.push_back({t, entropy(family.sample(t, n_points), opts),
                    torus_centered_entropy(family.freqs(), log_r)});
  }
  return rows;
}

/// Largest entropy along a sweep (0 for an empty sweep).
inline double sweep_supremum(const std::vector<SweepRow>& rows) {
  double best = 0.0;
  for (const auto& r : rows) best = std::max(best, r.estimate.value);
  return best;
}

/// 2 r^(k_m^2) / sqrt(4 pi) * exp(-(2m+1)/4), a lower bound for the helix F-value
/// at scale r^(-k_m^2); requires r >= 1.
inline double helix_entropy_lower_bound(const FrequencyVector& freqs, double r) {
  if (!(r >= 1.0)) throw DomainError("helix entropy bound needs r >= 1");
  const double km = freqs.back();
  const double m = double(freqs.size());
  return 2.0 * std::pow(r, km * km) / std::sqrt(4.0 * std::numbers::pi) *
         std::exp(-(2.0 * m + 1.0) / 4.0);
}

/// Numeric F of the helix at time t, integrated over s in [-r^(k_m^2), r^(k_m^2)]
/// at scale r^(-k_m^2), y = 0.
inline double helix_window_f_value(const RadiusProfile& profile, double t, std::size_t n_points) {
  const double km = profile.freqs().back();
  const double amp = std::exp(km * km * profile.log_radius(t));
  const HelixFamily windowed(profile, amp);
  return f_functional(windowed.sample(t, n_points), FParams{1.0 / amp, {}});
}

struct ProductEntropyCheck {
  double product_estimate = 0.0;
  double bound = 0.0;
  bool holds = false;
  EntropyEstimate product;
};

struct ProductCheckOptions {
  std::size_t max_cells = 1u << 20;
  double quadrature_tolerance = 1e-6;  // relative slack on the bound
  EntropyOptions entropy;
};

/// Entropy of the product mesh a x b against lambda(a) lambda(b).
inline ProductEntropyCheck product_entropy_check(const Polyline& a, const EntropyEstimate& ea,
                                                 const Polyline& b, const EntropyEstimate& eb,
                                                 const ProductCheckOptions& opts = {}) {
  if (a.size() * b.size() > opts.max_cells)
    throw DomainError("product mesh budget exceeded: " + std::to_string(a.size()) + " x " +
                      std::to_string(b.size()) + " > " + std::to_string(opts.max_cells));
  ProductEntropyCheck out;
  out.product = entropy(product_mesh(a, b), opts.entropy);
  out.product_estimate = out.product.value;
  out.bound = ea.value * eb.value;
  out.holds = out.product_estimate <= out.bound * (1.0 + opts.quadrature_tolerance);
  return out;
}

}  // namespace acsf
