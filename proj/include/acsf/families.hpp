// Closed-form ancient curve-shortening flows.
//
//   torus curve in R^(2m):    x_(2j-1) = r^(k_j^2) cos(k_j th),  x_(2j) = r^(k_j^2) sin(k_j th)
//   helix in R^(2m+1):        same first 2m coordinates in the parameter s, x_(2m+1) = s
//   product of torus curves:  concatenation of factor coordinates, common t
//
// All quantities are computed from ln r(t) so that radii below the smallest
// representable double (helix, large t) still give finite frames.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <variant>
#include <vector>

#include "acsf/polyline.hpp"
#include "acsf/radius.hpp"

namespace acsf {

/// Position, d/dparam, intrinsic Laplacian of the position and d/dt at one point.
struct PointFrame {
  Point position;
  Point param_velocity;
  Point laplacian;
  Point time_derivative;
};

struct CurveInvariants {
  double speed = 0.0;   // |d/dparam|, independent of the parameter
  double length = 0.0;  // full curve (torus) or sampling window (helix)
};

struct ProductInvariants {
  std::vector<double> speeds;
  std::vector<double> lengths;
  double volume = 0.0;  // product of factor lengths
};

/// Largest componentwise gap between the Laplacian and the time derivative.
struct PdeResidual {
  double raw = 0.0;     // sup |lap - dt|_inf
  double scaled = 0.0;  // sup |lap - dt|_inf / (1 + |position|)
};

namespace detail {

// Fills the 2m oscillating coordinates shared by torus curves and helices.
inline void fill_oscillating_frame(const RadiusProfile& profile, double log_r, double param,
                                   PointFrame& f) {
  const auto& freqs = profile.freqs();
  const bool helix = profile.kind() == FamilyKind::Helix;
  const double log_denom = log_weighted_power_sum(freqs, log_r, helix);
  // r' from the implicit relation F(r(t)) = const - t.
  const double log_rdot = log_abs_ode_rhs(freqs, log_r, profile.kind());
  for (std::size_t j = 0; j < freqs.size(); ++j) {
    const double k = freqs[j];
    const double k2 = k * k;
    const double amp = std::exp(k2 * log_r);
    const double c = std::cos(k * param);
    const double s = std::sin(k * param);
    f.position[2 * j] = amp * c;
    f.position[2 * j + 1] = amp * s;
    f.param_velocity[2 * j] = -k * amp * s;
    f.param_velocity[2 * j + 1] = k * amp * c;
    const double lap_coeff = -k2 * std::exp(k2 * log_r - log_denom);
    f.laplacian[2 * j] = lap_coeff * c;
    f.laplacian[2 * j + 1] = lap_coeff * s;
    // d/dt r^(k^2) = k^2 r^(k^2 - 1) r'
    const double dt_coeff = -k2 * std::exp((k2 - 1.0) * log_r + log_rdot);
    f.time_derivative[2 * j] = dt_coeff * c;
    f.time_derivative[2 * j + 1] = dt_coeff * s;
  }
}

inline PointFrame make_frame(std::size_t dim) {
  return {Point(dim, 0.0), Point(dim, 0.0), Point(dim, 0.0), Point(dim, 0.0)};
}

inline void accumulate_residual(const PointFrame& f, PdeResidual& acc) {
  double gap = 0.0;
  for (std::size_t c = 0; c < f.laplacian.size(); ++c)
    gap = std::max(gap, std::abs(f.laplacian[c] - f.time_derivative[c]));
  acc.raw = std::max(acc.raw, gap);
  acc.scaled = std::max(acc.scaled, gap / (1.0 + detail::norm(f.position)));
}

}  // namespace detail

/// Torus curve gamma_t in R^(2m), theta in [0, 2 pi), defined for t < 0.
class TorusCurveFamily {
 public:
  explicit TorusCurveFamily(FrequencyVector freqs)
      : profile_(RadiusProfile::torus(std::move(freqs))) {}
  explicit TorusCurveFamily(RadiusProfile profile) : profile_(std::move(profile)) {
    if (profile_.kind() != FamilyKind::Torus)
      throw DomainError("torus curve family needs a torus radius profile");
  }

  const RadiusProfile& profile() const { return profile_; }
  const FrequencyVector& freqs() const { return profile_.freqs(); }
  std::size_t dim() const { return 2 * profile_.m(); }

  PointFrame evaluate(double t, double theta) const {
    PointFrame f = detail::make_frame(dim());
    detail::fill_oscillating_frame(profile_, profile_.log_radius(t), theta, f);
    return f;
  }

  CurveInvariants invariants(double t) const {
    const double speed =
        std::exp(0.5 * detail::log_weighted_power_sum(freqs(), profile_.log_radius(t), false));
    return {speed, 2.0 * std::numbers::pi * speed};
  }

  /// Residual over n uniformly spaced theta in [0, 2 pi).
  PdeResidual pde_residual(double t, std::size_t n_samples) const {
    if (n_samples < 8) throw DomainError("pde_residual needs at least 8 samples");
    PdeResidual acc;
    for (std::size_t i = 0; i < n_samples; ++i)
      detail::accumulate_residual(evaluate(t, theta_at(i, n_samples)), acc);
    return acc;
  }

  Polyline sample(double t, std::size_t n_points) const {
    if (n_points < 4) throw DomainError("torus sample needs at least 4 points");
    const double log_r = profile_.log_radius(t);
    const std::size_t d = dim();
    std::vector<double> coords(n_points * d);
    for (std::size_t i = 0; i < n_points; ++i) {
      const double th = theta_at(i, n_points);
      for (std::size_t j = 0; j < profile_.m(); ++j) {
        const double k = freqs()[j];
        const double amp = std::exp(k * k * log_r);
        coords[i * d + 2 * j] = amp * std::cos(k * th);
        coords[i * d + 2 * j + 1] = amp * std::sin(k * th);
      }
    }
    return Polyline(d, std::move(coords), true);
  }

  static double theta_at(std::size_t i, std::size_t n) {
    return 2.0 * std::numbers::pi * double(i) / double(n);
  }

 private:
  RadiusProfile profile_;
};

/// Helix Gamma_t in R^(2m+1), eternal.  Sampled on s in [-S, S]; S defaults to
/// max(2 pi, 4 r^(k_m^2)) evaluated at the sampling time.
class HelixFamily {
 public:
  explicit HelixFamily(FrequencyVector freqs, double window = 0.0)
      : HelixFamily(RadiusProfile::helix(std::move(freqs)), window) {}
  explicit HelixFamily(RadiusProfile profile, double window = 0.0)
      : profile_(std::move(profile)), window_(window) {
    if (profile_.kind() != FamilyKind::Helix)
      throw DomainError("helix family needs a helix radius profile");
    if (window_ < 0.0) throw DomainError("helix window must be positive");
  }

  const RadiusProfile& profile() const { return profile_; }
  const FrequencyVector& freqs() const { return profile_.freqs(); }
  std::size_t dim() const { return 2 * profile_.m() + 1; }

  /// Half-width of the sampling window at time t.
  double window(double t) const {
    if (window_ > 0.0) return window_;
    const double km = freqs().back();
    return std::max(2.0 * std::numbers::pi, 4.0 * std::exp(km * km * profile_.log_radius(t)));
  }

  PointFrame evaluate(double t, double s) const {
    PointFrame f = detail::make_frame(dim());
    detail::fill_oscillating_frame(profile_, profile_.log_radius(t), s, f);
    const std::size_t axis = dim() - 1;
    f.position[axis] = s;
    f.param_velocity[axis] = 1.0;
    return f;
  }

  CurveInvariants invariants(double t) const {
    const double speed =
        std::exp(0.5 * detail::log_weighted_power_sum(freqs(), profile_.log_radius(t), true));
    return {speed, 2.0 * window(t) * speed};
  }

  PdeResidual pde_residual(double t, std::size_t n_samples) const {
    if (n_samples < 8) throw DomainError("pde_residual needs at least 8 samples");
    const double w = window(t);
    PdeResidual acc;
    for (std::size_t i = 0; i < n_samples; ++i)
      detail::accumulate_residual(evaluate(t, s_at(i, n_samples, w)), acc);
    return acc;
  }

  Polyline sample(double t, std::size_t n_points) const {
    if (n_points < 2) throw DomainError("helix sample needs at least 2 points");
    const double w = window(t);
    const std::size_t d = dim();
    std::vector<double> coords;
    coords.reserve(n_points * d);
    for (std::size_t i = 0; i < n_points; ++i) {
      const auto f = evaluate(t, s_at(i, n_points, w));
      coords.insert(coords.end(), f.position.begin(), f.position.end());
    }
    return Polyline(d, std::move(coords), false);
  }

  static double s_at(std::size_t i, std::size_t n, double window) {
    return -window + 2.0 * window * double(i) / double(n - 1);
  }

 private:
  RadiusProfile profile_;
  double window_;
};

/// Product of torus curves flowing with a common t; each factor solves its own
/// radius equation.
class ProductFamily {
 public:
  explicit ProductFamily(std::vector<TorusCurveFamily> factors) : factors_(std::move(factors)) {
    if (factors_.empty()) throw DomainError("product needs at least one factor");
  }

  const std::vector<TorusCurveFamily>& factors() const { return factors_; }
  std::size_t intrinsic_dim() const { return factors_.size(); }
  std::size_t dim() const {
    std::size_t d = 0;
    for (const auto& f : factors_) d += f.dim();
    return d;
  }

  PointFrame evaluate(double t, std::span<const double> params) const {
    if (params.size() != factors_.size())
      throw DomainError("product evaluation needs one parameter per factor");
    PointFrame out;
    for (std::size_t i = 0; i < factors_.size(); ++i) {
      const auto f = factors_[i].evaluate(t, params[i]);
      out.position.insert(out.position.end(), f.position.begin(), f.position.end());
      out.param_velocity.insert(out.param_velocity.end(), f.param_velocity.begin(),
                                f.param_velocity.end());
      out.laplacian.insert(out.laplacian.end(), f.laplacian.begin(), f.laplacian.end());
      out.time_derivative.insert(out.time_derivative.end(), f.time_derivative.begin(),
                                 f.time_derivative.end());
    }
    return out;
  }

  ProductInvariants invariants(double t) const {
    ProductInvariants inv;
    inv.volume = 1.0;
    for (const auto& f : factors_) {
      const auto ci = f.invariants(t);
      inv.speeds.push_back(ci.speed);
      inv.lengths.push_back(ci.length);
      inv.volume *= ci.length;
    }
    return inv;
  }

  /// Full tensor grid for up to two factors; for more factors every factor
  /// runs through its grid simultaneously (theta_i, ..., theta_i).
  PdeResidual pde_residual(double t, std::size_t n_samples) const {
    if (n_samples < 8) throw DomainError("pde_residual needs at least 8 samples");
    PdeResidual acc;
    std::vector<double> params(factors_.size());
    auto theta = [&](std::size_t i) { return TorusCurveFamily::theta_at(i, n_samples); };
    if (factors_.size() == 1) {
      for (std::size_t i = 0; i < n_samples; ++i) {
        params[0] = theta(i);
        detail::accumulate_residual(evaluate(t, params), acc);
      }
    } else if (factors_.size() == 2) {
      for (std::size_t i = 0; i < n_samples; ++i)
        for (std::size_t j = 0; j < n_samples; ++j) {
          params[0] = theta(i);
          params[1] = theta(j);
          detail::accumulate_residual(evaluate(t, params), acc);
        }
    } else {
      for (std::size_t i = 0; i < n_samples; ++i) {
        std::fill(params.begin(), params.end(), theta(i));
        detail::accumulate_residual(evaluate(t, params), acc);
      }
    }
    return acc;
  }

  /// Grid mesh of a two-factor product (n_points per factor).
  GridMesh sample_mesh(double t, std::size_t n_points) const {
    if (factors_.size() != 2)
      throw DomainError("grid meshes are exported for two-factor products only");
    return product_mesh(factors_[0].sample(t, n_points), factors_[1].sample(t, n_points));
  }

  /// Single-factor product as a polyline.
  Polyline sample(double t, std::size_t n_points) const {
    if (factors_.size() != 1)
      throw DomainError("polyline export is for single-factor products; use sample_mesh");
    return factors_[0].sample(t, n_points);
  }

 private:
  std::vector<TorusCurveFamily> factors_;
};

inline ProductFamily make_product(std::vector<TorusCurveFamily> factors) {
  return ProductFamily(std::move(factors));
}

inline ProductFamily make_product(const std::vector<FrequencyVector>& factor_freqs) {
  std::vector<TorusCurveFamily> factors;
  for (const auto& f : factor_freqs) factors.emplace_back(f);
  return ProductFamily(std::move(factors));
}

}  // namespace acsf
