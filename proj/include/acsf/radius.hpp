// Radius profiles for the torus-curve and helix families.
//
// Both families are driven by a single scalar r(t) defined implicitly through a
// strictly increasing potential F:
//
//   torus:  F(r) = 1/2 * sum_j r^(2 k_j^2),             F(r(t)) = -t,     t < 0
//   helix:  F(r) = 1/2 * (2 ln r + sum_j r^(2 k_j^2)),  F(r(t)) = C - t,  t real
//
// Differentiating gives r' = -r / (sum_j k_j^2 r^(2 k_j^2))  (plus 1 in the
// denominator for the helix).  The solver works in u = ln r so that neither very
// large nor very small radii overflow.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace acsf {

/// Input outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Numerical procedure failed to produce a trustworthy answer.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Strictly increasing list of positive integers k_1 < ... < k_m.
class FrequencyVector {
 public:
  FrequencyVector(std::initializer_list<int> ks) : FrequencyVector(std::vector<int>(ks)) {}

  explicit FrequencyVector(std::vector<int> ks) : ks_(std::move(ks)) {
    if (ks_.empty()) throw DomainError("frequency vector must be non-empty");
    for (std::size_t j = 0; j < ks_.size(); ++j) {
      if (ks_[j] < 1) throw DomainError("frequencies must be positive integers");
      if (j > 0 && ks_[j] <= ks_[j - 1])
        throw DomainError("frequencies must be strictly increasing");
    }
  }

  std::size_t size() const { return ks_.size(); }
  int operator[](std::size_t j) const { return ks_[j]; }
  int front() const { return ks_.front(); }
  int back() const { return ks_.back(); }
  const std::vector<int>& values() const { return ks_; }

  auto begin() const { return ks_.begin(); }
  auto end() const { return ks_.end(); }

  std::string to_string() const {
    std::string s;
    for (std::size_t j = 0; j < ks_.size(); ++j) {
      if (j) s += ',';
      s += std::to_string(ks_[j]);
    }
    return s;
  }

  friend bool operator==(const FrequencyVector&, const FrequencyVector&) = default;

 private:
  std::vector<int> ks_;
};

enum class FamilyKind { Torus, Helix };

inline const char* to_string(FamilyKind kind) {
  return kind == FamilyKind::Torus ? "torus" : "helix";
}

namespace detail {

// ln(sum_i exp(x_i)), stable for any magnitude of x.
template <class Range>
double log_sum_exp(const Range& xs) {
  double hi = -std::numeric_limits<double>::infinity();
  for (double x : xs) hi = std::max(hi, x);
  if (!std::isfinite(hi)) return hi;
  double acc = 0.0;
  for (double x : xs) acc += std::exp(x - hi);
  return hi + std::log(acc);
}

// ln(sum_j k_j^2 r^(2 k_j^2)), plus the constant 1 inside the sum when with_one.
inline double log_weighted_power_sum(const FrequencyVector& freqs, double log_r, bool with_one) {
  std::vector<double> terms;
  terms.reserve(freqs.size() + 1);
  if (with_one) terms.push_back(0.0);
  for (int k : freqs) {
    const double k2 = double(k) * k;
    terms.push_back(2.0 * k2 * log_r + std::log(k2));
  }
  return log_sum_exp(terms);
}

// ln(sum_j r^(2 k_j^2))
inline double log_power_sum(const FrequencyVector& freqs, double log_r) {
  std::vector<double> terms;
  terms.reserve(freqs.size());
  for (int k : freqs) terms.push_back(2.0 * double(k) * k * log_r);
  return log_sum_exp(terms);
}

inline void require_positive(double r) {
  if (!(r > 0.0)) throw DomainError("radius must be positive, got " + std::to_string(r));
}

}  // namespace detail

/// F(r) for the given family.  May overflow to +inf for astronomically large r.
inline double potential(const FrequencyVector& freqs, double r, FamilyKind kind) {
  detail::require_positive(r);
  double sum = 0.0;
  for (int k : freqs) sum += std::pow(r, 2 * k * k);
  if (kind == FamilyKind::Helix) sum += 2.0 * std::log(r);
  return 0.5 * sum;
}

/// Right-hand side of the radius ODE, always negative.
inline double ode_rhs(const FrequencyVector& freqs, double r, FamilyKind kind) {
  detail::require_positive(r);
  const double log_r = std::log(r);
  const double log_denom =
      detail::log_weighted_power_sum(freqs, log_r, kind == FamilyKind::Helix);
  return -std::exp(log_r - log_denom);
}

/// Same as ode_rhs but returns ln|r'| given ln r; usable where r itself underflows.
inline double log_abs_ode_rhs(const FrequencyVector& freqs, double log_r, FamilyKind kind) {
  return log_r - detail::log_weighted_power_sum(freqs, log_r, kind == FamilyKind::Helix);
}

/// Realizes r(t) for a frequency vector by inverting the family potential.
class RadiusProfile {
 public:
  static constexpr double kDefaultTolerance = 1e-12;

  /// Torus profile (integration constant fixed to 0 so that r -> 0 as t -> 0).
  static RadiusProfile torus(FrequencyVector freqs, double tolerance = kDefaultTolerance) {
    return RadiusProfile(std::move(freqs), FamilyKind::Torus, 0.0, tolerance);
  }

  /// Helix profile; by default C = F(1) = m/2, which makes r(0) = 1.
  static RadiusProfile helix(FrequencyVector freqs, double tolerance = kDefaultTolerance) {
    const double c = 0.5 * double(freqs.size());
    return RadiusProfile(std::move(freqs), FamilyKind::Helix, c, tolerance);
  }

  static RadiusProfile helix_with_constant(FrequencyVector freqs, double helix_constant,
                                           double tolerance = kDefaultTolerance) {
    return RadiusProfile(std::move(freqs), FamilyKind::Helix, helix_constant, tolerance);
  }

  const FrequencyVector& freqs() const { return freqs_; }
  FamilyKind kind() const { return kind_; }
  double helix_constant() const { return helix_constant_; }
  double tolerance() const { return tolerance_; }
  std::size_t m() const { return freqs_.size(); }

  bool in_domain(double t) const {
    return kind_ == FamilyKind::Helix ? std::isfinite(t) : (std::isfinite(t) && t < 0.0);
  }

  /// Right-hand side of F(r(t)) = target.
  double target(double t) const {
    return kind_ == FamilyKind::Torus ? -t : helix_constant_ - t;
  }

  /// ln r(t).  Finite for every t in the domain even when r(t) itself would
  /// underflow (helix at large positive t).
  double log_radius(double t) const {
    if (!in_domain(t))
      throw DomainError(std::string(to_string(kind_)) + " radius undefined at t = " +
                        std::to_string(t));
    return kind_ == FamilyKind::Torus ? solve_torus(-t) : solve_helix(helix_constant_ - t);
  }

  double radius(double t) const { return std::exp(log_radius(t)); }

  /// F(r(t)) - target(t); zero up to solver accuracy.  Evaluated from ln r so
  /// that an underflowing helix radius still gives a meaningful value.
  double potential_residual(double t) const {
    const double u = log_radius(t);
    double f = 0.5 * std::exp(detail::log_power_sum(freqs_, u));
    if (kind_ == FamilyKind::Helix) f += u;
    return f - target(t);
  }

 private:
  RadiusProfile(FrequencyVector freqs, FamilyKind kind, double c, double tolerance)
      : freqs_(std::move(freqs)), kind_(kind), helix_constant_(c), tolerance_(tolerance) {
    if (!(tolerance_ > 0.0)) throw DomainError("solver tolerance must be positive");
    if (!std::isfinite(helix_constant_)) throw DomainError("helix constant must be finite");
  }

  // Solves g(u) = 0 for an increasing g with derivative dg.  The bracket is grown
  // geometrically from u = 0 (r = 1), narrowed by bisection, then polished by
  // Newton steps that are rejected whenever they leave the bracket.
  template <class G, class DG>
  double solve_monotone(G g, DG dg, double scale_hint) const {
    double lo = 0.0, hi = 0.0;
    const double g0 = g(0.0);
    if (g0 == 0.0) return 0.0;
    double step = 1.0;
    int expansions = 0;
    if (g0 < 0.0) {
      hi = step;
      while (g(hi) < 0.0) {
        lo = hi;
        step *= 2.0;
        hi += step;
        if (++expansions > 64)
          throw SolverError("radius bracket expansion failed upward (target scale " +
                            std::to_string(scale_hint) + ")");
      }
    } else {
      lo = -step;
      while (g(lo) > 0.0) {
        hi = lo;
        step *= 2.0;
        lo -= step;
        if (++expansions > 64)
          throw SolverError("radius bracket expansion failed downward (target scale " +
                            std::to_string(scale_hint) + ")");
      }
    }

    for (int i = 0; i < 200 && hi - lo > 1e-3; ++i) {
      const double mid = 0.5 * (lo + hi);
      (g(mid) < 0.0 ? lo : hi) = mid;
    }

    double u = 0.5 * (lo + hi);
    for (int i = 0; i < 100; ++i) {
      const double gu = g(u);
      if (gu == 0.0) return u;
      (gu < 0.0 ? lo : hi) = u;
      double next = u - gu / dg(u);
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
      const double delta = std::abs(next - u);
      u = next;
      // Relative step in u is the relative step in r.
      if (delta <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(u)) ||
          hi - lo <= std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(u)))
        return u;
    }
    // Accept if the bracket pins r to tolerance.
    const double r = std::exp(u);
    if (r * (hi - lo) <= tolerance_) return u;
    throw SolverError("radius Newton polish did not converge: bracket [" + std::to_string(lo) +
                      ", " + std::to_string(hi) + "] in ln r");
  }

  double solve_torus(double target) const {
    // sum_j r^(2 k_j^2) = 2 * target, in log form.
    const double log_rhs = std::log(2.0 * target);
    auto g = [&](double u) { return detail::log_power_sum(freqs_, u) - log_rhs; };
    auto dg = [&](double u) {
      return std::exp(detail::log_weighted_power_sum(freqs_, u, false) -
                      detail::log_power_sum(freqs_, u)) *
             2.0;
    };
    // Exact hit at r = 1 (t = -m/2) is handled by direct comparison.
    if (0.5 * double(freqs_.size()) == target) return 0.0;
    return solve_monotone(g, dg, target);
  }

  double solve_helix(double target) const {
    auto g = [&](double u) {
      double s = 0.0;
      for (int k : freqs_) s += std::exp(2.0 * double(k) * k * u);
      return u + 0.5 * s - target;
    };
    auto dg = [&](double u) {
      return std::exp(detail::log_weighted_power_sum(freqs_, u, true));
    };
    return solve_monotone(g, dg, target);
  }

  FrequencyVector freqs_;
  FamilyKind kind_;
  double helix_constant_;
  double tolerance_;
};

/// r(t) for the profile; throws DomainError outside the profile's time domain.
inline double solve_radius(const RadiusProfile& profile, double t) { return profile.radius(t); }

/// |central difference of r at t - ode_rhs(r(t))|.
inline double ode_residual(const RadiusProfile& profile, double t, double h) {
  if (!(h > 0.0)) throw DomainError("difference step must be positive");
  const double r_plus = profile.radius(t + h);
  const double r_minus = profile.radius(t - h);
  const double r = profile.radius(t);
  return std::abs((r_plus - r_minus) / (2.0 * h) - ode_rhs(profile.freqs(), r, profile.kind()));
}

}  // namespace acsf
