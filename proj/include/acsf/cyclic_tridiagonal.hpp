// Periodic tridiagonal systems
//
//   lower[i] x[i-1] + diag[i] x[i] + upper[i] x[i+1] = rhs[i],  indices mod n,
//
// solved in O(n) by a Thomas sweep plus a Sherman-Morrison rank-one correction
// for the two corner entries.  The factorization is reused across right-hand
// sides (one per ambient coordinate).
#pragma once

#include <cmath>
#include <limits>
#include <cstddef>
#include <span>
#include <vector>

#include "acsf/radius.hpp"

namespace acsf {

class CyclicTridiagonal {
 public:
  CyclicTridiagonal(std::vector<double> lower, std::vector<double> diag, std::vector<double> upper)
      : n_(diag.size()), lower_(std::move(lower)), upper_(std::move(upper)) {
    if (n_ < 3) throw DomainError("cyclic tridiagonal system needs n >= 3");
    if (lower_.size() != n_ || upper_.size() != n_) throw DomainError("band size mismatch");

    // A = B + u v^T with u = (gamma, 0, ..., 0, upper[n-1]),
    // v = (1, 0, ..., 0, lower[0] / gamma).
    gamma_ = -diag[0];
    corner_low_ = upper_[n_ - 1];  // A[n-1][0]
    corner_high_ = lower_[0];      // A[0][n-1]
    diag_ = std::move(diag);
    diag_[0] -= gamma_;
    diag_[n_ - 1] -= corner_low_ * corner_high_ / gamma_;

    // Thomas forward elimination coefficients.
    c_prime_.resize(n_);
    denom_.resize(n_);
    double prev_c = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      const double a = i == 0 ? 0.0 : lower_[i];
      const double d = diag_[i] - a * prev_c;
      if (!std::isfinite(d) || std::abs(d) <= kPivotFloor * (std::abs(diag_[i]) + std::abs(a * prev_c)))
        throw SolverError("singular cyclic tridiagonal system");
      denom_[i] = d;
      prev_c = i + 1 < n_ ? upper_[i] / d : 0.0;
      c_prime_[i] = prev_c;
    }

    std::vector<double> u(n_, 0.0);
    u[0] = gamma_;
    u[n_ - 1] = corner_low_;
    z_ = thomas(u);
    const double vz = z_[0] + corner_high_ / gamma_ * z_[n_ - 1];
    denom_sm_ = 1.0 + vz;
    if (!std::isfinite(denom_sm_) || std::abs(denom_sm_) <= kPivotFloor * (1.0 + std::abs(vz)))
      throw SolverError("singular cyclic tridiagonal system (rank-one update)");
  }

  std::size_t size() const { return n_; }

  std::vector<double> solve(std::span<const double> rhs) const {
    if (rhs.size() != n_) throw DomainError("right-hand side size mismatch");
    std::vector<double> y = thomas(rhs);
    const double vy = y[0] + corner_high_ / gamma_ * y[n_ - 1];
    const double factor = vy / denom_sm_;
    for (std::size_t i = 0; i < n_; ++i) y[i] -= factor * z_[i];
    return y;
  }

 private:
  // Pivots this close to cancellation are treated as zero.
  static constexpr double kPivotFloor = 64 * std::numeric_limits<double>::epsilon();

  std::vector<double> thomas(std::span<const double> rhs) const {
    std::vector<double> x(n_);
    double prev = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      const double a = i == 0 ? 0.0 : lower_[i];
      prev = (rhs[i] - a * prev) / denom_[i];
      x[i] = prev;
    }
    for (std::size_t i = n_ - 1; i-- > 0;) x[i] -= c_prime_[i] * x[i + 1];
    return x;
  }

  std::size_t n_;
  std::vector<double> lower_, upper_, diag_;
  std::vector<double> c_prime_, denom_, z_;
  double gamma_ = 0.0, corner_low_ = 0.0, corner_high_ = 0.0, denom_sm_ = 1.0;
};

}  // namespace acsf
