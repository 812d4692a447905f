// Tangent-flow diagnostics for torus curves: gamma_t / sqrt(-t) near t = -inf
// and t = 0.
#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "acsf/families.hpp"
#include "acsf/polyline.hpp"

namespace acsf {

struct TangentDiagnostics {
  double t = 0.0;
  std::vector<double> plane_amplitudes;  // r^(k_j^2) / sqrt(-t)
  std::size_t dominant_plane = 0;        // 0-based frequency index
  double circle_distance = 0.0;          // to the radius sqrt(2) circle in the dominant plane
  int winding = 0;
};

/// Sample of gamma_t / sqrt(-t).
inline Polyline rescaled_sample(const TorusCurveFamily& family, double t, std::size_t n_points) {
  if (!(t < 0.0)) throw DomainError("rescaling needs t < 0");
  return family.sample(t, n_points).scaled(1.0 / std::sqrt(-t));
}

inline std::vector<double> plane_amplitudes(const TorusCurveFamily& family, double t) {
  if (!(t < 0.0)) throw DomainError("rescaling needs t < 0");
  const double log_r = family.profile().log_radius(t);
  const double log_scale = 0.5 * std::log(-t);
  std::vector<double> amps;
  for (int k : family.freqs()) amps.push_back(std::exp(double(k) * k * log_r - log_scale));
  return amps;
}

inline TangentDiagnostics diagnostics(const TorusCurveFamily& family, double t,
                                      std::size_t n_points) {
  TangentDiagnostics d;
  d.t = t;
  d.plane_amplitudes = plane_amplitudes(family, t);
  for (std::size_t j = 1; j < d.plane_amplitudes.size(); ++j)
    if (d.plane_amplitudes[j] > d.plane_amplitudes[d.dominant_plane]) d.dominant_plane = j;
  const Polyline pl = rescaled_sample(family, t, n_points);
  const Plane plane = Plane::of_frequency(d.dominant_plane);
  d.circle_distance = distance_to_circle(pl, std::sqrt(2.0), plane);
  d.winding = winding_number(pl, plane);
  return d;
}

struct ConvergenceReport {
  std::vector<TangentDiagnostics> rows;
  // circle_distance shrinks as t decreases among rows with t <= -m/2 ...
  bool monotone_toward_minus_infinity = true;
  // ... and as t increases among rows with t > -m/2.
  bool monotone_toward_zero = true;
};

inline ConvergenceReport convergence_report(const TorusCurveFamily& family,
                                            std::span<const double> t_sequence,
                                            std::size_t n_points) {
  for (std::size_t i = 0; i < t_sequence.size(); ++i) {
    if (!(t_sequence[i] < 0.0)) throw DomainError("convergence report needs negative times");
    if (i > 0 && !(t_sequence[i] > t_sequence[i - 1]))
      throw DomainError("convergence report times must increase");
  }
  ConvergenceReport report;
  for (double t : t_sequence) report.rows.push_back(diagnostics(family, t, n_points));

  const double split = -0.5 * double(family.freqs().size());
  const TangentDiagnostics* prev_early = nullptr;
  const TangentDiagnostics* prev_late = nullptr;
  for (const auto& row : report.rows) {
    if (row.t <= split) {
      // Rows arrive in increasing t, so an earlier row must be closer.
      if (prev_early && !(prev_early->circle_distance < row.circle_distance))
        report.monotone_toward_minus_infinity = false;
      prev_early = &row;
    } else {
      if (prev_late && !(row.circle_distance < prev_late->circle_distance))
        report.monotone_toward_zero = false;
      prev_late = &row;
    }
  }
  return report;
}

}  // namespace acsf
