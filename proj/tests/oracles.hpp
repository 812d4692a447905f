// Reference computations that share no code with the library.
#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle {

/// Root of sum r^(2k^2) = -2t by plain bisection in long double.
inline double torus_radius(const std::vector<int>& ks, double t) {
  auto g = [&](long double r) {
    long double s = 0;
    for (int k : ks) s += std::pow(r, 2.0L * k * k);
    return s + 2.0L * t;
  };
  long double lo = 0, hi = 1;
  while (g(hi) < 0) hi *= 2;
  for (int i = 0; i < 200; ++i) {
    const long double mid = 0.5L * (lo + hi);
    (g(mid) < 0 ? lo : hi) = mid;
  }
  return double(0.5L * (lo + hi));
}

/// Root of ln r + 1/2 sum r^(2k^2) = c - t (helix potential).
inline double helix_radius(const std::vector<int>& ks, double c, double t) {
  auto g = [&](long double r) {
    long double s = 0;
    for (int k : ks) s += std::pow(r, 2.0L * k * k);
    return std::log(r) + 0.5L * s - (c - t);
  };
  long double lo = 1, hi = 1;
  while (g(lo) > 0) lo /= 2;
  while (g(hi) < 0) hi *= 2;
  for (int i = 0; i < 200; ++i) {
    const long double mid = 0.5L * (lo + hi);
    (g(mid) < 0 ? lo : hi) = mid;
  }
  return double(0.5L * (lo + hi));
}

/// Golden-section maximum of a unimodal function on [a, b].
inline double golden_max(const std::function<double(double)>& f, double a, double b,
                         double* argmax = nullptr) {
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - g * (b - a), d = a + g * (b - a);
  for (int i = 0; i < 200; ++i) {
    if (f(c) > f(d))
      b = d;
    else
      a = c;
    c = b - g * (b - a);
    d = a + g * (b - a);
  }
  if (argmax) *argmax = 0.5 * (a + b);
  return f(0.5 * (a + b));
}

/// lambda(S^1) as the sup over s of s sqrt(pi) exp(-s^2/4), the Gaussian weight of
/// a circle of radius s.
inline double circle_entropy(double* best_scale = nullptr) {
  auto f = [](double s) { return s * std::sqrt(std::numbers::pi) * std::exp(-s * s / 4.0); };
  return golden_max(f, 0.1, 10.0, best_scale);
}

/// Gaussian weight of a straight segment of length L lying on a line at distance d
/// from the origin, whose foot point splits it at offset a from one end; by brute
/// force midpoint summation.
inline double segment_f(double length, double offset, double d, int n = 20000) {
  double sum = 0.0;
  const double h = length / n;
  for (int i = 0; i < n; ++i) {
    const double x = -offset + (i + 0.5) * h;
    sum += std::exp(-(x * x + d * d) / 4.0) * h;
  }
  return sum / std::sqrt(4.0 * std::numbers::pi);
}

/// Brute-force 2-parameter scan of the segment entropy (length and offset of the
/// dilated segment; the perpendicular distance is optimally 0).
inline double segment_entropy_scan(double length) {
  double best = 0.0;
  for (int i = 0; i <= 200; ++i) {
    const double scaled = length * std::pow(10.0, 7.0 * i / 200.0);  // up to 1e7 x
    if (scaled > 200.0) break;
    for (int j = 0; j <= 40; ++j) best = std::max(best, segment_f(scaled, scaled * j / 40.0, 0.0, 4000));
  }
  return best;
}

}  // namespace oracle
