// Derivative-free local maximization (Nelder-Mead simplex).
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <vector>

#include "acsf/radius.hpp"

namespace acsf {

struct NelderMeadOptions {
  double f_tolerance = 1e-13;  // relative spread of simplex values
  double x_tolerance = 1e-9;   // absolute simplex extent
  std::size_t max_evaluations = 20000;
};

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;
  std::size_t evaluations = 0;
  bool converged = false;
};

/// Maximizes f starting from the simplex {x0, x0 + steps[i] e_i}.
template <class F>
NelderMeadResult nelder_mead_maximize(F&& f, std::vector<double> x0, const std::vector<double>& steps,
                                      const NelderMeadOptions& opts = {}) {
  const std::size_t n = x0.size();
  if (n == 0 || steps.size() != n) throw DomainError("Nelder-Mead needs matching start and steps");

  // Minimize g = -f internally.
  std::vector<std::vector<double>> simplex(n + 1, x0);
  std::vector<double> g(n + 1);
  std::size_t evals = 0;
  auto eval = [&](const std::vector<double>& x) {
    ++evals;
    const double v = f(x);
    return std::isfinite(v) ? -v : std::numeric_limits<double>::infinity();
  };
  for (std::size_t i = 0; i < n; ++i) simplex[i + 1][i] += steps[i];
  for (std::size_t i = 0; i <= n; ++i) g[i] = eval(simplex[i]);

  std::vector<std::size_t> order(n + 1);
  std::vector<double> centroid(n), trial(n), trial2(n);
  bool converged = false;

  while (evals < opts.max_evaluations) {
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return g[a] < g[b]; });
    const std::size_t best = order.front(), worst = order.back(), second = order[n - 1];

    double extent = 0.0;
    for (std::size_t i = 0; i <= n; ++i)
      for (std::size_t c = 0; c < n; ++c)
        extent = std::max(extent, std::abs(simplex[i][c] - simplex[best][c]));
    const double spread = std::abs(g[worst] - g[best]);
    if (spread <= opts.f_tolerance * (std::abs(g[best]) + 1e-300) && extent <= opts.x_tolerance) {
      converged = true;
      break;
    }
    if (spread == 0.0 && extent <= opts.x_tolerance * 1e3) {
      converged = true;
      break;
    }

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t i = 0; i <= n; ++i)
      if (i != worst)
        for (std::size_t c = 0; c < n; ++c) centroid[c] += simplex[i][c] / double(n);

    auto blend = [&](double alpha, std::vector<double>& out) {
      for (std::size_t c = 0; c < n; ++c)
        out[c] = centroid[c] + alpha * (simplex[worst][c] - centroid[c]);
    };

    blend(-1.0, trial);
    const double g_reflect = eval(trial);
    if (g_reflect < g[best]) {
      blend(-2.0, trial2);
      const double g_expand = eval(trial2);
      if (g_expand < g_reflect) {
        simplex[worst] = trial2;
        g[worst] = g_expand;
      } else {
        simplex[worst] = trial;
        g[worst] = g_reflect;
      }
      continue;
    }
    if (g_reflect < g[second]) {
      simplex[worst] = trial;
      g[worst] = g_reflect;
      continue;
    }
    const bool outside = g_reflect < g[worst];
    blend(outside ? -0.5 : 0.5, trial2);
    const double g_contract = eval(trial2);
    if (g_contract < (outside ? g_reflect : g[worst])) {
      simplex[worst] = trial2;
      g[worst] = g_contract;
      continue;
    }
    // Shrink toward the best vertex.
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == best) continue;
      for (std::size_t c = 0; c < n; ++c)
        simplex[i][c] = simplex[best][c] + 0.5 * (simplex[i][c] - simplex[best][c]);
      g[i] = eval(simplex[i]);
    }
  }

  const auto best = static_cast<std::size_t>(std::min_element(g.begin(), g.end()) - g.begin());
  return {simplex[best], -g[best], evals, converged};
}

}  // namespace acsf
