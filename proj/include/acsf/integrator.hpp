// Curve shortening flow for closed polylines in R^N, independent of the exact
// families it is used to cross-check.
//
// SemiImplicit freezes the arclength Laplacian L at the current curve and
// solves (I - dt L) x_new = x_old per coordinate; Explicit takes
// x_new = x_old + dt L x_old under the usual dt <= h^2/2 restriction.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "acsf/cyclic_tridiagonal.hpp"
#include "acsf/polyline.hpp"

namespace acsf {

enum class Scheme { Explicit, SemiImplicit };

inline const char* to_string(Scheme s) {
  return s == Scheme::Explicit ? "explicit" : "semi-implicit";
}

struct IntegratorConfig {
  double dt = 1e-4;
  std::size_t resample_every = 50;  // 0 disables resampling
  Scheme scheme = Scheme::SemiImplicit;
  std::size_t max_steps = 10'000'000;
};

struct LengthSample {
  double time;
  double length;
};

struct FlowState {
  double time = 0.0;
  Polyline curve;
  std::size_t step_count = 0;
  std::vector<LengthSample> length_history;

  static FlowState start(Polyline curve, double t0) {
    if (!curve.closed()) throw DomainError("the integrator evolves closed polylines only");
    const double len = polyline_length(curve);
    return FlowState{t0, std::move(curve), 0, {{t0, len}}};
  }
};

namespace detail {

inline void check_segments(const Polyline& pl) {
  for (std::size_t i = 0; i < pl.size(); ++i)
    if (!(segment_length(pl, i) > 0.0))
      throw DomainError("degenerate segment at vertex " + std::to_string(i));
}

inline Polyline semi_implicit_update(const Polyline& pl, double dt) {
  const std::size_t n = pl.size();
  const std::size_t dim = pl.dim();
  std::vector<double> lower(n), diag(n), upper(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double a = segment_length(pl, pl.prev(i));
    const double b = segment_length(pl, i);
    const double w = 2.0 / (a + b);
    lower[i] = -dt * w / a;
    upper[i] = -dt * w / b;
    diag[i] = 1.0 - lower[i] - upper[i];
  }
  const CyclicTridiagonal system(std::move(lower), std::move(diag), std::move(upper));

  std::vector<double> coords(n * dim);
  std::vector<double> rhs(n);
  for (std::size_t c = 0; c < dim; ++c) {
    for (std::size_t i = 0; i < n; ++i) rhs[i] = pl(i, c);
    const auto x = system.solve(rhs);
    for (std::size_t i = 0; i < n; ++i) {
      if (!std::isfinite(x[i])) throw SolverError("linear solve produced a non-finite value");
      coords[i * dim + c] = x[i];
    }
  }
  return Polyline(dim, std::move(coords), true);
}

inline Polyline explicit_update(const Polyline& pl, double dt) {
  const double h = min_segment_length(pl);
  if (dt > 0.5 * h * h)
    throw DomainError("explicit step dt = " + std::to_string(dt) +
                      " violates the stability bound 0.5*h_min^2 = " + std::to_string(0.5 * h * h));
  const auto lap = discrete_laplacian(pl);
  Polyline out = pl;
  for (std::size_t i = 0; i < pl.size(); ++i)
    for (std::size_t c = 0; c < pl.dim(); ++c) out(i, c) += dt * lap[i][c];
  return out;
}

}  // namespace detail

/// Advances by cfg.dt; resamples to uniform arclength every cfg.resample_every steps.
inline FlowState step(FlowState state, const IntegratorConfig& cfg) {
  if (!(cfg.dt > 0.0)) throw DomainError("time step must be positive");
  if (!state.curve.closed()) throw DomainError("the integrator evolves closed polylines only");
  detail::check_segments(state.curve);

  Polyline next = cfg.scheme == Scheme::SemiImplicit
                      ? detail::semi_implicit_update(state.curve, cfg.dt)
                      : detail::explicit_update(state.curve, cfg.dt);
  state.step_count += 1;
  state.time += cfg.dt;
  if (cfg.resample_every > 0 && state.step_count % cfg.resample_every == 0)
    next = resample_uniform(next, next.size());

  const double len = polyline_length(next);
  const double prev_len = state.length_history.empty() ? std::numeric_limits<double>::infinity()
                                                       : state.length_history.back().length;
  if (!(len < prev_len))
    throw SolverError("length did not decrease at step " + std::to_string(state.step_count) +
                      " (" + std::to_string(prev_len) + " -> " + std::to_string(len) + ")");
  state.length_history.push_back({state.time, len});
  state.curve = std::move(next);
  return state;
}

/// Evolves from t0 to t1 in ceil((t1 - t0)/dt) equal steps (the step is shrunk
/// slightly so the final time is hit exactly).
inline FlowState evolve(const Polyline& initial, double t0, double t1, const IntegratorConfig& cfg) {
  if (!(cfg.dt > 0.0)) throw DomainError("time step must be positive");
  if (t1 < t0) throw DomainError("evolve needs t1 >= t0");
  FlowState state = FlowState::start(initial, t0);
  if (t1 == t0) return state;
  const double span = t1 - t0;
  const auto steps = static_cast<std::size_t>(std::ceil(span / cfg.dt - 1e-9));
  if (steps > cfg.max_steps)
    throw SolverError("evolve needs " + std::to_string(steps) + " steps, more than max_steps = " +
                      std::to_string(cfg.max_steps));
  IntegratorConfig local = cfg;
  local.dt = span / double(steps);
  for (std::size_t k = 0; k < steps; ++k) {
    state = step(std::move(state), local);
    // Keep the clock on the exact grid instead of accumulating dt.
    state.time = t0 + span * double(k + 1) / double(steps);
    state.length_history.back().time = state.time;
  }
  return state;
}

struct ExactComparison {
  double sup_distance = 0.0;
  double length_gap = 0.0;
};

/// Compares an evolved curve with an exact family at time t.  The exact curve is
/// sampled at `oversample` times the state's resolution.
template <class Family>
ExactComparison compare_to_exact(const FlowState& state, const Family& family, double t,
                                 std::size_t oversample = 8) {
  if (family.dim() != state.curve.dim())
    throw DomainError("dimension mismatch: curve in R^" + std::to_string(state.curve.dim()) +
                      ", family in R^" + std::to_string(family.dim()));
  if (oversample < 4) throw DomainError("exact curve must be sampled at least 4x finer");
  const Polyline exact = family.sample(t, oversample * state.curve.size());
  ExactComparison out;
  for (std::size_t i = 0; i < state.curve.size(); ++i)
    out.sup_distance =
        std::max(out.sup_distance, point_polyline_distance(state.curve.point(i), exact));
  out.length_gap = std::abs(polyline_length(state.curve) - family.invariants(t).length);
  return out;
}

}  // namespace acsf
