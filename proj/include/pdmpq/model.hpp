#pragma once

#include <functional>
#include <string>

#include "pdmpq/rng.hpp"
#include "pdmpq/state.hpp"

namespace pdmpq {

/// Regularity constants of the local characteristics, supplied by each model
/// and consumed by the a-priori error bound. They are declared, not verified.
struct LipschitzMeta {
  double C_lambda = 0.0;    ///< sup of the jump rate
  double lip_lambda = 0.0;  ///< Lipschitz constant of the rate in the state
  double C_tstar = 0.0;     ///< sup of the deterministic exit time (ignored when unbounded)
  double lip_tstar = 0.0;   ///< Lipschitz constant of the exit time
  double lip_Q = 0.0;       ///< Lipschitz constant of the jump kernel
};

/// A piecewise-deterministic process given by its local characteristics:
/// deterministic flow, state-dependent jump rate, deterministic exit time and
/// a post-jump kernel acting on boundary or interior pre-jump points.
///
/// Optional closed forms (`cumulative_hazard`, `hazard_inverse`) short-circuit
/// the generic quadrature / bisection paths in the sojourn sampler.
struct PdmpModel {
  std::string id;
  int n_modes = 1;
  int dim = 1;

  /// Index of the running-clock coordinate, or -1 when the state carries no
  /// clock. Time-dependent costs and horizon truncation read this coordinate.
  int clock_index = -1;

  /// True when the flow never exits the domain from any state, so every jump
  /// is spontaneous and there is no finite sup of the exit time.
  bool tstar_unbounded = false;

  std::function<State(const State&, double)> flow;
  std::function<double(const State&)> jump_rate;
  std::function<ExitTime(const State&)> exit_time;
  std::function<State(const State&, Rng&)> kernel;

  /// Integral of the rate along the flow from x over [0, t]. Optional.
  std::function<double(const State&, double)> cumulative_hazard;
  /// Solution s of cumulative_hazard(x, s) = e. Optional.
  std::function<double(const State&, double)> hazard_inverse;

  LipschitzMeta meta;

  bool has_clock() const { return clock_index >= 0; }
  double clock_of(const State& x) const { return clock_index >= 0 ? x[clock_index] : 0.0; }
};

}  // namespace pdmpq
