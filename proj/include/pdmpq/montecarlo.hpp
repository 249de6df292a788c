#pragma once

#include <cstdint>

#include "pdmpq/functional.hpp"
#include "pdmpq/model.hpp"

namespace pdmpq {

struct McEstimate {
  double mean = 0.0;
  double stderr_ = 0.0;
  long long n_sims = 0;
  std::uint64_t seed = 0;
};

/// Direct simulation of the jump-horizon functional: running cost integrated
/// over [0, T_N] plus boundary costs at boundary jumps, the hit read from the
/// sojourn sampler's exact flag.
McEstimate mc_functional(const PdmpModel& model, const State& x0, const CostFunctional& fn,
                         int n_jumps, long long n_sims, std::uint64_t seed);

/// Same expectation with the boundary indicator replaced by the tent of
/// steepness fn.smoothing_A, summed over every jump.
McEstimate mc_smoothed_functional(const PdmpModel& model, const State& x0,
                                  const CostFunctional& fn, int n_jumps, long long n_sims,
                                  std::uint64_t seed);

/// Deterministic-horizon functional: running cost truncated at t_f, boundary
/// costs counted only for jump epochs at or before t_f.
McEstimate mc_horizon_functional(const PdmpModel& model, const State& x0,
                                 const CostFunctional& fn, double t_f, int n_jumps,
                                 long long n_sims, std::uint64_t seed);

}  // namespace pdmpq
