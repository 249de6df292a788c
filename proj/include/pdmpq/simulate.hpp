#pragma once

#include <vector>

#include "pdmpq/model.hpp"

namespace pdmpq {

/// One draw of the next inter-jump time from a given state.
struct SojournSample {
  double s = 0.0;
  bool hit_boundary = false;  ///< the jump was forced by the domain boundary
};

/// One step of the embedded post-jump chain.
struct ChainStep {
  State z;                    ///< post-jump state Z_k
  double s = 0.0;             ///< inter-jump time S_k (0 for the start point)
  double t = 0.0;             ///< jump epoch T_k = S_1 + ... + S_k
  bool hit_boundary = false;  ///< whether jump k was a boundary jump
};

/// Position of the flow after time t from x. Validates t against the exit
/// time and snaps onto the boundary when t is within rounding of it.
State flow_at(const PdmpModel& model, const State& x, double t);

/// Integral of the jump rate along the flow; closed form when the model has
/// one, composite Simpson otherwise.
double cumulative_hazard(const PdmpModel& model, const State& x, double t);

/// Inverse-transform draw of the inter-jump time: E ~ Exp(1) either exceeds
/// the total hazard accumulated up to the exit time, forcing a boundary jump
/// at t*(x), or is mapped through the inverse of the cumulative hazard.
SojournSample sample_sojourn(const PdmpModel& model, const State& x, Rng& rng);

/// Simulates the embedded chain (Z_k, S_k) for n_jumps jumps starting at x0.
/// Element 0 is the start point with s = t = 0.
std::vector<ChainStep> simulate_chain(const PdmpModel& model, const State& x0, int n_jumps,
                                      Rng& rng);

}  // namespace pdmpq
