#pragma once

#include <optional>

#include "pdmpq/bounds.hpp"
#include "pdmpq/functional.hpp"
#include "pdmpq/model.hpp"
#include "pdmpq/quantizer.hpp"

namespace pdmpq {

/// Appends a clock coordinate to a model's state. The clock advances with the
/// flow, survives jumps untouched, and never influences the rate or the exit
/// time. The kernel constant grows to ([Q] max 1)·(1 + [t*]).
PdmpModel augment(const PdmpModel& base);

/// Lifts a point of the base state space into the augmented one.
State augment_state(const State& x, double clock);

enum class EnvelopeSide { Under, Over };

/// Lipschitz ramp bracketing the indicator of [0, t_f]: Under vanishes at t_f
/// (support ends there), Over stays 1 through t_f and vanishes at t_f + 1/B.
struct HorizonEnvelope {
  double t_f = 0.0;
  double B = 1.0;
  EnvelopeSide side = EnvelopeSide::Under;
};

double envelope_value(const HorizonEnvelope& env, double t);

/// Wraps a time-dependent functional for a deterministic horizon: the running
/// cost gains the 1{clock <= t_f} truncation, the boundary cost is multiplied
/// by the chosen envelope read at the jump epoch, and the boundary Lipschitz
/// metadata grows by B·C_c·(1 max [t*]).
CostFunctional horizon_functional(const CostFunctional& base, const PdmpModel& model,
                                  double t_f, double B, EnvelopeSide side);

/// Two-sided estimate of a horizon functional plus its a-priori bounds.
struct HorizonResult {
  double lower = 0.0;
  double upper = 0.0;
  double eps_lower = 0.0;
  double eps_upper = 0.0;
  double lower_with_error = 0.0;  ///< lower - eps_lower
  double upper_with_error = 0.0;  ///< upper + eps_upper
  double A = 0.0;
  double B = 0.0;
  int n_steps = 0;
  std::optional<double> mc_reference;
  /// Lower-envelope convergence holds for almost every horizon; a horizon
  /// sitting on an atom of a jump-time law is not detected.
  bool atom_caveat = true;
};

/// Evaluates the Under and Over envelope functionals on one tree and attaches
/// the horizon-variant a-priori bounds. The model must be clocked and the
/// tree trained from a zero-clock start point.
HorizonResult horizon_bounds(const QuantizationTree& tree, const PdmpModel& model,
                             const CostFunctional& base, double t_f, double A, double B);

/// Smallest N with empirical P(T_N < t_f) at or below target_prob.
struct JumpCountEstimate {
  int n = 0;
  bool capped = false;      ///< cap reached with the target still unmet
  double p_at_n = 0.0;      ///< empirical exceedance probability at n
  double target_prob = 0.0;
};

JumpCountEstimate estimate_N(const PdmpModel& model, const State& x0, double t_f,
                             double target_prob, long long n_sims, Rng& rng, int n_cap = 200);

}  // namespace pdmpq
