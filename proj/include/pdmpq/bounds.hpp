#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pdmpq/functional.hpp"
#include "pdmpq/model.hpp"

namespace pdmpq {

/// Which constant set the a-priori bound uses: the plain jump-horizon form,
/// its time-augmented form, or the deterministic-horizon form with envelope
/// boundary costs and an indicator-truncated running cost.
enum class BoundVariant { Plain, Augmented, Horizon };

/// Everything the a-priori error bound consumes. The model metadata must
/// already be the effective one: the augmented kernel constant when the
/// variant is Augmented/Horizon, and C_tstar replaced by the horizon when the
/// exit time is unbounded.
struct BoundInputs {
  int n_steps = 0;
  BoundVariant variant = BoundVariant::Plain;
  double A = 1.0;
  double B = 0.0;  ///< envelope steepness, Horizon variant only
  CostMeta cost;
  LipschitzMeta model;
  std::vector<double> dist_z;  ///< per-step state distortions, length n_steps + 1
  std::vector<double> dist_s;  ///< per-step sojourn distortions, length n_steps + 1
};

/// Lipschitz constants of the one-step cost F, by variant. f1/f2 are the
/// plain-variant constants; the primed fields are the regrouped coefficients
/// of the augmented and horizon forms (f1 total = f1_p + A·f1_pp + B·f1_ppp).
struct FConstants {
  double f1 = 0.0;
  double f2 = 0.0;
  double f1_p = 0.0;    ///< state coefficient, A- and B-free part
  double f1_pp = 0.0;   ///< state coefficient of A
  double f1_ppp = 0.0;  ///< state coefficient of B
  double f2_p = 0.0;    ///< sojourn coefficient, A-free part
  double f2_pp = 0.0;   ///< sojourn coefficient of A
};

/// Per-step propagated constants of the value functions, indexed like the
/// recursion (entry N corresponds to the terminal value, identically zero).
struct VConstants {
  double bound = 0.0;     ///< sup bound C_v
  double lip1 = 0.0;      ///< Lipschitz in the state at fixed time
  double lip2 = 0.0;      ///< Lipschitz in time along the flow
  double lip_star = 0.0;  ///< combined constant lip1 + [t*]·lip2
  double lip_free = 0.0;  ///< flow-free Lipschitz constant, bounded by K
};

/// The bound with every intermediate constant exposed for reporting.
struct BoundBreakdown {
  BoundVariant variant = BoundVariant::Plain;
  double e1 = 0.0;      ///< constant term of K (plain or augmented-meta form)
  double e1_pp = 0.0;   ///< B coefficient of K, Horizon variant
  double e2 = 0.0;      ///< A coefficient of K
  double e3 = 0.0;      ///< [w]_1 coefficient of K
  double e4 = 0.0;      ///< C_w coefficient of K
  FConstants f;
  std::vector<VConstants> v;  ///< length n_steps + 1, recursion-indexed
  double smoothing = 0.0;     ///< N·C_c·C_lambda/A
  double step_sum = 0.0;      ///< distortion-driven summands
  double total = 0.0;
};

/// Lipschitz constants of F per the selected variant.
FConstants lipschitz_F(const CostMeta& cost, const LipschitzMeta& model, double A, double B,
                       BoundVariant variant);

/// One application of the K functional to the constants of a value function
/// w: K = E1 (+ E1''·B) + E2·A + E3·[w]_1 + E4·C_w + [Q]·[w]_*.
double K_of(const CostMeta& cost, const LipschitzMeta& model, double A, double B,
            BoundVariant variant, double w_lip1, double w_bound, double w_lip_star);

/// Runs the constant recursions for all steps and assembles the breakdown
/// (without the distortion sum; epsilon_N completes it).
BoundBreakdown propagate_v_constants(const BoundInputs& in);

/// The full a-priori bound: distortion-weighted step sum plus smoothing term.
BoundBreakdown epsilon_N(const BoundInputs& in);

/// Renders the breakdown as a labeled text table.
std::string render_breakdown(const BoundBreakdown& b);

/// Renders the breakdown as CSV (constant,value rows).
std::string render_breakdown_csv(const BoundBreakdown& b);

}  // namespace pdmpq
