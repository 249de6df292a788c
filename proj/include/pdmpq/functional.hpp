#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pdmpq/model.hpp"
#include "pdmpq/quantizer.hpp"

namespace pdmpq {

/// Regularity constants of a cost functional, declared by its author and
/// consumed by the a-priori error bound.
struct CostMeta {
  double C_l = 0.0;         ///< sup of the running cost
  double lip_l_1 = 0.0;     ///< Lipschitz constant of l along the flow, in the state
  double lip_l_2 = 0.0;     ///< Lipschitz constant of l along the flow, in time
  double C_c = 0.0;         ///< sup of the boundary cost
  double lip_c_star = 0.0;  ///< Lipschitz constant of c in the time-shifted sense
};

/// Running cost plus boundary jump cost. `running_cost` and `running_integral`
/// describe the raw cost l; when `horizon_clip` is set the effective running
/// cost is l·1{clock <= t_f}, implemented by clipping the integration length
/// so that quadrature never straddles the discontinuity.
struct CostFunctional {
  std::string label;
  std::function<double(const State&)> running_cost;   ///< l, evaluated at a state
  std::function<double(const State&)> boundary_cost;  ///< c, evaluated at a boundary state
  /// Optional closed form of the raw integral: (x, u) -> integral of l along
  /// the flow from x over [0, u], without any horizon clipping.
  std::function<double(const State&, double)> running_integral;
  std::optional<double> horizon_clip;  ///< t_f; requires a clocked model
  double smoothing_A = 1.0;
  CostMeta meta;
};

/// Triangular approximation of the boundary-hit indicator: a tent of height 1
/// and half-width 1/A centered at the exit time. Zero when the exit time is
/// unbounded (the flow never reaches a boundary).
double delta_A(const ExitTime& tstar, double t, double A);

/// Integral of the effective running cost along the flow from x over [0, t],
/// using the closed form when available and composite Simpson otherwise.
double running_integral_L(const CostFunctional& fn, const PdmpModel& model, const State& x,
                          double t);

/// Pathwise cost of one chain step: F(x, s) = L(x, s) + c(flow at exit)·tent.
/// The running part clamps s to the exit time (quantized sojourns may
/// overshoot it); the tent handles overshoot natively.
double pathwise_F(const CostFunctional& fn, const PdmpModel& model, const State& x, double s);

/// Worst-case gap between the exact functional and its tent-smoothed
/// counterpart: n_jumps·C_c·C_lambda/A.
double smoothing_gap_bound(double n_jumps, double C_c, double C_lambda, double A);

/// Default smoothing steepness: half the reciprocal of the worst per-step
/// quantization distortion, clamped to [1, 1e6].
double default_smoothing_A(const QuantizationTree& tree);

/// Backward dynamic-programming table over a quantization tree.
struct ValueTable {
  std::string model_id;
  std::string functional_label;
  int n_steps = 0;
  /// values[k][i] is the value at node i of codebook k (nodes sharing a
  /// Z-component share their value).
  std::vector<std::vector<double>> values;
  double V0 = 0.0;
};

/// Quantized backward recursion: v_N = 0 and, stepping k = N-1 .. 0,
/// v_k(z) = sum over next-step nodes (z', s') of P(z -> (z', s'))·[F(z, s') +
/// v_{k+1}(z')], where P marginalizes the pair transition over nodes sharing
/// the conditioning Z-component. Returns the table with V0 at the start node.
ValueTable backward_evaluate(const QuantizationTree& tree, const CostFunctional& fn,
                             const PdmpModel& model);

}  // namespace pdmpq
