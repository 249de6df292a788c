#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "pdmpq/model.hpp"
#include "pdmpq/simulate.hpp"

namespace pdmpq {

/// Competitive-learning vector quantization settings. Learning rate for a
/// winning node is lr_a / (lr_b + wins so far); lr_b < 0 selects the default
/// lr_b = grid_size.
struct ClvqConfig {
  int grid_size = 100;
  long long training_samples = 100000;
  double lr_a = 1.0;
  double lr_b = -1.0;
  double norm_p = 2.0;
  std::uint64_t seed = 1;
};

/// One codebook point: a post-jump state paired with the inter-jump time that
/// led to it.
struct PairNode {
  State z;
  double s = 0.0;
};

/// Quantization grid for one chain step. Nodes are indexed globally; the
/// per-mode index lists drive nearest-neighbour search, since points in
/// different modes are never comparable.
struct Codebook {
  std::vector<PairNode> nodes;
  std::vector<double> weights;
  std::map<int, std::vector<int>> mode_index;

  void rebuild_mode_index();
};

/// One row of an empirical transition matrix, stored sparsely. `visited`
/// distinguishes a genuinely unvisited source node (excluded from evaluation)
/// from a visited one.
struct TransitionRow {
  bool visited = false;
  std::vector<std::pair<int, double>> entries;  ///< (target node, probability), ascending
};

/// Per-step quantization error: p-norm distortion of the pair and of its two
/// components separately.
struct StepDistortion {
  double pair = 0.0;
  double z = 0.0;
  double s = 0.0;
};

/// Trained marginal quantization of the embedded chain: one codebook per
/// step, empirical weights, empirical step-to-step transition rows, and
/// estimated distortions.
struct QuantizationTree {
  std::string model_id;
  State x0;
  int n_steps = 0;
  int grid_size = 0;
  double norm_p = 2.0;
  std::uint64_t seed = 0;
  long long training_samples = 0;
  std::vector<Codebook> books;                        ///< size n_steps + 1
  std::vector<std::vector<TransitionRow>> transitions;  ///< [k] maps step k-1 nodes; [0] empty
  std::vector<StepDistortion> distortions;            ///< size n_steps + 1

  double max_pair_distortion() const;
};

/// p-norm distance between a chain point and a node of the same mode, over
/// the concatenated (coordinates, sojourn) vector.
double pair_distance(const State& z, double s, const PairNode& node, double p);

/// Index of the nearest node with the same mode as z, ties broken by the
/// lowest index. Throws ModeNotRepresented when the codebook has no node in
/// that mode.
int project(const Codebook& book, const State& z, double s, double p);

/// Trains the full tree: initializes each codebook from distinct simulated
/// draws, refines by competitive updates over fresh trajectories, then
/// estimates weights, transitions and distortions on an independent batch.
QuantizationTree train(const PdmpModel& model, const State& x0, int n_steps,
                       const ClvqConfig& cfg);

/// Re-estimates per-step distortions on n_eval fresh trajectories.
std::vector<StepDistortion> estimate_distortion(const QuantizationTree& tree,
                                                const PdmpModel& model, const State& x0,
                                                long long n_eval, Rng& rng);

}  // namespace pdmpq
