#include "pdmpq/quantizer.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <string>
#include <unordered_map>
#include <unordered_set>

#include "pdmpq/errors.hpp"

namespace pdmpq {

namespace {

std::string node_key(const State& z, double s) {
  std::string key;
  key.resize(sizeof(int) + sizeof(double) * static_cast<std::size_t>(z.dim + 1));
  char* out = key.data();
  std::memcpy(out, &z.mode, sizeof(int));
  out += sizeof(int);
  std::memcpy(out, z.c.data(), sizeof(double) * static_cast<std::size_t>(z.dim));
  out += sizeof(double) * static_cast<std::size_t>(z.dim);
  std::memcpy(out, &s, sizeof(double));
  return key;
}

double pow_abs(double d, double p) {
  if (p == 2.0) return d * d;
  if (p == 1.0) return std::fabs(d);
  return std::pow(std::fabs(d), p);
}

/// Power-sum distance (no root), monotone in the true distance, with an early
/// exit once the partial sum cannot beat `best`.
double pair_power_sum(const State& z, double s, const PairNode& node, double p, double best) {
  double acc = 0.0;
  for (int i = 0; i < z.dim; ++i) {
    acc += pow_abs(z[i] - node.z[i], p);
    if (acc >= best) return acc;
  }
  acc += pow_abs(s - node.s, p);
  return acc;
}

int sign_of(double d) { return (d > 0.0) - (d < 0.0); }

}  // namespace

void Codebook::rebuild_mode_index() {
  mode_index.clear();
  for (int i = 0; i < static_cast<int>(nodes.size()); ++i)
    mode_index[nodes[static_cast<std::size_t>(i)].z.mode].push_back(i);
}

double pair_distance(const State& z, double s, const PairNode& node, double p) {
  double acc = pair_power_sum(z, s, node, p, std::numeric_limits<double>::infinity());
  return p == 1.0 ? acc : std::pow(acc, 1.0 / p);
}

int project(const Codebook& book, const State& z, double s, double p) {
  auto it = book.mode_index.find(z.mode);
  if (it == book.mode_index.end() || it->second.empty())
    throw ModeNotRepresented("no codebook node carries mode " + std::to_string(z.mode) +
                             "; enlarge the training set or the grid");
  double best = std::numeric_limits<double>::infinity();
  int best_i = -1;
  for (int i : it->second) {
    double d = pair_power_sum(z, s, book.nodes[static_cast<std::size_t>(i)], p, best);
    if (d < best) {
      best = d;
      best_i = i;
    }
  }
  return best_i;
}

double QuantizationTree::max_pair_distortion() const {
  double m = 0.0;
  for (const StepDistortion& d : distortions) m = std::max(m, d.pair);
  return m;
}

QuantizationTree train(const PdmpModel& model, const State& x0, int n_steps,
                       const ClvqConfig& cfg) {
  if (cfg.grid_size < 1) throw ConfigError("train: grid_size must be at least 1");
  if (cfg.norm_p < 1.0) throw ConfigError("train: norm_p must be at least 1");
  if (cfg.training_samples < 10LL * cfg.grid_size)
    throw ConfigError("train: training_samples must be at least 10x grid_size");
  if (n_steps < 0) throw ConfigError("train: negative step count");

  const double p = cfg.norm_p;
  const double lr_b = cfg.lr_b < 0.0 ? static_cast<double>(cfg.grid_size) : cfg.lr_b;
  const std::size_t n_books = static_cast<std::size_t>(n_steps) + 1;

  QuantizationTree tree;
  tree.model_id = model.id;
  tree.x0 = x0;
  tree.n_steps = n_steps;
  tree.grid_size = cfg.grid_size;
  tree.norm_p = p;
  tree.seed = cfg.seed;
  tree.training_samples = cfg.training_samples;
  tree.books.resize(n_books);
  tree.transitions.resize(n_books);
  tree.distortions.resize(n_books);

  tree.books[0].nodes.push_back({x0, 0.0});

  // Initialization: fill each codebook with distinct draws; a bounded number
  // of extra trajectories covers duplicate-heavy steps, after which any step
  // still short of the target is padded with jittered copies (steps whose law
  // is a single atom collapse to one node instead).
  std::vector<std::unordered_set<std::string>> seen(n_books);
  if (n_steps > 0) {
    Rng rng_init(derive_seed(cfg.seed, 1));
    const int target = cfg.grid_size;
    auto all_full = [&] {
      for (std::size_t k = 1; k < n_books; ++k)
        if (static_cast<int>(tree.books[k].nodes.size()) < target) return false;
      return true;
    };
    long long budget = static_cast<long long>(target) + 100;
    for (long long d = 0; d < budget && !all_full(); ++d) {
      std::vector<ChainStep> chain = simulate_chain(model, x0, n_steps, rng_init);
      for (std::size_t k = 1; k < n_books; ++k) {
        Codebook& book = tree.books[k];
        if (static_cast<int>(book.nodes.size()) >= target) continue;
        const ChainStep& st = chain[k];
        if (seen[k].insert(node_key(st.z, st.s)).second) book.nodes.push_back({st.z, st.s});
      }
    }
    for (std::size_t k = 1; k < n_books; ++k) {
      Codebook& book = tree.books[k];
      if (book.nodes.size() <= 1) continue;
      long long guard = 10LL * target;
      std::size_t src = 0;
      double scale = 1e-9;
      while (static_cast<int>(book.nodes.size()) < target && guard-- > 0) {
        PairNode copy = book.nodes[src % book.nodes.size()];
        copy.z[0] += scale * static_cast<double>(1 + src / book.nodes.size());
        if (seen[k].insert(node_key(copy.z, copy.s)).second) book.nodes.push_back(copy);
        ++src;
      }
    }
  }
  for (Codebook& book : tree.books) book.rebuild_mode_index();

  // Competitive refinement: the sample's nearest node moves toward it with a
  // per-node decaying rate.
  if (n_steps > 0) {
    Rng rng_train(derive_seed(cfg.seed, 2));
    std::vector<std::vector<long long>> wins(n_books);
    for (std::size_t k = 0; k < n_books; ++k) wins[k].assign(tree.books[k].nodes.size(), 0);
    for (long long s = 0; s < cfg.training_samples; ++s) {
      std::vector<ChainStep> chain = simulate_chain(model, x0, n_steps, rng_train);
      for (std::size_t k = 1; k < n_books; ++k) {
        Codebook& book = tree.books[k];
        if (book.nodes.empty()) continue;
        const ChainStep& st = chain[k];
        int i = project(book, st.z, st.s, p);
        double rate = cfg.lr_a / (lr_b + static_cast<double>(wins[k][static_cast<std::size_t>(i)]));
        ++wins[k][static_cast<std::size_t>(i)];
        PairNode& node = book.nodes[static_cast<std::size_t>(i)];
        if (p == 1.0) {
          for (int d = 0; d < st.z.dim; ++d) node.z[d] += rate * sign_of(st.z[d] - node.z[d]);
          node.s += rate * sign_of(st.s - node.s);
        } else {
          for (int d = 0; d < st.z.dim; ++d) node.z[d] += rate * (st.z[d] - node.z[d]);
          node.s += rate * (st.s - node.s);
        }
      }
    }
  }

  // Estimation pass on an independent batch: empirical weights, pairwise
  // transition counts, and per-step distortions.
  {
    Rng rng_est(derive_seed(cfg.seed, 3));
    std::vector<std::vector<long long>> counts(n_books);
    for (std::size_t k = 0; k < n_books; ++k) counts[k].assign(tree.books[k].nodes.size(), 0);
    std::vector<std::unordered_map<long long, long long>> pair_counts(n_books);
    std::vector<StepDistortion> sums(n_books);
    const long long n = n_steps > 0 ? cfg.training_samples : 0;
    for (long long s = 0; s < n; ++s) {
      std::vector<ChainStep> chain = simulate_chain(model, x0, n_steps, rng_est);
      int prev = 0;
      for (std::size_t k = 0; k < n_books; ++k) {
        const ChainStep& st = chain[k];
        const Codebook& book = tree.books[k];
        int i = project(book, st.z, st.s, p);
        ++counts[k][static_cast<std::size_t>(i)];
        const PairNode& node = book.nodes[static_cast<std::size_t>(i)];
        sums[k].pair += pow_abs(pair_distance(st.z, st.s, node, p), p);
        sums[k].z += pow_abs(coord_distance(st.z, node.z, p), p);
        sums[k].s += pow_abs(st.s - node.s, p);
        if (k > 0) {
          long long key = static_cast<long long>(prev) *
                              static_cast<long long>(book.nodes.size()) +
                          i;
          ++pair_counts[k][key];
        }
        prev = i;
      }
    }
    for (std::size_t k = 0; k < n_books; ++k) {
      Codebook& book = tree.books[k];
      book.weights.assign(book.nodes.size(), 0.0);
      if (n > 0) {
        for (std::size_t i = 0; i < book.nodes.size(); ++i)
          book.weights[i] = static_cast<double>(counts[k][i]) / static_cast<double>(n);
        tree.distortions[k].pair = std::pow(sums[k].pair / static_cast<double>(n), 1.0 / p);
        tree.distortions[k].z = std::pow(sums[k].z / static_cast<double>(n), 1.0 / p);
        tree.distortions[k].s = std::pow(sums[k].s / static_cast<double>(n), 1.0 / p);
      } else if (!book.nodes.empty()) {
        book.weights[0] = 1.0;
      }
      if (k == 0) continue;
      std::size_t n_prev = tree.books[k - 1].nodes.size();
      std::size_t n_cur = book.nodes.size();
      tree.transitions[k].assign(n_prev, TransitionRow{});
      std::vector<std::pair<long long, long long>> flat(pair_counts[k].begin(),
                                                        pair_counts[k].end());
      std::sort(flat.begin(), flat.end());
      for (const auto& [key, cnt] : flat) {
        std::size_t i = static_cast<std::size_t>(key / static_cast<long long>(n_cur));
        int j = static_cast<int>(key % static_cast<long long>(n_cur));
        TransitionRow& row = tree.transitions[k][i];
        row.visited = true;
        row.entries.emplace_back(
            j, static_cast<double>(cnt) / static_cast<double>(counts[k - 1][i]));
      }
    }
  }
  return tree;
}

std::vector<StepDistortion> estimate_distortion(const QuantizationTree& tree,
                                                const PdmpModel& model, const State& x0,
                                                long long n_eval, Rng& rng) {
  if (n_eval < 1) throw ConfigError("estimate_distortion: need at least one trajectory");
  const double p = tree.norm_p;
  std::vector<StepDistortion> sums(tree.books.size());
  for (long long s = 0; s < n_eval; ++s) {
    std::vector<ChainStep> chain = simulate_chain(model, x0, tree.n_steps, rng);
    for (std::size_t k = 0; k < tree.books.size(); ++k) {
      const ChainStep& st = chain[k];
      int i = project(tree.books[k], st.z, st.s, p);
      const PairNode& node = tree.books[k].nodes[static_cast<std::size_t>(i)];
      sums[k].pair += pow_abs(pair_distance(st.z, st.s, node, p), p);
      sums[k].z += pow_abs(coord_distance(st.z, node.z, p), p);
      sums[k].s += pow_abs(st.s - node.s, p);
    }
  }
  for (StepDistortion& d : sums) {
    d.pair = std::pow(d.pair / static_cast<double>(n_eval), 1.0 / p);
    d.z = std::pow(d.z / static_cast<double>(n_eval), 1.0 / p);
    d.s = std::pow(d.s / static_cast<double>(n_eval), 1.0 / p);
  }
  return sums;
}

}  // namespace pdmpq
