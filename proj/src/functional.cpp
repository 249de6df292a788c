#include "pdmpq/functional.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <string>
#include <unordered_map>

#include "pdmpq/errors.hpp"
#include "pdmpq/quadrature.hpp"
#include "pdmpq/simulate.hpp"

namespace pdmpq {

double delta_A(const ExitTime& tstar, double t, double A) {
  if (tstar.unbounded) return 0.0;
  return std::max(0.0, 1.0 - A * std::fabs(t - tstar.value));
}

double running_integral_L(const CostFunctional& fn, const PdmpModel& model, const State& x,
                          double t) {
  if (t <= 0.0) return 0.0;
  double u = t;
  if (fn.horizon_clip) {
    if (!model.has_clock())
      throw ConfigError("horizon-truncated running cost needs a clocked model");
    u = std::min(u, std::max(0.0, *fn.horizon_clip - model.clock_of(x)));
    if (u <= 0.0) return 0.0;
  }
  if (fn.running_integral) return fn.running_integral(x, u);
  if (!fn.running_cost) return 0.0;
  return integrate_simpson([&](double v) { return fn.running_cost(model.flow(x, v)); }, 0.0,
                           u);
}

double pathwise_F(const CostFunctional& fn, const PdmpModel& model, const State& x,
                  double s) {
  ExitTime ts = model.exit_time(x);
  double run_to = ts.unbounded ? s : std::min(s, ts.value);
  double f = running_integral_L(fn, model, x, run_to);
  if (fn.boundary_cost && !ts.unbounded) {
    double tent = delta_A(ts, s, fn.smoothing_A);
    if (tent > 0.0) f += fn.boundary_cost(flow_at(model, x, ts.value)) * tent;
  }
  return f;
}

double smoothing_gap_bound(double n_jumps, double C_c, double C_lambda, double A) {
  return n_jumps * C_c * C_lambda / A;
}

double default_smoothing_A(const QuantizationTree& tree) {
  double d = tree.max_pair_distortion();
  if (d <= 0.0) return 1e6;
  return std::clamp(1.0 / (2.0 * d), 1.0, 1e6);
}

namespace {

struct ZGrouping {
  std::vector<int> group_of_node;
  std::vector<State> rep;
  std::vector<std::vector<int>> members;
};

std::string state_key(const State& z) {
  std::string key;
  key.resize(sizeof(int) + sizeof(double) * static_cast<std::size_t>(z.dim));
  std::memcpy(key.data(), &z.mode, sizeof(int));
  std::memcpy(key.data() + sizeof(int), z.c.data(),
              sizeof(double) * static_cast<std::size_t>(z.dim));
  return key;
}

ZGrouping group_by_state(const Codebook& book) {
  ZGrouping g;
  g.group_of_node.resize(book.nodes.size());
  std::unordered_map<std::string, int> index;
  for (std::size_t i = 0; i < book.nodes.size(); ++i) {
    const State& z = book.nodes[i].z;
    auto [it, fresh] = index.try_emplace(state_key(z), static_cast<int>(g.rep.size()));
    if (fresh) {
      g.rep.push_back(z);
      g.members.emplace_back();
    }
    g.group_of_node[i] = it->second;
    g.members[static_cast<std::size_t>(it->second)].push_back(static_cast<int>(i));
  }
  return g;
}

}  // namespace

ValueTable backward_evaluate(const QuantizationTree& tree, const CostFunctional& fn,
                             const PdmpModel& model) {
  if (tree.model_id != model.id)
    throw GridMismatch("grid was trained for model '" + tree.model_id +
                       "', not for '" + model.id + "'");
  const int n = tree.n_steps;
  ValueTable table;
  table.model_id = model.id;
  table.functional_label = fn.label;
  table.n_steps = n;
  table.values.resize(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k <= n; ++k)
    table.values[static_cast<std::size_t>(k)].assign(
        tree.books[static_cast<std::size_t>(k)].nodes.size(), 0.0);

  std::vector<double> merged(1, 0.0);
  std::vector<int> touched;
  for (int k = n - 1; k >= 0; --k) {
    const Codebook& book = tree.books[static_cast<std::size_t>(k)];
    const Codebook& next = tree.books[static_cast<std::size_t>(k) + 1];
    const std::vector<TransitionRow>& rows = tree.transitions[static_cast<std::size_t>(k) + 1];
    const std::vector<double>& v_next = table.values[static_cast<std::size_t>(k) + 1];
    std::vector<double>& v_cur = table.values[static_cast<std::size_t>(k)];
    ZGrouping groups = group_by_state(book);

    merged.assign(next.nodes.size(), 0.0);
    for (std::size_t g = 0; g < groups.rep.size(); ++g) {
      const State& z = groups.rep[g];
      double w_sum = 0.0;
      touched.clear();
      for (int i : groups.members[g]) {
        double w = book.weights[static_cast<std::size_t>(i)];
        if (w <= 0.0 || !rows[static_cast<std::size_t>(i)].visited) continue;
        w_sum += w;
        for (const auto& [j, prob] : rows[static_cast<std::size_t>(i)].entries) {
          if (merged[static_cast<std::size_t>(j)] == 0.0) touched.push_back(j);
          merged[static_cast<std::size_t>(j)] += w * prob;
        }
      }
      double value = 0.0;
      if (w_sum > 0.0) {
        std::sort(touched.begin(), touched.end());
        ExitTime ts = model.exit_time(z);
        double cb = 0.0;
        if (fn.boundary_cost && !ts.unbounded)
          cb = fn.boundary_cost(flow_at(model, z, ts.value));
        for (int j : touched) {
          double prob = merged[static_cast<std::size_t>(j)] / w_sum;
          double s_next = next.nodes[static_cast<std::size_t>(j)].s;
          double run_to = ts.unbounded ? s_next : std::min(s_next, ts.value);
          double f = running_integral_L(fn, model, z, run_to);
          if (cb != 0.0) f += cb * delta_A(ts, s_next, fn.smoothing_A);
          value += prob * (f + v_next[static_cast<std::size_t>(j)]);
          merged[static_cast<std::size_t>(j)] = 0.0;
        }
      } else {
        for (int j : touched) merged[static_cast<std::size_t>(j)] = 0.0;
      }
      for (int i : groups.members[g]) v_cur[static_cast<std::size_t>(i)] = value;
    }
  }
  table.V0 = table.values[0].empty() ? 0.0 : table.values[0][0];
  return table;
}

}  // namespace pdmpq
