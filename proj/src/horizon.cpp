#include "pdmpq/horizon.hpp"

#include <algorithm>
#include <cmath>

#include "pdmpq/errors.hpp"
#include "pdmpq/models.hpp"
#include "pdmpq/simulate.hpp"

namespace pdmpq {

namespace {

State strip_clock(const State& xt) {
  State x = xt;
  x.dim -= 1;
  return x;
}

}  // namespace

State augment_state(const State& x, double clock) {
  if (x.dim + 1 > kMaxCoords) throw ConfigError("augment: coordinate capacity exceeded");
  State xt = x;
  xt.dim = x.dim + 1;
  xt[x.dim] = clock;
  return xt;
}

PdmpModel augment(const PdmpModel& base) {
  if (base.has_clock()) throw ConfigError("augment: model already carries a clock");
  if (base.dim + 1 > kMaxCoords) throw ConfigError("augment: coordinate capacity exceeded");

  PdmpModel m;
  m.id = base.id + "+clock";
  m.n_modes = base.n_modes;
  m.dim = base.dim + 1;
  m.clock_index = base.dim;
  m.tstar_unbounded = base.tstar_unbounded;
  int ci = base.dim;
  m.flow = [f = base.flow, ci](const State& xt, double u) {
    State y = augment_state(f(strip_clock(xt), u), xt[ci] + u);
    return y;
  };
  m.jump_rate = [g = base.jump_rate](const State& xt) { return g(strip_clock(xt)); };
  m.exit_time = [g = base.exit_time](const State& xt) { return g(strip_clock(xt)); };
  m.kernel = [g = base.kernel, ci](const State& pre, Rng& rng) {
    return augment_state(g(strip_clock(pre), rng), pre[ci]);
  };
  if (base.cumulative_hazard)
    m.cumulative_hazard = [g = base.cumulative_hazard](const State& xt, double t) {
      return g(strip_clock(xt), t);
    };
  if (base.hazard_inverse)
    m.hazard_inverse = [g = base.hazard_inverse](const State& xt, double e) {
      return g(strip_clock(xt), e);
    };
  m.meta = base.meta;
  m.meta.lip_Q = std::max(base.meta.lip_Q, 1.0) * (1.0 + base.meta.lip_tstar);
  return m;
}

double envelope_value(const HorizonEnvelope& env, double t) {
  if (env.side == EnvelopeSide::Under)
    return std::clamp(env.B * (env.t_f - t), 0.0, 1.0);
  if (t < env.t_f) return 1.0;
  return std::clamp(1.0 - env.B * (t - env.t_f), 0.0, 1.0);
}

CostFunctional horizon_functional(const CostFunctional& base, const PdmpModel& model,
                                  double t_f, double B, EnvelopeSide side) {
  if (!model.has_clock())
    throw ConfigError("horizon_functional: model carries no clock coordinate");
  if (!(t_f > 0.0) || !(B > 0.0))
    throw ConfigError("horizon_functional: need t_f > 0 and B > 0");
  CostFunctional fn = base;
  fn.label = base.label + (side == EnvelopeSide::Under ? "|under" : "|over");
  fn.horizon_clip = t_f;
  if (base.boundary_cost) {
    HorizonEnvelope env{t_f, B, side};
    int ci = model.clock_index;
    fn.boundary_cost = [c = base.boundary_cost, env, ci](const State& x) {
      return c(x) * envelope_value(env, x[ci]);
    };
    fn.meta.lip_c_star = base.meta.lip_c_star +
                         B * base.meta.C_c * std::max(1.0, model.meta.lip_tstar);
  }
  return fn;
}

HorizonResult horizon_bounds(const QuantizationTree& tree, const PdmpModel& model,
                             const CostFunctional& base, double t_f, double A, double B) {
  CostFunctional under = horizon_functional(base, model, t_f, B, EnvelopeSide::Under);
  CostFunctional over = horizon_functional(base, model, t_f, B, EnvelopeSide::Over);
  under.smoothing_A = A;
  over.smoothing_A = A;

  HorizonResult res;
  res.lower = backward_evaluate(tree, under, model).V0;
  res.upper = backward_evaluate(tree, over, model).V0;
  res.A = A;
  res.B = B;
  res.n_steps = tree.n_steps;
  res.atom_caveat = static_cast<bool>(base.boundary_cost);

  BoundInputs in;
  in.n_steps = tree.n_steps;
  in.variant = BoundVariant::Horizon;
  in.A = A;
  in.B = B;
  // Base boundary meta: the Horizon constant set carries the envelope's
  // B-dependence in explicit terms, so the boosted lip_c_star would be
  // counted twice here.
  in.cost = base.meta;
  in.model = effective_meta(model, t_f);
  in.dist_z.reserve(tree.distortions.size());
  in.dist_s.reserve(tree.distortions.size());
  for (const StepDistortion& d : tree.distortions) {
    in.dist_z.push_back(d.z);
    in.dist_s.push_back(d.s);
  }
  double eps = epsilon_N(in).total;
  res.eps_lower = eps;
  res.eps_upper = eps;
  res.lower_with_error = res.lower - eps;
  res.upper_with_error = res.upper + eps;
  return res;
}

JumpCountEstimate estimate_N(const PdmpModel& model, const State& x0, double t_f,
                             double target_prob, long long n_sims, Rng& rng, int n_cap) {
  if (!(target_prob > 0.0) || !(target_prob < 1.0))
    throw ConfigError("estimate_N: target_prob must lie in (0, 1)");
  if (t_f < 0.0) throw ConfigError("estimate_N: negative horizon");
  if (n_sims < 1) throw ConfigError("estimate_N: need at least one path");
  if (n_cap < 0) throw ConfigError("estimate_N: negative cap");

  // hist[j + 1] counts paths whose largest k with T_k < t_f equals j, with
  // j = -1 (first bin) when even T_0 = 0 misses, which happens only at t_f = 0.
  std::vector<long long> hist(static_cast<std::size_t>(n_cap) + 2, 0);
  for (long long s = 0; s < n_sims; ++s) {
    State x = x0;
    double t = 0.0;
    int j = -1;
    for (int k = 0; k <= n_cap && t < t_f; ++k) {
      j = k;
      if (k == n_cap) break;
      SojournSample sj = sample_sojourn(model, x, rng);
      x = model.kernel(flow_at(model, x, sj.s), rng);
      t += sj.s;
    }
    ++hist[static_cast<std::size_t>(j + 1)];
  }

  JumpCountEstimate out;
  out.target_prob = target_prob;
  long long tail = n_sims;
  double prob = 1.0;
  for (int n = 0; n <= n_cap; ++n) {
    // after subtracting hist[0..n], tail counts paths with T_n < t_f
    tail -= hist[static_cast<std::size_t>(n)];
    prob = static_cast<double>(tail) / static_cast<double>(n_sims);
    if (prob <= target_prob) {
      out.n = n;
      out.p_at_n = prob;
      return out;
    }
  }
  out.n = n_cap;
  out.capped = true;
  out.p_at_n = prob;
  return out;
}

}  // namespace pdmpq
