#include "pdmpq/montecarlo.hpp"

#include <algorithm>
#include <cmath>

#include "pdmpq/errors.hpp"
#include "pdmpq/quadrature.hpp"
#include "pdmpq/rng.hpp"
#include "pdmpq/simulate.hpp"

namespace pdmpq {

namespace {

// Stream labels keep the three estimators decorrelated under a shared seed.
constexpr std::uint64_t kJumpLabel = 10;
constexpr std::uint64_t kSmoothLabel = 11;
constexpr std::uint64_t kHorizonLabel = 12;

struct Welford {
  long long n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double v) {
    ++n;
    double d = v - mean;
    mean += d / static_cast<double>(n);
    m2 += d * (v - mean);
  }

  double stderr_of_mean() const {
    if (n < 2) return 0.0;
    return std::sqrt(m2 / (static_cast<double>(n - 1) * static_cast<double>(n)));
  }
};

void check_args(int n_jumps, long long n_sims) {
  if (n_jumps < 0) throw ConfigError("monte carlo: negative jump count");
  if (n_sims < 1) throw ConfigError("monte carlo: need at least one simulation");
}

// Integral of the raw running cost (no horizon clipping) along the flow.
double raw_running_integral(const CostFunctional& fn, const PdmpModel& model, const State& x,
                            double u) {
  if (u <= 0.0) return 0.0;
  if (fn.running_integral) return fn.running_integral(x, u);
  if (!fn.running_cost) return 0.0;
  return integrate_simpson([&](double t) { return fn.running_cost(flow_at(model, x, t)); }, 0.0,
                           u);
}

}  // namespace

McEstimate mc_functional(const PdmpModel& model, const State& x0, const CostFunctional& fn,
                         int n_jumps, long long n_sims, std::uint64_t seed) {
  check_args(n_jumps, n_sims);
  Rng rng(derive_seed(seed, kJumpLabel));
  Welford acc;
  for (long long sim = 0; sim < n_sims; ++sim) {
    State x = x0;
    double total = 0.0;
    for (int k = 0; k < n_jumps; ++k) {
      SojournSample sj = sample_sojourn(model, x, rng);
      total += running_integral_L(fn, model, x, sj.s);
      State pre = flow_at(model, x, sj.s);
      if (sj.hit_boundary && fn.boundary_cost) total += fn.boundary_cost(pre);
      x = model.kernel(pre, rng);
    }
    acc.add(total);
  }
  return {acc.mean, acc.stderr_of_mean(), n_sims, seed};
}

McEstimate mc_smoothed_functional(const PdmpModel& model, const State& x0,
                                  const CostFunctional& fn, int n_jumps, long long n_sims,
                                  std::uint64_t seed) {
  check_args(n_jumps, n_sims);
  Rng rng(derive_seed(seed, kSmoothLabel));
  Welford acc;
  for (long long sim = 0; sim < n_sims; ++sim) {
    State x = x0;
    double total = 0.0;
    for (int k = 0; k < n_jumps; ++k) {
      SojournSample sj = sample_sojourn(model, x, rng);
      total += pathwise_F(fn, model, x, sj.s);
      State pre = flow_at(model, x, sj.s);
      x = model.kernel(pre, rng);
    }
    acc.add(total);
  }
  return {acc.mean, acc.stderr_of_mean(), n_sims, seed};
}

McEstimate mc_horizon_functional(const PdmpModel& model, const State& x0,
                                 const CostFunctional& fn, double t_f, int n_jumps,
                                 long long n_sims, std::uint64_t seed) {
  check_args(n_jumps, n_sims);
  if (!(t_f >= 0.0)) throw ConfigError("monte carlo: horizon must not be negative");
  Rng rng(derive_seed(seed, kHorizonLabel));
  Welford acc;
  for (long long sim = 0; sim < n_sims; ++sim) {
    State x = x0;
    double t = 0.0;
    double total = 0.0;
    for (int k = 0; k < n_jumps && t < t_f; ++k) {
      SojournSample sj = sample_sojourn(model, x, rng);
      total += raw_running_integral(fn, model, x, std::min(sj.s, t_f - t));
      State pre = flow_at(model, x, sj.s);
      t += sj.s;
      if (sj.hit_boundary && t <= t_f && fn.boundary_cost) total += fn.boundary_cost(pre);
      x = model.kernel(pre, rng);
    }
    acc.add(total);
  }
  return {acc.mean, acc.stderr_of_mean(), n_sims, seed};
}

}  // namespace pdmpq
