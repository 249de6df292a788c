#include "pdmpq/simulate.hpp"

#include <cmath>

#include "pdmpq/errors.hpp"
#include "pdmpq/quadrature.hpp"

namespace pdmpq {

namespace {

constexpr int kBisectCap = 200;

double bisect_hazard(const PdmpModel& model, const State& x, double target, double lo,
                     double hi) {
  double tol = 1e-10 * hi;
  for (int it = 0; it < kBisectCap; ++it) {
    double mid = 0.5 * (lo + hi);
    if (cumulative_hazard(model, x, mid) < target)
      lo = mid;
    else
      hi = mid;
    if (hi - lo <= tol) return 0.5 * (lo + hi);
  }
  return 0.5 * (lo + hi);
}

}  // namespace

State flow_at(const PdmpModel& model, const State& x, double t) {
  if (t < 0.0) throw NumericFailure("flow_at: negative time");
  ExitTime ts = model.exit_time(x);
  if (!ts.unbounded) {
    double slack = 1e-9 * std::max(1.0, ts.value);
    if (t > ts.value + slack) throw NumericFailure("flow_at: time past the exit time");
    if (t > ts.value || std::fabs(t - ts.value) <= 1e-12 * std::max(1.0, ts.value))
      t = ts.value;
  }
  return model.flow(x, t);
}

double cumulative_hazard(const PdmpModel& model, const State& x, double t) {
  if (t <= 0.0) return 0.0;
  if (model.cumulative_hazard) return model.cumulative_hazard(x, t);
  return integrate_simpson([&](double s) { return model.jump_rate(model.flow(x, s)); }, 0.0,
                           t);
}

SojournSample sample_sojourn(const PdmpModel& model, const State& x, Rng& rng) {
  double e = rng.exponential();
  ExitTime ts = model.exit_time(x);
  if (!ts.unbounded) {
    double total = cumulative_hazard(model, x, ts.value);
    if (e >= total) return {ts.value, true};
    if (model.hazard_inverse) return {model.hazard_inverse(x, e), false};
    return {bisect_hazard(model, x, e, 0.0, ts.value), false};
  }
  if (model.hazard_inverse) return {model.hazard_inverse(x, e), false};
  double hi = 1.0;
  int grow = 0;
  while (cumulative_hazard(model, x, hi) < e) {
    hi *= 2.0;
    if (++grow > 120) throw NumericFailure("sample_sojourn: hazard never reaches the draw");
  }
  return {bisect_hazard(model, x, e, 0.0, hi), false};
}

std::vector<ChainStep> simulate_chain(const PdmpModel& model, const State& x0, int n_jumps,
                                      Rng& rng) {
  std::vector<ChainStep> steps;
  steps.reserve(static_cast<std::size_t>(n_jumps) + 1);
  steps.push_back({x0, 0.0, 0.0, false});
  State x = x0;
  double t = 0.0;
  for (int k = 1; k <= n_jumps; ++k) {
    SojournSample sj = sample_sojourn(model, x, rng);
    State pre = flow_at(model, x, sj.s);
    State z = model.kernel(pre, rng);
    t += sj.s;
    steps.push_back({z, sj.s, t, sj.hit_boundary});
    x = z;
  }
  return steps;
}

}  // namespace pdmpq
