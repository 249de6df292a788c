#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "pdmpq/errors.hpp"
#include "pdmpq/models.hpp"
#include "pdmpq/montecarlo.hpp"
#include "pdmpq/rng.hpp"
#include "pdmpq/simulate.hpp"

using namespace pdmpq;

TEST_CASE("repair workshop routes jumps by age") {
  PdmpModel m = repair_workshop_model();
  Rng rng(1);

  // breakdown in service: age resets, clock survives, off to the repair shop
  State broke = m.kernel(make_state(1, {200.0, 50.0}), rng);
  CHECK(broke.mode == 2);
  CHECK(broke[0] == 0.0);
  CHECK(broke[1] == 50.0);

  // hitting the age limit forces maintenance instead
  State forced = m.kernel(make_state(1, {365.0, 400.0}), rng);
  CHECK(forced.mode == 3);
  CHECK(forced[0] == 0.0);
  CHECK(forced[1] == 400.0);

  // both shops hand the machine back to service
  CHECK(m.kernel(make_state(2, {7.0, 10.0}), rng).mode == 1);
  CHECK(m.kernel(make_state(3, {7.0, 10.0}), rng).mode == 1);
}

TEST_CASE("repair workshop rate and exit times") {
  PdmpModel m = repair_workshop_model();
  // Weibull(2, 600) hazard at age beta is alpha/beta
  CHECK(m.jump_rate(make_state(1, {600.0, 0.0})) == doctest::Approx(1.0 / 300.0).epsilon(1e-14));
  CHECK(m.jump_rate(make_state(2, {3.0, 0.0})) == 0.0);
  CHECK(m.jump_rate(make_state(3, {3.0, 0.0})) == 0.0);

  CHECK(m.exit_time(make_state(1, {100.0, 0.0})).value == doctest::Approx(265.0));
  CHECK(m.exit_time(make_state(2, {0.0, 0.0})).value == 7.0);
  CHECK(m.exit_time(make_state(3, {6.0, 0.0})).value == 1.0);

  // zero hazard makes the shop stay deterministic
  Rng rng(2);
  SojournSample s = sample_sojourn(m, make_state(2, {0.0, 0.0}), rng);
  CHECK(s.s == 7.0);
  CHECK(s.hit_boundary);
}

TEST_CASE("repair benefit combines the mode basis pointwise") {
  RepairWorkshopParams p;
  auto basis = repair_mode_basis(p);
  Rng rng(3);
  for (int i = 0; i < 200; ++i) {
    double x = rng.uniform(0.0, 1.0);
    CostFunctional fn = repair_benefit_functional(p, x);
    auto g = repair_setting_coefs(x);
    CHECK(g[0] == x);
    CHECK(g[1] == -100.0 * x * x);
    CHECK(g[2] == -5.0);
    int mode = 1 + static_cast<int>(rng.uniform(0.0, 3.0));
    State st = make_state(mode, {rng.uniform(0.0, 300.0), rng.uniform(0.0, 1000.0)});
    double combined = 0.0;
    for (int j = 0; j < 3; ++j) combined += g[static_cast<std::size_t>(j)] *
                                            basis[static_cast<std::size_t>(j)].running_cost(st);
    CHECK(fn.running_cost(st) == doctest::Approx(combined).epsilon(1e-12));
    double u = rng.uniform(0.0, 50.0);
    double combined_int = 0.0;
    for (int j = 0; j < 3; ++j)
      combined_int += g[static_cast<std::size_t>(j)] *
                      basis[static_cast<std::size_t>(j)].running_integral(st, u);
    CHECK(fn.running_integral(st, u) == doctest::Approx(combined_int).epsilon(1e-12));
  }
  CHECK_THROWS_AS(repair_benefit_functional(p, -0.1), ConfigError);
  CHECK_THROWS_AS(repair_benefit_functional(p, 1.1), ConfigError);
}

TEST_CASE("corrosion degradation law") {
  CorrosionParams p;
  // no time in the mode, no loss
  CHECK(corrosion_dm(p, 1, 5e-6, 0.0) == 0.0);
  CHECK(corrosion_dm(p, 2, 1e-7, 0.0) == 0.0);
  // closed form at s = eta: rho * eta * exp(-1/2)
  CHECK(corrosion_dm(p, 2, 1e-6, 200000.0) == doctest::Approx(0.12130613194252668).epsilon(1e-15));

  Rng rng(4);
  for (int i = 0; i < 200; ++i) {
    int mode = 1 + static_cast<int>(rng.uniform(0.0, 3.0));
    double rho = rng.uniform(1e-7, 1e-5);
    double s = rng.uniform(0.0, 3e5);
    double ds = rng.uniform(1.0, 1e4);
    CHECK(corrosion_dm(p, mode, rho, s + ds) > corrosion_dm(p, mode, rho, s));
    CHECK(corrosion_dm(p, mode, rho, s) >= 0.0);
    // loss never exceeds the straight-line rate
    CHECK(corrosion_dm(p, mode, rho, s) <= rho * s);
  }
}

TEST_CASE("corrosion kernel cycles environments and redraws the rate") {
  CorrosionParams p;
  PdmpModel m = corrosion_model(p);
  CHECK(m.tstar_unbounded);
  CHECK(m.exit_time(corrosion_start(p)).unbounded);

  Rng rng(5);
  State x = corrosion_start(p);
  CHECK(x.mode == 1);
  CHECK(x[2] == doctest::Approx(5.5e-6));
  for (int i = 0; i < 30; ++i) {
    State pre = m.flow(x, rng.uniform(0.0, 5000.0));
    State next = m.kernel(pre, rng);
    CHECK(next.mode == pre.mode % 3 + 1);
    const CorrosionEnv& env = p.env[static_cast<std::size_t>(next.mode - 1)];
    CHECK(next[2] >= env.rho_min);
    CHECK(next[2] <= env.rho_max);
    CHECK(next[1] == 0.0);
    CHECK(next[0] == pre[0]);  // thickness loss carries over
    CHECK(next[3] == pre[3]);  // so does the clock
    x = next;
  }
}

TEST_CASE("corrosion loss integral matches its integrand") {
  CorrosionParams p;
  CostFunctional fn = corrosion_loss_functional(p);
  PdmpModel m = corrosion_model(p);
  State x = make_state(2, {0.3, 40000.0, 4e-7, 90000.0});
  double u = 30000.0;
  // fine Riemann sum of l along the flow
  const int steps = 20000;
  double h = u / steps;
  double acc = 0.0;
  for (int i = 0; i < steps; ++i) acc += fn.running_cost(m.flow(x, (i + 0.5) * h)) * h;
  CHECK(fn.running_integral(x, u) == doctest::Approx(acc).epsilon(1e-6));
  // other environments contribute nothing
  CHECK(fn.running_cost(make_state(1, {0.3, 1000.0, 4e-6, 0.0})) == 0.0);
  CHECK(fn.running_integral(make_state(3, {0.3, 1000.0, 4e-6, 0.0}), 500.0) == 0.0);
}

TEST_CASE("toy model with a silent rate is fully deterministic") {
  ModelBundle toy = make_bundle("toy-constant", {{"lambda0", 0.0}});
  CostFunctional fn = toy.functional(2.0, 0.0);
  McEstimate est = mc_functional(toy.model, toy.x0, fn, 1, 50, 1);
  // one sojourn of exactly t*(x0) = 1, one guaranteed boundary hit
  CHECK(est.mean == doctest::Approx(2.0 * 1.0 + 1.0).epsilon(1e-14));
  CHECK(est.stderr_ == 0.0);
}

TEST_CASE("toy geometry honors reset, speed, and exit level") {
  ModelBundle toy =
      make_bundle("toy-constant", {{"reset", 2.0}, {"speed", 0.5}, {"exit0", 3.0}});
  CHECK(toy.x0[0] == 2.0);
  CHECK(toy.model.exit_time(toy.x0).value == doctest::Approx(3.0));
  State at_boundary = toy.model.flow(toy.x0, 3.0);
  CHECK(at_boundary[0] == doctest::Approx(3.5));
  CHECK(toy.model.exit_time(at_boundary).value == doctest::Approx(0.0));
  Rng rng(6);
  CHECK(toy.model.kernel(at_boundary, rng)[0] == 2.0);
  CHECK(toy.model.meta.lip_tstar == doctest::Approx(2.0));
}

TEST_CASE("effective meta substitutes the horizon only when needed") {
  ModelBundle corr = make_bundle("corrosion");
  CHECK_THROWS_AS(effective_meta(corr.model, std::nullopt), ConfigError);
  CHECK_THROWS_AS(effective_meta(corr.model, 0.0), ConfigError);
  LipschitzMeta meta = effective_meta(corr.model, 157680.0);
  CHECK(meta.C_tstar == 157680.0);
  CHECK(meta.C_lambda == corr.model.meta.C_lambda);

  ModelBundle rep = make_bundle("repair-workshop");
  LipschitzMeta rmeta = effective_meta(rep.model, 99.0);
  CHECK(rmeta.C_tstar == 365.0);
}

TEST_CASE("bundle construction validates ids and override keys") {
  CHECK_THROWS_AS(make_bundle("no-such-model"), ConfigError);
  CHECK_THROWS_AS(make_bundle("toy-constant", {{"bogus", 1.0}}), ConfigError);
  CHECK_THROWS_AS(make_bundle("repair-workshop", {{"weibull_alpha", 1.5}}), ConfigError);
  CHECK_THROWS_AS(make_bundle("corrosion", {{"rho_min1", 2e-5}}), ConfigError);

  ModelBundle rep = make_bundle("repair-workshop", {{"shop_days", 10.0}});
  CHECK(rep.model.exit_time(make_state(2, {0.0, 0.0})).value == 10.0);
  CHECK(rep.units_per_year == 365.0);
  CHECK(rep.default_param == 0.78);
  CHECK(rep.variant == BoundVariant::Horizon);

  ModelBundle toy = make_bundle("toy-constant");
  CHECK(toy.variant == BoundVariant::Plain);
  CHECK(registered_model_ids().size() == 3);
}
