#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"
#include "oracle_bounds.hpp"
#include "pdmpq/bounds.hpp"
#include "pdmpq/errors.hpp"
#include "pdmpq/rng.hpp"

using namespace pdmpq;

namespace {

oracle::BoundConsts random_consts(Rng& rng, int variant, int n_steps) {
  oracle::BoundConsts c;
  c.C_l = rng.uniform(0.0, 3.0);
  c.lip_l1 = rng.uniform(0.0, 2.0);
  c.lip_l2 = rng.uniform(0.0, 2.0);
  c.C_c = rng.uniform(0.0, 2.0);
  c.lip_cs = rng.uniform(0.0, 2.0);
  c.C_lam = rng.uniform(0.1, 2.0);
  c.lip_lam = rng.uniform(0.0, 1.5);
  c.C_ts = rng.uniform(0.1, 2.0);
  c.lip_ts = rng.uniform(0.0, 2.0);
  c.lip_Q = rng.uniform(0.0, 1.5);
  c.A = rng.uniform(0.5, 50.0);
  c.B = rng.uniform(0.5, 20.0);
  c.N = n_steps;
  c.variant = variant;
  for (int k = 0; k <= n_steps; ++k) {
    c.dz.push_back(rng.uniform(0.0, 0.3));
    c.ds.push_back(rng.uniform(0.0, 0.3));
  }
  return c;
}

BoundInputs to_inputs(const oracle::BoundConsts& c) {
  BoundInputs in;
  in.n_steps = c.N;
  in.variant = c.variant == 0   ? BoundVariant::Plain
               : c.variant == 1 ? BoundVariant::Augmented
                                : BoundVariant::Horizon;
  in.A = c.A;
  in.B = c.B;
  in.cost.C_l = c.C_l;
  in.cost.lip_l_1 = c.lip_l1;
  in.cost.lip_l_2 = c.lip_l2;
  in.cost.C_c = c.C_c;
  in.cost.lip_c_star = c.lip_cs;
  in.model.C_lambda = c.C_lam;
  in.model.lip_lambda = c.lip_lam;
  in.model.C_tstar = c.C_ts;
  in.model.lip_tstar = c.lip_ts;
  in.model.lip_Q = c.lip_Q;
  in.dist_z = c.dz;
  in.dist_s = c.ds;
  return in;
}

}  // namespace

TEST_CASE("epsilon_N agrees with an independent transcription") {
  Rng rng(4242);
  for (int variant = 0; variant <= 2; ++variant) {
    for (int trial = 0; trial < 5; ++trial) {
      int n_steps = 1 + static_cast<int>(rng.uniform(0.0, 6.0));
      oracle::BoundConsts c = random_consts(rng, variant, n_steps);
      BoundBreakdown b = epsilon_N(to_inputs(c));
      double ref = oracle::eps_reference(c);
      INFO("variant ", variant, " trial ", trial, " got ", b.total, " want ", ref);
      CHECK(std::fabs(b.total - ref) <= 1e-12 * std::fabs(ref));
    }
  }
}

TEST_CASE("perfect quantization leaves only the smoothing gap") {
  Rng rng(7);
  oracle::BoundConsts c = random_consts(rng, 1, 4);
  std::fill(c.dz.begin(), c.dz.end(), 0.0);
  std::fill(c.ds.begin(), c.ds.end(), 0.0);
  BoundBreakdown b = epsilon_N(to_inputs(c));
  CHECK(b.step_sum == 0.0);
  CHECK(b.total == b.smoothing);
  CHECK(b.smoothing == doctest::Approx(4.0 * c.C_c * c.C_lam / c.A).epsilon(1e-15));
}

TEST_CASE("no boundary cost means no smoothing penalty") {
  Rng rng(8);
  oracle::BoundConsts c = random_consts(rng, 0, 3);
  c.C_c = 0.0;
  BoundBreakdown b = epsilon_N(to_inputs(c));
  CHECK(b.smoothing == 0.0);
}

TEST_CASE("hand-checked trivial bound") {
  BoundInputs in;
  in.n_steps = 3;
  in.variant = BoundVariant::Plain;
  in.A = 2.0;
  in.cost.C_c = 1.0;
  in.model.C_lambda = 1.0;
  in.dist_z.assign(4, 0.0);
  in.dist_s.assign(4, 0.0);
  BoundBreakdown b = epsilon_N(in);
  CHECK(b.total == doctest::Approx(1.5).epsilon(1e-15));
}

TEST_CASE("the horizon variant is the augmented one with boosted cost constants") {
  // folding the explicit B terms into lip_c_star and the truncation into
  // lip_l_1 must reproduce the horizon constants exactly
  Rng rng(99);
  for (int trial = 0; trial < 5; ++trial) {
    oracle::BoundConsts c = random_consts(rng, 2, 3);
    BoundInputs hz = to_inputs(c);

    BoundInputs aug = hz;
    aug.variant = BoundVariant::Augmented;
    aug.cost.lip_c_star += aug.B * aug.cost.C_c * std::max(1.0, aug.model.lip_tstar);
    aug.cost.lip_l_1 += aug.cost.C_l / aug.model.C_tstar;

    double got = epsilon_N(hz).total;
    double want = epsilon_N(aug).total;
    CHECK(std::fabs(got - want) <= 1e-12 * std::fabs(want));
  }
}

TEST_CASE("value constants start at zero and grow linearly in the sup") {
  Rng rng(11);
  oracle::BoundConsts c = random_consts(rng, 1, 5);
  BoundBreakdown b = propagate_v_constants(to_inputs(c));
  REQUIRE(b.v.size() == 6);
  CHECK(b.v[5].bound == 0.0);
  CHECK(b.v[5].lip1 == 0.0);
  CHECK(b.v[5].lip2 == 0.0);
  CHECK(b.v[5].lip_star == 0.0);
  CHECK(b.v[5].lip_free == 0.0);
  double per = c.C_ts * c.C_l + c.C_c;
  for (int k = 0; k <= 5; ++k) {
    CHECK(b.v[static_cast<std::size_t>(k)].bound ==
          doctest::Approx((5.0 - k) * per).epsilon(1e-14));
  }
  // constants only accumulate going backward
  for (int k = 0; k < 5; ++k) {
    CHECK(b.v[static_cast<std::size_t>(k)].lip1 >= b.v[static_cast<std::size_t>(k) + 1].lip1);
    CHECK(b.v[static_cast<std::size_t>(k)].lip_free >=
          b.v[static_cast<std::size_t>(k) + 1].lip_free);
  }
}

TEST_CASE("bound inputs are validated") {
  Rng rng(12);
  oracle::BoundConsts c = random_consts(rng, 0, 2);

  BoundInputs bad_a = to_inputs(c);
  bad_a.A = 0.0;
  CHECK_THROWS_AS(epsilon_N(bad_a), ConfigError);

  BoundInputs bad_b = to_inputs(c);
  bad_b.variant = BoundVariant::Horizon;
  bad_b.B = 0.0;
  CHECK_THROWS_AS(epsilon_N(bad_b), ConfigError);

  BoundInputs short_z = to_inputs(c);
  short_z.dist_z.pop_back();
  CHECK_THROWS_AS(epsilon_N(short_z), ConfigError);

  BoundInputs neg = to_inputs(c);
  neg.n_steps = -1;
  CHECK_THROWS_AS(epsilon_N(neg), ConfigError);
}

TEST_CASE("breakdown renderers carry the key rows") {
  Rng rng(13);
  oracle::BoundConsts c = random_consts(rng, 2, 2);
  BoundBreakdown b = epsilon_N(to_inputs(c));

  std::string text = render_breakdown(b);
  CHECK(text.find("variant") != std::string::npos);
  CHECK(text.find("horizon") != std::string::npos);
  CHECK(text.find("E1''") != std::string::npos);
  CHECK(text.find("total") != std::string::npos);
  CHECK(text.find("smoothing") != std::string::npos);

  std::string csv = render_breakdown_csv(b);
  CHECK(csv.find("constant,value") == 0);
  CHECK(csv.find("E1pp,") != std::string::npos);
  CHECK(csv.find("sup_v_0,") != std::string::npos);
  CHECK(csv.find("lipfree_v_2,") != std::string::npos);
  CHECK(csv.find("total,") != std::string::npos);

  // plain variant omits the horizon-only row
  oracle::BoundConsts p = random_consts(rng, 0, 2);
  std::string plain = render_breakdown_csv(epsilon_N(to_inputs(p)));
  CHECK(plain.find("E1pp,") == std::string::npos);
}
