#include "pdmpq/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "pdmpq/errors.hpp"

namespace pdmpq {

namespace {

// Shared shorthand for the constant formulas. `lt` is the running-cost term
// C_tstar*[l]_1, which the horizon variant replaces by C_tstar*[l]_1 + C_l to
// absorb the kink of the truncated running cost.
double running_lip_term(const CostMeta& cost, const LipschitzMeta& model, BoundVariant variant) {
  double lt = model.C_tstar * cost.lip_l_1;
  if (variant == BoundVariant::Horizon) lt += cost.C_l;
  return lt;
}

struct KCoefs {
  double e1 = 0.0;     // constant part
  double e1_pp = 0.0;  // coefficient of B (horizon only)
  double e2 = 0.0;     // coefficient of A
  double e3 = 0.0;     // coefficient of [w]_1
  double e4 = 0.0;     // coefficient of C_w
};

KCoefs k_coefs(const CostMeta& cost, const LipschitzMeta& model, BoundVariant variant) {
  const double ct = model.C_tstar;
  const double cl = model.C_lambda;
  const double ll = model.lip_lambda;
  const double ts = model.lip_tstar;
  const double lt = running_lip_term(cost, model, variant);

  KCoefs k;
  k.e1 = 2.0 * lt + cost.C_l * (ts + 2.0 * ct * ct * ll) +
         cost.lip_c_star * (1.0 + ct * cl) +
         cost.C_c * (2.0 * ll * ct + cl * ct * ct * ll + 2.0 * ts * cl);
  if (variant == BoundVariant::Horizon) {
    k.e1_pp = cost.C_c * std::max(1.0, ts) * (1.0 + ct * cl);
  }
  k.e2 = cost.C_c * ct * cl * ts;
  k.e3 = (1.0 + ct * cl) * model.lip_Q;
  k.e4 = 2.0 * cl * ts + ct * ll * (2.0 + ct * cl);
  return k;
}

}  // namespace

FConstants lipschitz_F(const CostMeta& cost, const LipschitzMeta& model, double A, double B,
                       BoundVariant variant) {
  FConstants f;
  f.f1_p = running_lip_term(cost, model, variant) + cost.lip_c_star;
  f.f1_pp = model.lip_tstar * cost.C_c;
  f.f1_ppp = variant == BoundVariant::Horizon ? cost.C_c * std::max(1.0, model.lip_tstar) : 0.0;
  f.f2_p = cost.C_l;
  f.f2_pp = cost.C_c;
  f.f1 = f.f1_p + A * f.f1_pp + B * f.f1_ppp;
  f.f2 = f.f2_p + A * f.f2_pp;
  return f;
}

double K_of(const CostMeta& cost, const LipschitzMeta& model, double A, double B,
            BoundVariant variant, double w_lip1, double w_bound, double w_lip_star) {
  const KCoefs k = k_coefs(cost, model, variant);
  double b_term = variant == BoundVariant::Horizon ? k.e1_pp * B : 0.0;
  return k.e1 + b_term + k.e2 * A + k.e3 * w_lip1 + k.e4 * w_bound + model.lip_Q * w_lip_star;
}

BoundBreakdown propagate_v_constants(const BoundInputs& in) {
  if (in.n_steps < 0) throw ConfigError("bound: negative step count");
  if (!(in.A > 0.0)) throw ConfigError("bound: smoothing slope A must be positive");
  if (in.variant == BoundVariant::Horizon && !(in.B > 0.0))
    throw ConfigError("bound: envelope slope B must be positive for the horizon form");

  const CostMeta& cost = in.cost;
  const LipschitzMeta& model = in.model;
  const KCoefs k = k_coefs(cost, model, in.variant);

  BoundBreakdown out;
  out.variant = in.variant;
  out.e1 = k.e1;
  out.e1_pp = k.e1_pp;
  out.e2 = k.e2;
  out.e3 = k.e3;
  out.e4 = k.e4;
  out.f = lipschitz_F(cost, model, in.A, in.B, in.variant);

  const int N = in.n_steps;
  const double ct = model.C_tstar;
  const double cl = model.C_lambda;
  const double ll = model.lip_lambda;
  const double ts = model.lip_tstar;
  const double lt = running_lip_term(cost, model, in.variant);
  const double per_step = ct * cost.C_l + cost.C_c;  // sup growth per step
  const double exp_ctl = std::exp(ct * cl);

  // v[k] holds the constants of the value function with N - k steps to go;
  // the recursion below walks the appendix count n = N - k upward from the
  // terminal zero.
  out.v.assign(static_cast<std::size_t>(N) + 1, VConstants{});
  for (int n = 1; n <= N; ++n) {
    const VConstants& prev = out.v[static_cast<std::size_t>(N - n + 1)];
    VConstants cur;
    cur.bound = static_cast<double>(n) * per_step;
    cur.lip_free = k.e1 + k.e1_pp * in.B + k.e2 * in.A + k.e3 * prev.lip1 +
                   k.e4 * prev.bound + model.lip_Q * prev.lip_star;
    cur.lip1 = exp_ctl * (cur.lip_free + static_cast<double>(n) * ct * ll * per_step) + lt;
    cur.lip2 = exp_ctl * (ct * cost.C_l * cl + 2.0 * cost.C_l + cl * cost.C_c +
                          (2.0 * n - 1.0) * cl * per_step) +
               cost.C_l;
    cur.lip_star = cur.lip1 + ts * cur.lip2;
    out.v[static_cast<std::size_t>(N - n)] = cur;
  }

  out.smoothing = static_cast<double>(N) * cost.C_c * cl / in.A;
  return out;
}

BoundBreakdown epsilon_N(const BoundInputs& in) {
  BoundBreakdown out = propagate_v_constants(in);
  const std::size_t want = static_cast<std::size_t>(in.n_steps) + 1;
  if (in.dist_z.size() != want || in.dist_s.size() != want)
    throw ConfigError("bound: distortion arrays must have one entry per step plus the start");

  double sum = 0.0;
  for (int kk = 0; kk < in.n_steps; ++kk) {
    const std::size_t i = static_cast<std::size_t>(kk);
    sum += 2.0 * out.v[i + 1].lip_free * in.dist_z[i + 1];
    sum += (2.0 * out.v[i].lip_free + out.f.f1) * in.dist_z[i];
    sum += out.f.f2 * in.dist_s[i + 1];
  }
  out.step_sum = sum;
  out.total = out.step_sum + out.smoothing;
  return out;
}

namespace {

const char* variant_name(BoundVariant v) {
  switch (v) {
    case BoundVariant::Plain:
      return "plain";
    case BoundVariant::Augmented:
      return "augmented";
    case BoundVariant::Horizon:
      return "horizon";
  }
  return "?";
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

}  // namespace

std::string render_breakdown(const BoundBreakdown& b) {
  std::ostringstream os;
  os << "variant        " << variant_name(b.variant) << "\n";
  os << "E1             " << fmt(b.e1) << "\n";
  if (b.variant == BoundVariant::Horizon) os << "E1''           " << fmt(b.e1_pp) << "\n";
  os << "E2             " << fmt(b.e2) << "\n";
  os << "E3             " << fmt(b.e3) << "\n";
  os << "E4             " << fmt(b.e4) << "\n";
  os << "F_state        " << fmt(b.f.f1) << "\n";
  os << "F_time         " << fmt(b.f.f2) << "\n";
  os << "step  sup(v)          lip1(v)         lip2(v)         lip*(v)         K(v)\n";
  for (std::size_t k = 0; k < b.v.size(); ++k) {
    char line[192];
    std::snprintf(line, sizeof(line), "%-5zu %-15.8g %-15.8g %-15.8g %-15.8g %-15.8g\n", k,
                  b.v[k].bound, b.v[k].lip1, b.v[k].lip2, b.v[k].lip_star, b.v[k].lip_free);
    os << line;
  }
  os << "step_sum       " << fmt(b.step_sum) << "\n";
  os << "smoothing      " << fmt(b.smoothing) << "\n";
  os << "total          " << fmt(b.total) << "\n";
  return os.str();
}

std::string render_breakdown_csv(const BoundBreakdown& b) {
  std::ostringstream os;
  os << "constant,value\n";
  os << "variant," << variant_name(b.variant) << "\n";
  os << "E1," << fmt(b.e1) << "\n";
  if (b.variant == BoundVariant::Horizon) os << "E1pp," << fmt(b.e1_pp) << "\n";
  os << "E2," << fmt(b.e2) << "\n";
  os << "E3," << fmt(b.e3) << "\n";
  os << "E4," << fmt(b.e4) << "\n";
  os << "F_state," << fmt(b.f.f1) << "\n";
  os << "F_time," << fmt(b.f.f2) << "\n";
  for (std::size_t k = 0; k < b.v.size(); ++k) {
    os << "sup_v_" << k << "," << fmt(b.v[k].bound) << "\n";
    os << "lip1_v_" << k << "," << fmt(b.v[k].lip1) << "\n";
    os << "lip2_v_" << k << "," << fmt(b.v[k].lip2) << "\n";
    os << "lipstar_v_" << k << "," << fmt(b.v[k].lip_star) << "\n";
    os << "lipfree_v_" << k << "," << fmt(b.v[k].lip_free) << "\n";
  }
  os << "step_sum," << fmt(b.step_sum) << "\n";
  os << "smoothing," << fmt(b.smoothing) << "\n";
  os << "total," << fmt(b.total) << "\n";
  return os.str();
}

}  // namespace pdmpq
