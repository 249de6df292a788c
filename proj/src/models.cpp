#include "pdmpq/models.hpp"

#include <cmath>
#include <sstream>

#include "pdmpq/errors.hpp"

namespace pdmpq {

namespace {

double discounted_segment(double discount, double clock, double u) {
  if (discount <= 0.0) return u;
  return std::exp(-discount * clock) * (-std::expm1(-discount * u)) / discount;
}

}  // namespace

PdmpModel repair_workshop_model(const RepairWorkshopParams& p) {
  if (p.weibull_alpha < 2.0 || p.weibull_beta <= 0.0 || p.work_age_limit <= 0.0 ||
      p.shop_days <= 0.0)
    throw ConfigError("repair-workshop: need alpha >= 2 and positive durations");
  const double alpha = p.weibull_alpha;
  const double beta = p.weibull_beta;
  const double limit = p.work_age_limit;
  const double shop = p.shop_days;

  PdmpModel m;
  m.id = "repair-workshop";
  m.n_modes = 3;
  m.dim = 2;
  m.clock_index = 1;
  m.flow = [](const State& x, double u) {
    State y = x;
    y[0] += u;
    y[1] += u;
    return y;
  };
  m.jump_rate = [alpha, beta](const State& x) {
    if (x.mode != 1) return 0.0;
    return (alpha / beta) * std::pow(x[0] / beta, alpha - 1.0);
  };
  m.exit_time = [limit, shop](const State& x) {
    double cap = (x.mode == 1) ? limit : shop;
    return ExitTime::finite(std::max(0.0, cap - x[0]));
  };
  m.cumulative_hazard = [alpha, beta](const State& x, double t) {
    if (x.mode != 1) return 0.0;
    return std::pow((x[0] + t) / beta, alpha) - std::pow(x[0] / beta, alpha);
  };
  m.hazard_inverse = [alpha, beta](const State& x, double e) {
    return beta * std::pow(e + std::pow(x[0] / beta, alpha), 1.0 / alpha) - x[0];
  };
  m.kernel = [limit](const State& pre, Rng&) {
    State y = pre;
    y[0] = 0.0;
    if (pre.mode == 1)
      y.mode = (pre[0] >= limit * (1.0 - 1e-9)) ? 3 : 2;
    else
      y.mode = 1;
    return y;
  };
  m.meta.C_lambda = (alpha / beta) * std::pow(limit / beta, alpha - 1.0);
  m.meta.lip_lambda =
      (alpha * (alpha - 1.0) / (beta * beta)) * std::pow(limit / beta, alpha - 2.0);
  m.meta.C_tstar = limit;
  m.meta.lip_tstar = 1.0;
  m.meta.lip_Q = 1.0;
  return m;
}

State repair_workshop_start() { return make_state(1, {0.0, 0.0}); }

namespace {

CostFunctional repair_running_functional(const RepairWorkshopParams& p,
                                         std::array<double, 3> g, const std::string& label) {
  const double rho = p.discount_rate;
  CostFunctional fn;
  fn.label = label;
  fn.running_cost = [g, rho](const State& x) {
    return g[static_cast<std::size_t>(x.mode - 1)] * std::exp(-rho * x[1]);
  };
  fn.running_integral = [g, rho](const State& x, double u) {
    return g[static_cast<std::size_t>(x.mode - 1)] * discounted_segment(rho, x[1], u);
  };
  fn.horizon_clip = p.horizon;
  double cl = std::max({std::fabs(g[0]), std::fabs(g[1]), std::fabs(g[2])});
  fn.meta.C_l = cl;
  fn.meta.lip_l_1 = rho * cl;
  fn.meta.lip_l_2 = rho * cl;
  return fn;
}

}  // namespace

CostFunctional repair_benefit_functional(const RepairWorkshopParams& p, double x) {
  if (x < 0.0 || x > 1.0) throw ConfigError("repair-workshop setting must lie in [0, 1]");
  std::ostringstream label;
  label << "repair-benefit(x=" << x << ")";
  auto g = repair_setting_coefs(x);
  return repair_running_functional(p, {g[0], g[1], g[2]}, label.str());
}

std::array<CostFunctional, 3> repair_mode_basis(const RepairWorkshopParams& p) {
  return {repair_running_functional(p, {1.0, 0.0, 0.0}, "repair-mode-1"),
          repair_running_functional(p, {0.0, 1.0, 0.0}, "repair-mode-2"),
          repair_running_functional(p, {0.0, 0.0, 1.0}, "repair-mode-3")};
}

std::array<double, 3> repair_setting_coefs(double x) {
  return {x, -100.0 * x * x, -5.0};
}

double corrosion_dm(const CorrosionParams& p, int mode, double rho, double s) {
  const CorrosionEnv& e = p.env[static_cast<std::size_t>(mode - 1)];
  return rho * (s + e.eta * std::expm1(-s / (2.0 * e.eta)));
}

PdmpModel corrosion_model(const CorrosionParams& p) {
  for (const CorrosionEnv& e : p.env)
    if (e.lambda <= 0.0 || e.eta <= 0.0 || e.rho_min >= e.rho_max)
      throw ConfigError("corrosion: need lambda, eta > 0 and rho_min < rho_max");

  PdmpModel m;
  m.id = "corrosion";
  m.n_modes = 3;
  m.dim = 4;
  m.clock_index = 3;
  m.tstar_unbounded = true;
  m.flow = [p](const State& x, double u) {
    State y = x;
    y[0] += corrosion_dm(p, x.mode, x[2], x[1] + u) - corrosion_dm(p, x.mode, x[2], x[1]);
    y[1] += u;
    y[3] += u;
    return y;
  };
  m.jump_rate = [p](const State& x) {
    return p.env[static_cast<std::size_t>(x.mode - 1)].lambda;
  };
  m.exit_time = [](const State&) { return ExitTime::never(); };
  m.cumulative_hazard = [p](const State& x, double t) {
    return p.env[static_cast<std::size_t>(x.mode - 1)].lambda * t;
  };
  m.hazard_inverse = [p](const State& x, double e) {
    return e / p.env[static_cast<std::size_t>(x.mode - 1)].lambda;
  };
  m.kernel = [p](const State& pre, Rng& rng) {
    State y = pre;
    y.mode = pre.mode % 3 + 1;
    const CorrosionEnv& e = p.env[static_cast<std::size_t>(y.mode - 1)];
    y[1] = 0.0;
    y[2] = rng.uniform(e.rho_min, e.rho_max);
    return y;
  };
  m.meta.C_lambda = std::max({p.env[0].lambda, p.env[1].lambda, p.env[2].lambda});
  m.meta.lip_lambda = 0.0;
  m.meta.C_tstar = 0.0;
  m.meta.lip_tstar = 0.0;
  m.meta.lip_Q = 1.0;
  return m;
}

State corrosion_start(const CorrosionParams& p) {
  double rho0 = 0.5 * (p.env[0].rho_min + p.env[0].rho_max);
  return make_state(1, {0.0, 0.0, rho0, 0.0});
}

CostFunctional corrosion_loss_functional(const CorrosionParams& p) {
  CostFunctional fn;
  fn.label = "corrosion-env2-loss";
  fn.running_cost = [p](const State& x) {
    if (x.mode != 2) return 0.0;
    return x[2] * (1.0 - 0.5 * std::exp(-x[1] / (2.0 * p.env[1].eta)));
  };
  fn.running_integral = [p](const State& x, double u) {
    if (x.mode != 2) return 0.0;
    return corrosion_dm(p, 2, x[2], x[1] + u) - corrosion_dm(p, 2, x[2], x[1]);
  };
  fn.horizon_clip = p.horizon;
  fn.meta.C_l = p.env[1].rho_max;
  fn.meta.lip_l_1 = 1.0;
  fn.meta.lip_l_2 = p.env[1].rho_max / (4.0 * p.env[1].eta);
  return fn;
}

PdmpModel toy_constant_model(const ToyConstantParams& p) {
  if (p.exit0 <= 0.0 || p.speed <= 0.0 || p.lambda0 < 0.0)
    throw ConfigError("toy-constant: need exit0 > 0, speed > 0, lambda0 >= 0");
  const double lambda0 = p.lambda0;
  const double speed = p.speed;
  const double reset = p.reset;
  const double zb = p.reset + p.speed * p.exit0;

  PdmpModel m;
  m.id = "toy-constant";
  m.n_modes = 1;
  m.dim = 1;
  m.flow = [speed](const State& x, double u) {
    State y = x;
    y[0] += speed * u;
    return y;
  };
  m.jump_rate = [lambda0](const State&) { return lambda0; };
  m.exit_time = [zb, speed](const State& x) {
    return ExitTime::finite(std::max(0.0, (zb - x[0]) / speed));
  };
  m.cumulative_hazard = [lambda0](const State&, double t) { return lambda0 * t; };
  if (lambda0 > 0.0)
    m.hazard_inverse = [lambda0](const State&, double e) { return e / lambda0; };
  m.kernel = [reset](const State& pre, Rng&) {
    State y = pre;
    y[0] = reset;
    return y;
  };
  m.meta.C_lambda = lambda0;
  m.meta.lip_lambda = 0.0;
  m.meta.C_tstar = p.exit0;
  m.meta.lip_tstar = 1.0 / speed;
  m.meta.lip_Q = 0.0;
  return m;
}

State toy_constant_start(const ToyConstantParams& p) { return make_state(1, {p.reset}); }

LipschitzMeta effective_meta(const PdmpModel& model, std::optional<double> horizon) {
  LipschitzMeta meta = model.meta;
  if (model.tstar_unbounded) {
    if (!horizon || !(*horizon > 0.0) || !std::isfinite(*horizon))
      throw ConfigError(
          "C_tstar unavailable: the exit time is unbounded and no finite horizon was given");
    meta.C_tstar = *horizon;
  }
  return meta;
}

namespace {

double take(std::map<std::string, double>& kv, const std::string& key, double fallback) {
  auto it = kv.find(key);
  if (it == kv.end()) return fallback;
  double v = it->second;
  kv.erase(it);
  return v;
}

void reject_leftovers(const std::map<std::string, double>& kv, const std::string& id) {
  if (kv.empty()) return;
  std::ostringstream msg;
  msg << "unknown parameter(s) for model " << id << ":";
  for (const auto& [k, v] : kv) msg << " " << k;
  throw ConfigError(msg.str());
}

}  // namespace

ModelBundle make_bundle(const std::string& id,
                        const std::map<std::string, double>& overrides) {
  std::map<std::string, double> kv = overrides;
  ModelBundle b;
  b.id = id;
  if (id == "repair-workshop") {
    RepairWorkshopParams p;
    p.weibull_alpha = take(kv, "weibull_alpha", p.weibull_alpha);
    p.weibull_beta = take(kv, "weibull_beta", p.weibull_beta);
    p.work_age_limit = take(kv, "work_age_limit", p.work_age_limit);
    p.shop_days = take(kv, "shop_days", p.shop_days);
    p.discount_rate = take(kv, "discount_rate", p.discount_rate);
    p.horizon = take(kv, "horizon_days", p.horizon);
    reject_leftovers(kv, id);
    b.model = repair_workshop_model(p);
    b.x0 = repair_workshop_start();
    b.units_per_year = 365.0;
    b.default_horizon = p.horizon;
    b.param_name = "setting";
    b.default_param = 0.78;
    b.variant = BoundVariant::Horizon;
    b.functional = [p](double param, double horizon) {
      RepairWorkshopParams q = p;
      q.horizon = horizon;
      return repair_benefit_functional(q, param);
    };
    b.sweep_basis = [p](double horizon) {
      RepairWorkshopParams q = p;
      q.horizon = horizon;
      auto basis = repair_mode_basis(q);
      return std::vector<CostFunctional>{basis[0], basis[1], basis[2]};
    };
    b.sweep_coefs = [](double param) {
      auto g = repair_setting_coefs(param);
      return std::vector<double>{g[0], g[1], g[2]};
    };
    return b;
  }
  if (id == "corrosion") {
    CorrosionParams p;
    for (int i = 0; i < 3; ++i) {
      std::string n = std::to_string(i + 1);
      auto& e = p.env[static_cast<std::size_t>(i)];
      e.lambda = take(kv, "lambda" + n, e.lambda);
      e.eta = take(kv, "eta" + n, e.eta);
      e.rho_min = take(kv, "rho_min" + n, e.rho_min);
      e.rho_max = take(kv, "rho_max" + n, e.rho_max);
    }
    p.horizon = take(kv, "horizon_hours", p.horizon);
    reject_leftovers(kv, id);
    b.model = corrosion_model(p);
    b.x0 = corrosion_start(p);
    b.units_per_year = 8760.0;
    b.default_horizon = p.horizon;
    b.param_name = "";
    b.default_param = 0.0;
    b.variant = BoundVariant::Horizon;
    b.functional = [p](double, double horizon) {
      CorrosionParams q = p;
      q.horizon = horizon;
      return corrosion_loss_functional(q);
    };
    return b;
  }
  if (id == "toy-constant") {
    ToyConstantParams p;
    p.lambda0 = take(kv, "lambda0", p.lambda0);
    p.speed = take(kv, "speed", p.speed);
    p.exit0 = take(kv, "exit0", p.exit0);
    p.reset = take(kv, "reset", p.reset);
    reject_leftovers(kv, id);
    b.model = toy_constant_model(p);
    b.x0 = toy_constant_start(p);
    b.units_per_year = 1.0;
    b.default_horizon = 0.0;
    b.param_name = "running-cost scale";
    b.default_param = 1.0;
    b.variant = BoundVariant::Plain;
    b.functional = [](double param, double) {
      CostFunctional fn;
      fn.label = "toy-costs";
      fn.running_cost = [param](const State&) { return param; };
      fn.boundary_cost = [](const State&) { return 1.0; };
      fn.running_integral = [param](const State&, double u) { return param * u; };
      fn.meta.C_l = std::fabs(param);
      fn.meta.C_c = 1.0;
      return fn;
    };
    b.sweep_coefs = nullptr;
    return b;
  }
  throw ConfigError("unknown model id: " + id +
                    " (known: repair-workshop, corrosion, toy-constant)");
}

std::vector<std::string> registered_model_ids() {
  return {"repair-workshop", "corrosion", "toy-constant"};
}

}  // namespace pdmpq
