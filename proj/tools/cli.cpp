#include "cli.hpp"

#include <algorithm>
#include <cerrno>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "pdmpq/bounds.hpp"
#include "pdmpq/errors.hpp"
#include "pdmpq/functional.hpp"
#include "pdmpq/grid_io.hpp"
#include "pdmpq/horizon.hpp"
#include "pdmpq/models.hpp"
#include "pdmpq/montecarlo.hpp"
#include "pdmpq/quantizer.hpp"
#include "pdmpq/rng.hpp"

namespace pdmpq::cli {

namespace {

constexpr std::uint64_t kJumpEstimateLabel = 13;
constexpr int kDefaultJumpCap = 200;
constexpr long long kResolveJumpSims = 20000;

struct Options {
  std::string model;
  std::string config_path;
  std::string grid_path;
  std::string out_path;
  int grid_points = 100;
  long long samples = 100000;
  int jumps = 0;               // <= 0: derive from horizon and target-prob
  double horizon_years = 0.0;  // <= 0: model default
  double target_prob = 1e-3;
  double A = 0.0;  // <= 0: derived from the grid's distortion
  double B = 0.0;  // <= 0: same as A
  double norm_p = 2.0;
  std::uint64_t seed = 1;
  long long sims = 1000000;
  bool sims_given = false;
  double param = std::numeric_limits<double>::quiet_NaN();
  double param_min = 0.0;
  double param_max = 1.0;
  double param_step = 0.01;
  bool print_values = false;
  std::map<std::string, double> overrides;
};

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

double to_double(const std::string& s, const std::string& key) {
  const char* begin = s.c_str();
  char* end = nullptr;
  errno = 0;
  double v = std::strtod(begin, &end);
  if (end != begin + s.size() || s.empty() || errno == ERANGE)
    throw ConfigError("config: bad number '" + s + "' for key '" + key + "'");
  return v;
}

long long to_ll(const std::string& s, const std::string& key) {
  const char* begin = s.c_str();
  char* end = nullptr;
  errno = 0;
  long long v = std::strtoll(begin, &end, 10);
  if (end != begin + s.size() || s.empty() || errno == ERANGE)
    throw ConfigError("config: bad integer '" + s + "' for key '" + key + "'");
  return v;
}

std::uint64_t to_u64(const std::string& s, const std::string& key) {
  const char* begin = s.c_str();
  char* end = nullptr;
  errno = 0;
  unsigned long long v = std::strtoull(begin, &end, 10);
  if (end != begin + s.size() || s.empty() || errno == ERANGE)
    throw ConfigError("config: bad integer '" + s + "' for key '" + key + "'");
  return static_cast<std::uint64_t>(v);
}

bool to_bool(const std::string& s, const std::string& key) {
  if (s == "1" || s == "true" || s == "yes" || s == "on") return true;
  if (s == "0" || s == "false" || s == "no" || s == "off") return false;
  throw ConfigError("config: bad boolean '" + s + "' for key '" + key + "'");
}

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

void read_config_file(const std::string& path, int depth,
                      std::vector<std::pair<std::string, std::string>>& pairs) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot read '" + path + "'");
  std::string line;
  while (std::getline(in, line)) {
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config: line without '=' in '" + path + "': " + line);
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("config: empty key in '" + path + "'");
    if (key == "include") {
      if (depth >= 1) throw ConfigError("config: includes may not nest ('" + path + "')");
      std::filesystem::path inc(value);
      if (inc.is_relative()) inc = std::filesystem::path(path).parent_path() / inc;
      read_config_file(inc.string(), depth + 1, pairs);
      continue;
    }
    pairs.emplace_back(key, value);
  }
}

void set_field(Options& o, const std::string& key, const std::string& value) {
  if (key == "model") {
    o.model = value;
  } else if (key == "grid") {
    o.grid_path = value;
  } else if (key == "out") {
    o.out_path = value;
  } else if (key == "grid-points") {
    o.grid_points = static_cast<int>(to_ll(value, key));
  } else if (key == "samples") {
    o.samples = to_ll(value, key);
  } else if (key == "jumps") {
    o.jumps = static_cast<int>(to_ll(value, key));
  } else if (key == "horizon") {
    o.horizon_years = to_double(value, key);
  } else if (key == "target-prob") {
    o.target_prob = to_double(value, key);
  } else if (key == "A") {
    o.A = to_double(value, key);
  } else if (key == "B") {
    o.B = to_double(value, key);
  } else if (key == "norm-p") {
    o.norm_p = to_double(value, key);
  } else if (key == "seed") {
    o.seed = to_u64(value, key);
  } else if (key == "sims") {
    o.sims = to_ll(value, key);
    o.sims_given = true;
  } else if (key == "param") {
    o.param = to_double(value, key);
  } else if (key == "param-min") {
    o.param_min = to_double(value, key);
  } else if (key == "param-max") {
    o.param_max = to_double(value, key);
  } else if (key == "param-step") {
    o.param_step = to_double(value, key);
  } else if (key == "values") {
    o.print_values = to_bool(value, key);
  } else {
    throw ConfigError("config: unknown key '" + key + "'");
  }
}

void apply_config(Options& o, const std::map<std::string, CLI::Option*>& flags) {
  if (o.config_path.empty()) return;
  std::vector<std::pair<std::string, std::string>> pairs;
  read_config_file(o.config_path, 0, pairs);
  for (const auto& [key, value] : pairs) {
    if (key.rfind("model.", 0) == 0) {
      std::string name = key.substr(6);
      if (name.empty()) throw ConfigError("config: empty model parameter name");
      o.overrides[name] = to_double(value, key);
      continue;
    }
    auto it = flags.find(key);
    if (it == flags.end()) throw ConfigError("config: unknown key '" + key + "'");
    if (it->second != nullptr && it->second->count() > 0) continue;  // flag wins
    set_field(o, key, value);
  }
}

ModelBundle bundle_of(const Options& o) {
  if (o.model.empty())
    throw ConfigError("model id required (--model or config key 'model'); known ids: " + [] {
      std::string s;
      for (const auto& id : registered_model_ids()) s += (s.empty() ? "" : ", ") + id;
      return s;
    }());
  return make_bundle(o.model, o.overrides);
}

double horizon_units(const Options& o, const ModelBundle& b) {
  if (o.horizon_years > 0.0) return o.horizon_years * b.units_per_year;
  return b.default_horizon;
}

double param_of(const Options& o, const ModelBundle& b) {
  return std::isnan(o.param) ? b.default_param : o.param;
}

QuantizationTree tree_of(const Options& o, const ModelBundle& b) {
  if (o.grid_path.empty()) throw ConfigError("--grid is required for this command");
  QuantizationTree tree = load_tree(o.grid_path);
  if (tree.model_id != b.id)
    throw GridMismatch("grid file was trained for model '" + tree.model_id + "', not '" + b.id +
                       "'");
  if (!tree.x0.same_point(b.x0))
    throw GridMismatch("grid file start state differs from the model's start state");
  return tree;
}

int resolve_jumps(const Options& o, const ModelBundle& b) {
  if (o.jumps > 0) return o.jumps;
  double tf = horizon_units(o, b);
  if (!(tf > 0.0))
    throw ConfigError("cannot pick a jump count: give --jumps, or --horizon for models with one");
  Rng rng(derive_seed(o.seed, kJumpEstimateLabel));
  JumpCountEstimate est =
      estimate_N(b.model, b.x0, tf, o.target_prob, kResolveJumpSims, rng, kDefaultJumpCap);
  return est.n;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void print_value_table(std::ostream& out, const std::string& prefix, const ValueTable& table) {
  for (std::size_t k = 0; k < table.values.size(); ++k) {
    out << prefix << ' ' << k;
    for (double v : table.values[k]) out << ' ' << fmt(v);
    out << '\n';
  }
}

void require_finite(double v, const char* name) {
  if (!std::isfinite(v))
    throw ConfigError(std::string("bound: constant ") + name + " is missing or not finite");
}

BoundInputs bound_inputs(const QuantizationTree& tree, const ModelBundle& b, const CostMeta& cost,
                         double A, double B, std::optional<double> tf) {
  BoundInputs in;
  in.n_steps = tree.n_steps;
  in.variant = b.variant;
  in.A = A;
  in.B = b.variant == BoundVariant::Horizon ? B : 0.0;
  in.cost = cost;
  in.model = effective_meta(b.model, tf);
  in.dist_z.reserve(tree.distortions.size());
  in.dist_s.reserve(tree.distortions.size());
  for (const StepDistortion& d : tree.distortions) {
    in.dist_z.push_back(d.z);
    in.dist_s.push_back(d.s);
  }
  return in;
}

int cmd_quantize(const Options& o, std::ostream& out) {
  ModelBundle b = bundle_of(o);
  if (o.out_path.empty()) throw ConfigError("quantize: --out is required");
  int n = resolve_jumps(o, b);
  ClvqConfig cfg;
  cfg.grid_size = o.grid_points;
  cfg.training_samples = o.samples;
  cfg.norm_p = o.norm_p;
  cfg.seed = o.seed;
  auto t0 = std::chrono::steady_clock::now();
  QuantizationTree tree = train(b.model, b.x0, n, cfg);
  double secs = seconds_since(t0);
  out << "model " << b.id << '\n';
  out << "steps " << tree.n_steps << '\n';
  out << "grid-points " << tree.grid_size << '\n';
  out << "norm-p " << fmt(tree.norm_p) << '\n';
  out << "seed " << tree.seed << '\n';
  out << "training-samples " << tree.training_samples << '\n';
  for (std::size_t k = 0; k < tree.distortions.size(); ++k) {
    const StepDistortion& d = tree.distortions[k];
    out << "distortion " << k << " pair " << fmt(d.pair) << " z " << fmt(d.z) << " s "
        << fmt(d.s) << '\n';
  }
  out << "max-pair-distortion " << fmt(tree.max_pair_distortion()) << '\n';
  out << "train-seconds " << fmt(secs) << '\n';
  save_tree(tree, o.out_path);
  out << "wrote " << o.out_path << '\n';
  return 0;
}

int cmd_evaluate(const Options& o, std::ostream& out) {
  ModelBundle b = bundle_of(o);
  QuantizationTree tree = tree_of(o, b);
  double param = param_of(o, b);
  double A = o.A > 0.0 ? o.A : default_smoothing_A(tree);
  out << "model " << b.id << '\n';
  out << "grid-points " << tree.grid_size << '\n';
  out << "steps " << tree.n_steps << '\n';
  out << "seed " << tree.seed << '\n';
  if (!b.param_name.empty()) out << "parameter " << fmt(param) << '\n';
  if (b.variant == BoundVariant::Horizon) {
    double tf = horizon_units(o, b);
    if (!(tf > 0.0)) throw ConfigError("evaluate: this model needs --horizon (years)");
    double B = o.B > 0.0 ? o.B : A;
    CostFunctional base = b.functional(param, tf);
    HorizonResult res = horizon_bounds(tree, b.model, base, tf, A, B);
    out << "horizon-years " << fmt(tf / b.units_per_year) << '\n';
    out << "A " << fmt(res.A) << '\n';
    out << "B " << fmt(res.B) << '\n';
    out << "value-lower " << fmt(res.lower) << '\n';
    out << "value-upper " << fmt(res.upper) << '\n';
    out << "value " << fmt(0.5 * (res.lower + res.upper)) << '\n';
    out << "epsilon " << fmt(res.eps_lower) << '\n';
    out << "lower-with-error " << fmt(res.lower_with_error) << '\n';
    out << "upper-with-error " << fmt(res.upper_with_error) << '\n';
    if (o.print_values) {
      CostFunctional under = horizon_functional(base, b.model, tf, B, EnvelopeSide::Under);
      CostFunctional over = horizon_functional(base, b.model, tf, B, EnvelopeSide::Over);
      under.smoothing_A = A;
      over.smoothing_A = A;
      print_value_table(out, "values-lower", backward_evaluate(tree, under, b.model));
      print_value_table(out, "values-upper", backward_evaluate(tree, over, b.model));
    }
  } else {
    CostFunctional fn = b.functional(param, 0.0);
    fn.smoothing_A = A;
    ValueTable table = backward_evaluate(tree, fn, b.model);
    BoundBreakdown bb = epsilon_N(bound_inputs(tree, b, fn.meta, A, 0.0, std::nullopt));
    out << "A " << fmt(A) << '\n';
    out << "value " << fmt(table.V0) << '\n';
    out << "epsilon " << fmt(bb.total) << '\n';
    if (o.print_values) print_value_table(out, "values", table);
  }
  return 0;
}

int cmd_sweep(const Options& o, std::ostream& out, std::ostream& err) {
  ModelBundle b = bundle_of(o);
  if (!b.sweep_basis || !b.sweep_coefs)
    throw ConfigError("sweep: model '" + b.id + "' has no parameterized functional family");
  QuantizationTree tree = tree_of(o, b);
  double tf = 0.0;
  std::optional<double> tf_opt;
  if (b.variant == BoundVariant::Horizon) {
    tf = horizon_units(o, b);
    if (!(tf > 0.0)) throw ConfigError("sweep: this model needs --horizon (years)");
    tf_opt = tf;
  }
  if (!(o.param_step > 0.0) && o.param_max != o.param_min)
    throw ConfigError("sweep: --param-step must be positive");
  if (o.param_max < o.param_min) throw ConfigError("sweep: --param-max is below --param-min");
  double A = o.A > 0.0 ? o.A : default_smoothing_A(tree);
  double B = o.B > 0.0 ? o.B : A;

  std::vector<CostFunctional> basis = b.sweep_basis(tf);
  std::vector<double> basis_values;
  for (CostFunctional fn : basis) {
    if (fn.boundary_cost && b.variant == BoundVariant::Horizon)
      throw ConfigError("sweep: boundary costs are not supported in horizon sweeps");
    fn.smoothing_A = A;
    basis_values.push_back(backward_evaluate(tree, fn, b.model).V0);
  }

  int count = 1;
  if (o.param_max > o.param_min)
    count = static_cast<int>(std::lround((o.param_max - o.param_min) / o.param_step)) + 1;
  std::ostringstream csv;
  csv << "parameter,value,epsilon,seed\n";
  double best_x = o.param_min;
  double best_v = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < count; ++i) {
    double x = o.param_min + static_cast<double>(i) * o.param_step;
    std::vector<double> coefs = b.sweep_coefs(x);
    if (coefs.size() != basis_values.size())
      throw ConfigError("sweep: coefficient count does not match the basis");
    double v = 0.0;
    for (std::size_t j = 0; j < coefs.size(); ++j) v += coefs[j] * basis_values[j];
    BoundBreakdown bb =
        epsilon_N(bound_inputs(tree, b, b.functional(x, tf).meta, A, B, tf_opt));
    csv << fmt(x) << ',' << fmt(v) << ',' << fmt(bb.total) << ',' << o.seed << '\n';
    if (v > best_v) {
      best_v = v;
      best_x = x;
    }
  }

  std::ostream* summary = &err;
  if (!o.out_path.empty()) {
    std::ofstream f(o.out_path);
    if (!f) throw ConfigError("sweep: cannot write '" + o.out_path + "'");
    f << csv.str();
    summary = &out;
    out << "wrote " << o.out_path << '\n';
  } else {
    out << csv.str();
  }
  *summary << "argmax " << fmt(best_x) << '\n';
  *summary << "maximum " << fmt(best_v) << '\n';
  return 0;
}

int cmd_mc(const Options& o, std::ostream& out) {
  ModelBundle b = bundle_of(o);
  if (o.sims < 2) throw ConfigError("mc: need at least 2 simulations");
  double param = param_of(o, b);
  out << "model " << b.id << '\n';
  if (!b.param_name.empty()) out << "parameter " << fmt(param) << '\n';
  McEstimate est;
  auto t0 = std::chrono::steady_clock::now();
  if (b.variant == BoundVariant::Horizon) {
    double tf = horizon_units(o, b);
    if (!(tf > 0.0)) throw ConfigError("mc: this model needs --horizon (years)");
    int jumps = resolve_jumps(o, b);
    out << "horizon-years " << fmt(tf / b.units_per_year) << '\n';
    out << "jumps " << jumps << '\n';
    CostFunctional fn = b.functional(param, tf);
    est = mc_horizon_functional(b.model, b.x0, fn, tf, jumps, o.sims, o.seed);
  } else {
    if (o.jumps <= 0) throw ConfigError("mc: --jumps is required for this model");
    out << "jumps " << o.jumps << '\n';
    CostFunctional fn = b.functional(param, 0.0);
    est = mc_functional(b.model, b.x0, fn, o.jumps, o.sims, o.seed);
  }
  double secs = seconds_since(t0);
  out << "mean " << fmt(est.mean) << '\n';
  out << "stderr " << fmt(est.stderr_) << '\n';
  out << "n-sims " << est.n_sims << '\n';
  out << "seed " << est.seed << '\n';
  out << "mc-seconds " << fmt(secs) << '\n';
  return 0;
}

int cmd_bound(const Options& o, std::ostream& out) {
  ModelBundle b = bundle_of(o);
  QuantizationTree tree = tree_of(o, b);
  double param = param_of(o, b);
  double A = o.A > 0.0 ? o.A : default_smoothing_A(tree);
  double B = o.B > 0.0 ? o.B : A;
  std::optional<double> tf_opt;
  double tf = 0.0;
  if (b.variant == BoundVariant::Horizon) {
    tf = horizon_units(o, b);
    if (!(tf > 0.0)) throw ConfigError("bound: this model needs --horizon (years)");
    tf_opt = tf;
  }
  CostFunctional fn = b.functional(param, tf);
  LipschitzMeta mm = effective_meta(b.model, tf_opt);
  require_finite(mm.C_lambda, "C_lambda");
  require_finite(mm.lip_lambda, "lip_lambda");
  require_finite(mm.C_tstar, "C_tstar");
  require_finite(mm.lip_tstar, "lip_tstar");
  require_finite(mm.lip_Q, "lip_Q");
  require_finite(fn.meta.C_l, "C_l");
  require_finite(fn.meta.lip_l_1, "lip_l_1");
  require_finite(fn.meta.lip_l_2, "lip_l_2");
  require_finite(fn.meta.C_c, "C_c");
  require_finite(fn.meta.lip_c_star, "lip_c_star");
  BoundInputs in = bound_inputs(tree, b, fn.meta, A, B, tf_opt);
  BoundBreakdown bb = epsilon_N(in);
  out << render_breakdown(bb);
  if (!o.out_path.empty()) {
    std::ofstream f(o.out_path);
    if (!f) throw ConfigError("bound: cannot write '" + o.out_path + "'");
    f << render_breakdown_csv(bb);
    out << "wrote " << o.out_path << '\n';
  }
  return 0;
}

int cmd_estimate_n(const Options& o, std::ostream& out) {
  ModelBundle b = bundle_of(o);
  double tf = horizon_units(o, b);
  if (!(tf > 0.0)) throw ConfigError("estimate-n: --horizon (years) is required");
  long long sims = o.sims_given ? o.sims : 100000;
  if (sims < 1) throw ConfigError("estimate-n: need at least one simulation");
  int cap = o.jumps > 0 ? o.jumps : kDefaultJumpCap;
  Rng rng(derive_seed(o.seed, kJumpEstimateLabel));
  JumpCountEstimate est = estimate_N(b.model, b.x0, tf, o.target_prob, sims, rng, cap);
  out << "model " << b.id << '\n';
  out << "horizon-years " << fmt(tf / b.units_per_year) << '\n';
  out << "target-prob " << fmt(est.target_prob) << '\n';
  out << "jumps " << est.n << '\n';
  out << "tail-probability " << fmt(est.p_at_n) << '\n';
  out << "capped " << (est.capped ? "yes" : "no") << '\n';
  out << "seed " << o.seed << '\n';
  return 0;
}

std::vector<std::pair<std::string, double>> model_defaults(const std::string& id) {
  std::vector<std::pair<std::string, double>> kv;
  if (id == "repair-workshop") {
    RepairWorkshopParams p;
    kv = {{"weibull_alpha", p.weibull_alpha},   {"weibull_beta", p.weibull_beta},
          {"work_age_limit", p.work_age_limit}, {"shop_days", p.shop_days},
          {"discount_rate", p.discount_rate},   {"horizon_days", p.horizon}};
  } else if (id == "corrosion") {
    CorrosionParams p;
    for (int i = 0; i < 3; ++i) {
      std::string n = std::to_string(i + 1);
      const CorrosionEnv& e = p.env[static_cast<std::size_t>(i)];
      kv.emplace_back("lambda" + n, e.lambda);
      kv.emplace_back("eta" + n, e.eta);
      kv.emplace_back("rho_min" + n, e.rho_min);
      kv.emplace_back("rho_max" + n, e.rho_max);
    }
    kv.emplace_back("horizon_hours", p.horizon);
  } else if (id == "toy-constant") {
    ToyConstantParams p;
    kv = {{"lambda0", p.lambda0}, {"speed", p.speed}, {"exit0", p.exit0}, {"reset", p.reset}};
  }
  return kv;
}

int cmd_show_config(const Options& o, std::ostream& out) {
  std::string id = o.model.empty() ? "repair-workshop" : o.model;
  ModelBundle b = make_bundle(id, o.overrides);  // validates the id and overrides
  Options d;
  out << "# defaults; any key can be set in a config file (key = value) and is\n";
  out << "# overridden by the matching command-line flag. one include level\n";
  out << "# (include = path) is allowed.\n";
  out << "model = " << id << '\n';
  out << "grid-points = " << d.grid_points << '\n';
  out << "samples = " << d.samples << '\n';
  out << "jumps = " << d.jumps << "            # <= 0: derived from horizon and target-prob\n";
  out << "horizon = " << fmt(b.default_horizon / b.units_per_year)
      << "       # years; this model's default\n";
  out << "target-prob = " << fmt(d.target_prob) << '\n';
  out << "A = " << fmt(d.A) << "             # <= 0: derived from the grid's distortion\n";
  out << "B = " << fmt(d.B) << "             # <= 0: same as A\n";
  out << "norm-p = " << fmt(d.norm_p) << '\n';
  out << "seed = " << d.seed << '\n';
  out << "sims = " << d.sims << '\n';
  out << "param = " << fmt(b.default_param);
  if (!b.param_name.empty()) out << "      # " << b.param_name;
  out << '\n';
  out << "param-min = " << fmt(d.param_min) << '\n';
  out << "param-max = " << fmt(d.param_max) << '\n';
  out << "param-step = " << fmt(d.param_step) << '\n';
  out << "values = " << (d.print_values ? 1 : 0) << '\n';
  out << "# model parameters for " << id << " (override as model.<name> = value)\n";
  for (const auto& [k, v] : model_defaults(id)) out << "model." << k << " = " << fmt(v) << '\n';
  return 0;
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"expectation solver for piecewise-deterministic Markov processes"};
  app.require_subcommand(1);

  std::map<const CLI::App*, std::map<std::string, CLI::Option*>> flags;
  auto add_common = [&](CLI::App* sub) {
    std::map<std::string, CLI::Option*>& m = flags[sub];
    m["model"] = sub->add_option("--model", o.model, "model id");
    sub->add_option("--config", o.config_path, "flat key=value config file");
    m["grid"] = sub->add_option("--grid", o.grid_path, "grid file to load");
    m["out"] = sub->add_option("--out", o.out_path, "output path");
    m["grid-points"] = sub->add_option("--grid-points", o.grid_points, "codebook size per step");
    m["samples"] = sub->add_option("--samples", o.samples, "training sample count");
    m["jumps"] = sub->add_option("--jumps", o.jumps, "jump-horizon step count");
    m["horizon"] = sub->add_option("--horizon", o.horizon_years, "deterministic horizon, years");
    m["target-prob"] =
        sub->add_option("--target-prob", o.target_prob, "tail probability for the jump count");
    m["A"] = sub->add_option("--A", o.A, "boundary smoothing steepness");
    m["B"] = sub->add_option("--B", o.B, "horizon envelope steepness");
    m["norm-p"] = sub->add_option("--norm-p", o.norm_p, "quantization norm exponent");
    m["seed"] = sub->add_option("--seed", o.seed, "root seed for all streams");
    m["sims"] = sub->add_option("--sims", o.sims, "simulation count");
    m["param"] = sub->add_option("--param", o.param, "functional parameter");
    m["param-min"] = sub->add_option("--param-min", o.param_min, "sweep start");
    m["param-max"] = sub->add_option("--param-max", o.param_max, "sweep end");
    m["param-step"] = sub->add_option("--param-step", o.param_step, "sweep step");
    m["values"] = sub->add_flag("--values", o.print_values, "print per-step value arrays");
  };

  CLI::App* quantize =
      app.add_subcommand("quantize", "train per-step codebooks and write a grid file");
  CLI::App* evaluate =
      app.add_subcommand("evaluate", "run the backward recursion on a grid file");
  CLI::App* sweep =
      app.add_subcommand("sweep", "evaluate a functional family across a parameter range");
  CLI::App* mc = app.add_subcommand("mc", "Monte Carlo reference estimate");
  CLI::App* bound = app.add_subcommand("bound", "print the a-priori error bound breakdown");
  CLI::App* estn =
      app.add_subcommand("estimate-n", "pick a jump count covering a deterministic horizon");
  CLI::App* showcfg = app.add_subcommand("show-config", "print every default as a config file");
  for (CLI::App* sub : {quantize, evaluate, sweep, mc, bound, estn, showcfg}) add_common(sub);

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  CLI::App* active = app.get_subcommands().front();
  try {
    apply_config(o, flags.at(active));
    const std::string name = active->get_name();
    if (o.sims_given == false && flags.at(active).at("sims")->count() > 0) o.sims_given = true;
    if (name == "quantize") return cmd_quantize(o, out);
    if (name == "evaluate") return cmd_evaluate(o, out);
    if (name == "sweep") return cmd_sweep(o, out, err);
    if (name == "mc") return cmd_mc(o, out);
    if (name == "bound") return cmd_bound(o, out);
    if (name == "estimate-n") return cmd_estimate_n(o, out);
    if (name == "show-config") return cmd_show_config(o, out);
    err << "error: unknown command '" << name << "'\n";
    return 2;
  } catch (const GridMismatch& e) {
    err << "error: " << e.what() << '\n';
    return 3;
  } catch (const ModeNotRepresented& e) {
    err << "error: " << e.what() << '\n';
    return 3;
  } catch (const NumericFailure& e) {
    err << "error: " << e.what() << '\n';
    return 4;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace pdmpq::cli
