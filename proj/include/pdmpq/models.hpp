#pragma once

#include <array>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "pdmpq/bounds.hpp"
#include "pdmpq/functional.hpp"
#include "pdmpq/model.hpp"

namespace pdmpq {

/// Machine that alternates between service, repair after a breakdown, and
/// scheduled maintenance. Ages are in days; the state is (age in mode, clock).
struct RepairWorkshopParams {
  double weibull_alpha = 2.0;
  double weibull_beta = 600.0;
  double work_age_limit = 365.0;  ///< forced-maintenance age, days
  double shop_days = 7.0;         ///< fixed duration of repair and maintenance
  double discount_rate = 0.03 / 365.0;  ///< per day
  double horizon = 5.0 * 365.0;         ///< days
};

/// One storage environment of the corrosion model. Times in hours, thickness
/// in millimetres.
struct CorrosionEnv {
  double lambda = 0.0;   ///< exponential rate of the environment duration
  double eta = 0.0;      ///< transition period of the degradation law
  double rho_min = 0.0;  ///< corrosion-rate interval
  double rho_max = 0.0;
};

/// Structure cycling through workshop, operation, and dry-dock. The state is
/// (thickness loss d, time in mode s, corrosion rate rho, clock).
struct CorrosionParams {
  std::array<CorrosionEnv, 3> env{{{1.0 / 17520.0, 30000.0, 1e-6, 1e-5},
                                   {1.0 / 131400.0, 200000.0, 1e-7, 1e-6},
                                   {1.0 / 8760.0, 40000.0, 1e-6, 1e-5}}};
  double horizon = 18.0 * 8760.0;  ///< hours
};

/// Single-mode model with constant rate, unit-speed linear flow, a fixed exit
/// level, and a kernel that resets to a fixed point. Every characteristic has
/// a closed form, which makes exact low-N evaluation possible in tests.
struct ToyConstantParams {
  double lambda0 = 1.0;
  double speed = 1.0;
  double exit0 = 1.0;  ///< exit time from the reset point
  double reset = 0.0;
};

PdmpModel repair_workshop_model(const RepairWorkshopParams& p = {});
State repair_workshop_start();

/// Discounted benefit of running the machine at setting x: earn r(x) = x in
/// service, pay p(x) = 100 x^2 during repair and q(x) = 5 during maintenance,
/// all truncated at the horizon. Boundary cost is zero.
CostFunctional repair_benefit_functional(const RepairWorkshopParams& p, double x);

/// The three mode indicator functionals e^{-rho t}·1{mode}, whose linear
/// combination with coefficients (x, -100 x^2, -5) equals the benefit
/// functional. One backward pass per basis element serves a whole sweep.
std::array<CostFunctional, 3> repair_mode_basis(const RepairWorkshopParams& p);
std::array<double, 3> repair_setting_coefs(double x);

PdmpModel corrosion_model(const CorrosionParams& p = {});
State corrosion_start(const CorrosionParams& p = {});

/// Mean thickness lost while in environment 2, truncated at the horizon.
CostFunctional corrosion_loss_functional(const CorrosionParams& p);

/// Degradation law: thickness lost after s hours in mode m at rate rho.
double corrosion_dm(const CorrosionParams& p, int mode, double rho, double s);

PdmpModel toy_constant_model(const ToyConstantParams& p = {});
State toy_constant_start(const ToyConstantParams& p = {});

/// Effective model constants for the bound engine: models without a finite
/// exit-time sup borrow the horizon for C_tstar. Throws ConfigError when
/// neither is finite.
LipschitzMeta effective_meta(const PdmpModel& model, std::optional<double> horizon);

/// Registered model plus everything the CLI needs to drive it: start point,
/// parameterized functional family, default horizon and unit conversion.
struct ModelBundle {
  std::string id;
  PdmpModel model;
  State x0;
  double units_per_year = 1.0;  ///< internal time units per calendar year
  double default_horizon = 0.0;  ///< internal units
  std::string param_name;
  double default_param = 0.0;
  BoundVariant variant = BoundVariant::Plain;
  std::function<CostFunctional(double param, double horizon)> functional;
  /// When set, the value at any parameter is the sweep_coefs(param)-weighted
  /// combination of the basis values, so a sweep costs a handful of backward
  /// passes instead of one per parameter.
  std::function<std::vector<CostFunctional>(double horizon)> sweep_basis;
  std::function<std::vector<double>(double param)> sweep_coefs;
};

/// Builds a bundle by id ("repair-workshop", "corrosion", "toy-constant"),
/// applying numeric parameter overrides keyed like "repair.beta". Throws
/// ConfigError on unknown ids or keys.
ModelBundle make_bundle(const std::string& id,
                        const std::map<std::string, double>& overrides = {});

std::vector<std::string> registered_model_ids();

}  // namespace pdmpq
