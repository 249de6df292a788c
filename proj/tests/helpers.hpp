#pragma once

#include <cstdlib>
#include <filesystem>
#include <string>

#include <unistd.h>

#include "pdmpq/functional.hpp"
#include "pdmpq/model.hpp"
#include "pdmpq/models.hpp"
#include "pdmpq/quantizer.hpp"

namespace testutil {

/// Scratch directory unique to one test process, removed on destruction.
struct TempDir {
  std::filesystem::path path;

  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("pdmpq-test-" + std::to_string(static_cast<long>(::getpid())) + "-" +
            std::to_string(counter()++));
    std::filesystem::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
  std::string file(const std::string& name) const { return (path / name).string(); }

 private:
  static int& counter() {
    static int n = 0;
    return n;
  }
};

inline pdmpq::CostFunctional zero_functional() {
  pdmpq::CostFunctional fn;
  fn.label = "zero";
  return fn;
}

/// l == level, c == jump_cost, with exact running integral.
inline pdmpq::CostFunctional constant_functional(double level, double jump_cost) {
  pdmpq::CostFunctional fn;
  fn.label = "constant";
  fn.running_cost = [level](const pdmpq::State&) { return level; };
  fn.running_integral = [level](const pdmpq::State&, double u) { return level * u; };
  if (jump_cost != 0.0) fn.boundary_cost = [jump_cost](const pdmpq::State&) { return jump_cost; };
  fn.meta.C_l = std::fabs(level);
  fn.meta.C_c = std::fabs(jump_cost);
  return fn;
}

inline pdmpq::QuantizationTree small_toy_tree(int n_steps, int grid, long long samples,
                                              std::uint64_t seed, double lambda0 = 1.0) {
  pdmpq::ModelBundle b = pdmpq::make_bundle("toy-constant", {{"lambda0", lambda0}});
  pdmpq::ClvqConfig cfg;
  cfg.grid_size = grid;
  cfg.training_samples = samples;
  cfg.seed = seed;
  return pdmpq::train(b.model, b.x0, n_steps, cfg);
}

}  // namespace testutil
