#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace pdmpq {

inline constexpr int kMaxCoords = 6;

/// Hybrid point of a piecewise-deterministic process: a discrete mode plus
/// the Euclidean coordinates of the mode's chart. Fixed capacity keeps states
/// on the stack through simulation loops.
struct State {
  int mode = 0;
  int dim = 0;
  std::array<double, kMaxCoords> c{};

  double& operator[](int i) { return c[static_cast<std::size_t>(i)]; }
  double operator[](int i) const { return c[static_cast<std::size_t>(i)]; }

  bool same_point(const State& o) const {
    if (mode != o.mode || dim != o.dim) return false;
    for (int i = 0; i < dim; ++i)
      if (c[static_cast<std::size_t>(i)] != o.c[static_cast<std::size_t>(i)]) return false;
    return true;
  }
};

inline State make_state(int mode, std::initializer_list<double> coords) {
  State s;
  s.mode = mode;
  s.dim = static_cast<int>(coords.size());
  int i = 0;
  for (double v : coords) s.c[static_cast<std::size_t>(i++)] = v;
  return s;
}

/// Distance between two points of the same mode, p-norm over coordinates.
/// Points in different modes are never comparable; callers must branch on the
/// mode before calling (cross-mode pairs are handled as a categorical
/// mismatch, not as an infinite float).
inline double coord_distance(const State& a, const State& b, double p) {
  double acc = 0.0;
  if (p == 2.0) {
    for (int i = 0; i < a.dim; ++i) {
      double d = a[i] - b[i];
      acc += d * d;
    }
    return std::sqrt(acc);
  }
  if (p == 1.0) {
    for (int i = 0; i < a.dim; ++i) acc += std::fabs(a[i] - b[i]);
    return acc;
  }
  for (int i = 0; i < a.dim; ++i) acc += std::pow(std::fabs(a[i] - b[i]), p);
  return std::pow(acc, 1.0 / p);
}

/// Deterministic time to the boundary of the current mode's domain along the
/// flow. `unbounded` encodes "the flow never exits" as a category, keeping
/// floating infinities out of arithmetic.
struct ExitTime {
  double value = 0.0;
  bool unbounded = false;

  static ExitTime finite(double t) { return ExitTime{t, false}; }
  static ExitTime never() { return ExitTime{0.0, true}; }
};

}  // namespace pdmpq
