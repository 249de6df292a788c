#include "pdmpq/quadrature.hpp"

#include <cmath>

#include "pdmpq/errors.hpp"

namespace pdmpq {

namespace {

double simpson_fixed(const std::function<double(double)>& f, double a, double b, int panels) {
  double h = (b - a) / panels;
  double acc = f(a) + f(b);
  for (int i = 1; i < panels; ++i) {
    double w = (i % 2 == 1) ? 4.0 : 2.0;
    acc += w * f(a + i * h);
  }
  return acc * h / 3.0;
}

}  // namespace

double integrate_simpson(const std::function<double(double)>& f, double a, double b,
                         int panels, double rel_tol, int max_panels, double abs_floor) {
  if (b <= a) return 0.0;
  double prev = simpson_fixed(f, a, b, panels);
  for (int n = panels * 2; n <= max_panels; n *= 2) {
    double cur = simpson_fixed(f, a, b, n);
    double diff = std::fabs(cur - prev);
    if (diff <= rel_tol * std::fabs(cur) || diff <= abs_floor) return cur;
    prev = cur;
  }
  throw NumericFailure("quadrature did not converge within panel cap");
}

}  // namespace pdmpq
