#pragma once

#include <functional>

namespace pdmpq {

/// Composite Simpson rule with panel doubling. Starts at `panels` panels and
/// doubles until successive estimates agree to `rel_tol` relatively (or
/// `abs_floor` absolutely, for integrals near zero), capped at `max_panels`.
/// Throws NumericFailure if the cap is reached without agreement.
double integrate_simpson(const std::function<double(double)>& f, double a, double b,
                         int panels = 64, double rel_tol = 1e-8,
                         int max_panels = 4096, double abs_floor = 1e-14);

}  // namespace pdmpq
