#pragma once

#include <vector>

#include "adec/perturbative_dynamics.hpp"

// Adaptive Runge-Kutta-Fehlberg 7(8) integrations of the equations of motion.
namespace adec::oracle {

/// Full nonlinear system x'' + w0^2 x - 3 alpha w0^2 x^2 - wc y' = 0,
/// y'' + w0^2 y + wc x' = 0, sampled at the given ascending times (from 0).
std::vector<PhasePoint> nonlinear_trajectory(const OscillatorSpec& spec, const std::vector<double>& times,
                                             double tol = 1e-12);

/// First-order correction (x1, y1) with zero initial data, driven by
/// 3 w0^2 x0(t)^2 where x0 is integrated alongside from the configured initial
/// data. Returns PhasePoints holding (x1, y1, x1', y1').
std::vector<PhasePoint> first_order_trajectory(const OscillatorSpec& spec, const std::vector<double>& times,
                                               double tol = 1e-12);

}  // namespace adec::oracle
