#pragma once

#include "adec/bath_kernels.hpp"
#include "adec/trig_series.hpp"

// Reference values for h(t) and F_H(t) by two routes that avoid the library's
// kernel evaluator and its tau quadrature.
namespace adec::oracle {

struct RateValues {
  double h = 0.0;
  double f_heating = 0.0;
};

/// Spectral route. With nu(tau) = int_0^inf S(w) cos(w tau) dw and a weight
/// that is a finite trigonometric series, the tau integrals are elementary:
///   h(t)   = int_0^inf S(w) int_0^t cos(w tau) weight(tau) dtau dw
///   F_H(t) = int_0^inf S(w) int_0^t (t - tau) cos(w tau) weight(tau) dtau dw
/// The w integral is adaptive Gauss-Kronrod up to a cut, then Ooura transforms
/// on the oscillatory tail and exp-sinh on its smooth part.
RateValues spectral_rate(const TrigSeries& weight, const BathSpec& bath, double t, double rel_tol = 1e-11);

/// Brute-force nested quadrature: tanh-sinh in tau over (0, t) with nu(tau)
/// from a Boost Ooura cosine transform of the full thermal spectrum.
double nested_rate(const TrigSeries& weight, const BathSpec& bath, double t, double rel_tol = 1e-8);

}  // namespace adec::oracle
