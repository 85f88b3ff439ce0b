#pragma once

#include "adec/bath_kernels.hpp"

// Reference evaluations for the bath kernels. Each one takes a different route
// from the library: Boost's Ooura transform applied to the full thermal
// spectrum, brute-force trapezoid sums, or the Matsubara series.
namespace adec::oracle {

/// J(w) coth(w / omega_th), evaluated in long double from the defining formula.
long double spectrum(long double omega, const BathSpec& bath);

/// nu(tau) for tau > 0 via boost::math::quadrature::ooura_fourier_cos on J coth.
double noise_ooura(double tau, const BathSpec& bath);
/// eta_d(tau) for tau > 0 via boost::math::quadrature::ooura_fourier_sin on J.
double dissipation_ooura(double tau, const BathSpec& bath);

/// nu(0) = int_0^inf J coth by an n-panel trapezoid on [0, 60 lambda].
/// Only meaningful for the exponential cutoff (Lorentz-Drude diverges).
double noise_at_zero_trapezoid(const BathSpec& bath, long panels = 1000000);

/// Full Lorentz-Drude nu(tau) as a Matsubara sum, tau > 0, omega_th > 0.
double noise_matsubara(double tau, const BathSpec& bath, int terms = 200000);

}  // namespace adec::oracle
