#include "bath_oracles.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <boost/math/quadrature/ooura_fourier_integrals.hpp>

namespace adec::oracle {

long double spectrum(long double omega, const BathSpec& bath) {
  const long double pi = std::numbers::pi_v<long double>;
  const long double l = bath.lambda_cutoff;
  const long double j0 = 2.0L * bath.mass * bath.gamma / pi;
  const long double cut = bath.cutoff == CutoffKind::lorentz_drude ? l * l / (l * l + omega * omega)
                                                                    : std::exp(-omega / l);
  if (bath.omega_th == 0.0) return j0 * omega * cut;
  if (omega == 0.0L) return j0 * cut * bath.omega_th;
  return j0 * cut * omega / std::tanh(omega / static_cast<long double>(bath.omega_th));
}

double noise_ooura(double tau, const BathSpec& bath) {
  if (!(tau > 0.0)) throw std::invalid_argument("noise_ooura needs tau > 0");
  boost::math::quadrature::ooura_fourier_cos<double> integrator(1e-13, 12);
  auto f = [&](double w) { return static_cast<double>(spectrum(w, bath)); };
  return integrator.integrate(f, tau).first;
}

double dissipation_ooura(double tau, const BathSpec& bath) {
  if (!(tau > 0.0)) throw std::invalid_argument("dissipation_ooura needs tau > 0");
  BathSpec cold = bath;
  cold.omega_th = 0.0;
  boost::math::quadrature::ooura_fourier_sin<double> integrator(1e-13, 12);
  auto f = [&](double w) { return static_cast<double>(spectrum(w, cold)); };
  return integrator.integrate(f, tau).first;
}

double noise_at_zero_trapezoid(const BathSpec& bath, long panels) {
  const long double b = 60.0L * bath.lambda_cutoff;
  const long double h = b / panels;
  long double sum = 0.5L * (spectrum(0.0L, bath) + spectrum(b, bath));
  for (long i = 1; i < panels; ++i) sum += spectrum(h * i, bath);
  return static_cast<double>(sum * h);
}

double noise_matsubara(double tau, const BathSpec& bath, int terms) {
  const long double pi = std::numbers::pi_v<long double>;
  const long double l = bath.lambda_cutoff;
  const long double w = bath.omega_th;
  const long double mg = bath.mass * bath.gamma;
  long double sum = mg * l * l * std::cos(l / w) / std::sin(l / w) * std::exp(-l * tau);
  for (int k = 1; k <= terms; ++k) {
    const long double nu = pi * k * w;
    const long double term = 2.0L * mg * l * l * w * nu * std::exp(-nu * tau) / (nu * nu - l * l);
    sum += term;
    if (term == 0.0L) break;
  }
  return static_cast<double>(sum);
}

}  // namespace adec::oracle
