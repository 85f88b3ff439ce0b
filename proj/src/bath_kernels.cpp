#include "adec/bath_kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/special_functions/expint.hpp>

#include "adec/errors.hpp"
#include "adec/fourier_quadrature.hpp"

namespace adec {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

// J(w) / w without the (2 m gamma / pi) prefactor.
double cutoff_factor(double omega, const BathSpec& bath) {
  const double l = bath.lambda_cutoff;
  if (bath.cutoff == CutoffKind::lorentz_drude) return l * l / (l * l + omega * omega);
  return std::exp(-omega / l);
}

double prefactor(const BathSpec& bath) { return 2.0 * bath.mass * bath.gamma / kPi; }

// x (coth x - 1) = 2x / (e^{2x} - 1), tending to 1 at x = 0.
double bose_weight(double x) {
  if (x < 1e-8) return 1.0 - x;
  if (x > 300.0) return 2.0 * x * std::exp(-2.0 * x);
  return 2.0 * x / std::expm1(2.0 * x);
}

// J(w) (coth(w/W) - 1), finite at w = 0.
double thermal_excess_spectrum(double omega, const BathSpec& bath) {
  return prefactor(bath) * cutoff_factor(omega, bath) * bath.omega_th * bose_weight(omega / bath.omega_th);
}

// e^{-z} Ei(z) - e^{z} E1(z) for z > 0.
double ei_e1_combination(double z) {
  if (z > 40.0) {
    // Asymptotic series 2 sum_{n odd} n! / z^{n+1}; terms shrink until n ~ z.
    double sum = 0.0;
    double term = 1.0 / (z * z);
    for (int n = 1; n < 60; n += 2) {
      sum += term;
      const double next = term * (n + 1.0) * (n + 2.0) / (z * z);
      if (next < 1e-18 * sum || next > term) break;
      term = next;
    }
    return 2.0 * sum;
  }
  return std::exp(-z) * boost::math::expint(z) - std::exp(z) * boost::math::expint(1, z);
}

}  // namespace

void BathSpec::validate() const {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw DomainError("bath: gamma must be positive, got " + std::to_string(gamma));
  if (!(lambda_cutoff > 0.0) || !std::isfinite(lambda_cutoff))
    throw DomainError("bath: lambda_cutoff must be positive, got " + std::to_string(lambda_cutoff));
  if (!(omega_th >= 0.0) || !std::isfinite(omega_th))
    throw DomainError("bath: omega_th must be non-negative, got " + std::to_string(omega_th));
  if (!(mass > 0.0) || !std::isfinite(mass)) throw DomainError("bath: mass must be positive, got " + std::to_string(mass));
}

double spectral_density(double omega, const BathSpec& bath) {
  if (!(omega >= 0.0)) throw DomainError("spectral_density: omega must be non-negative");
  return prefactor(bath) * omega * cutoff_factor(omega, bath);
}

double thermal_spectrum(double omega, const BathSpec& bath) {
  if (!(omega >= 0.0)) throw DomainError("thermal_spectrum: omega must be non-negative");
  if (bath.omega_th == 0.0) return spectral_density(omega, bath);
  const double x = omega / bath.omega_th;
  const double x_coth_x = x < 1e-4 ? 1.0 + x * x / 3.0 : x / std::tanh(x);
  return prefactor(bath) * cutoff_factor(omega, bath) * bath.omega_th * x_coth_x;
}

struct KernelEvaluator::Quadrature {
  boost::math::quadrature::exp_sinh<double> half_line;
};

KernelEvaluator::KernelEvaluator(BathSpec bath, double rel_tol)
    : bath_(bath), rel_tol_(rel_tol), quad_(std::make_unique<Quadrature>()) {
  bath_.validate();
  if (!(rel_tol > 0.0)) throw DomainError("KernelEvaluator: rel_tol must be positive");
  scale_ = bath_.mass * bath_.gamma * bath_.lambda_cutoff * std::max(bath_.lambda_cutoff, bath_.omega_th);
  if (bath_.omega_th > 0.0) thermal_at_zero_ = noise_thermal(0.0);
}

KernelEvaluator::~KernelEvaluator() = default;
KernelEvaluator::KernelEvaluator(KernelEvaluator&&) noexcept = default;
KernelEvaluator& KernelEvaluator::operator=(KernelEvaluator&&) noexcept = default;

double KernelEvaluator::noise_zero_temperature(double tau) const {
  tau = std::abs(tau);
  const double l = bath_.lambda_cutoff;
  const double mg = bath_.mass * bath_.gamma;
  if (bath_.cutoff == CutoffKind::lorentz_drude) {
    if (tau == 0.0) return kInf;
    return -(mg * l * l / kPi) * ei_e1_combination(l * tau);
  }
  const double s = l * tau;
  const double d = 1.0 + s * s;
  return prefactor(bath_) * l * l * (1.0 - s * s) / (d * d);
}

bool KernelEvaluator::matsubara_usable(double tau) const {
  if (bath_.cutoff != CutoffKind::lorentz_drude || bath_.omega_th == 0.0) return false;
  if (kPi * bath_.omega_th * tau < 1.0) return false;
  // Keep away from the poles nu_k = lambda, where the cot term and one series
  // term cancel.
  const double ratio = bath_.lambda_cutoff / (kPi * bath_.omega_th);
  const double nearest = std::round(ratio);
  return nearest < 1.0 || std::abs(ratio - nearest) > 1e-3 * std::max(ratio, 1.0);
}

KernelEstimate KernelEvaluator::full_by_matsubara(double tau) const {
  const double l = bath_.lambda_cutoff;
  const double w = bath_.omega_th;
  const double mg = bath_.mass * bath_.gamma;
  double full = mg * l * l / std::tan(l / w) * std::exp(-l * tau);
  double series = 0.0;
  for (int k = 1; k < 100000; ++k) {
    const double nu_k = kPi * k * w;
    const double term = 2.0 * mg * l * l * w * nu_k * std::exp(-nu_k * tau) / (nu_k * nu_k - l * l);
    series += term;
    if (nu_k > 2.0 * l && std::abs(term) <= 1e-17 * std::abs(series)) break;
  }
  return {full + series, 1e-15 * (std::abs(full) + std::abs(series))};
}

KernelEstimate KernelEvaluator::noise_thermal(double tau) const {
  tau = std::abs(tau);
  if (bath_.omega_th == 0.0) return {0.0, 0.0};
  if (tau > 0.0 && matsubara_usable(tau)) {
    const KernelEstimate full = full_by_matsubara(tau);
    const double zero_t = noise_zero_temperature(tau);
    return {full.value - zero_t, full.abs_error + 1e-15 * std::abs(zero_t)};
  }

  const BathSpec& b = bath_;
  auto excess = [&b](double omega) { return thermal_excess_spectrum(omega, b); };
  const double floor =
      1e-13 * bath_.mass * bath_.gamma * bath_.omega_th * std::max(bath_.lambda_cutoff, bath_.omega_th);
  // The remainder is flat to O(tau * max(lambda, omega_th)) near zero, where
  // the Fourier transform would need nodes at enormous frequencies.
  if (tau > 0.0 && tau * std::max(bath_.lambda_cutoff, bath_.omega_th) < 1e-9 && thermal_at_zero_.abs_error >= 0.0)
    return thermal_at_zero_;
  if (tau == 0.0) {
    double err = 0.0;
    const double value = quad_->half_line.integrate(excess, rel_tol_, &err);
    if (!(err <= std::max(1e-8 * std::abs(value), floor)))
      throw NumericError("noise kernel thermal part at tau = 0 did not converge", err);
    return {value, err};
  }
  const auto r = fourier_integral(excess, tau, FourierKind::cosine, rel_tol_, floor);
  const double err = std::isfinite(r.abs_error) ? r.abs_error : std::abs(r.value);
  if (!(err <= std::max(1e-8 * std::abs(r.value), floor)))
    throw NumericError("noise kernel thermal part at tau = " + std::to_string(tau) + " did not converge", err);
  return {r.value, err};
}

KernelEstimate KernelEvaluator::noise(double tau) const {
  tau = std::abs(tau);
  if (tau > 0.0 && matsubara_usable(tau)) return full_by_matsubara(tau);
  const double zero_t = noise_zero_temperature(tau);
  if (std::isinf(zero_t)) return {kInf, 0.0};
  const KernelEstimate thermal = noise_thermal(tau);
  return {zero_t + thermal.value, thermal.abs_error + 1e-15 * std::abs(zero_t)};
}

KernelEstimate KernelEvaluator::dissipation(double tau) const {
  if (!(tau >= 0.0)) throw DomainError("dissipation: tau must be non-negative; use dissipation_signed");
  if (tau == 0.0) return {0.0, 0.0};
  const BathSpec& b = bath_;
  auto density = [&b](double omega) { return spectral_density(omega, b); };
  const double floor = 1e-13 * bath_.mass * bath_.gamma * bath_.lambda_cutoff * bath_.lambda_cutoff;
  const auto r = fourier_integral(density, tau, FourierKind::sine, rel_tol_, floor);
  const double err = std::isfinite(r.abs_error) ? r.abs_error : std::abs(r.value);
  if (!(err <= std::max(1e-8 * std::abs(r.value), floor)))
    throw NumericError("dissipation kernel at tau = " + std::to_string(tau) + " did not converge", err);
  return {r.value, err};
}

KernelEstimate KernelEvaluator::dissipation_signed(double tau) const {
  if (tau < 0.0) {
    const auto r = dissipation(-tau);
    return {-r.value, r.abs_error};
  }
  return dissipation(tau);
}

double noise_kernel(double tau, const BathSpec& bath) { return KernelEvaluator(bath).noise(tau).value; }

double dissipation_kernel(double tau, const BathSpec& bath) {
  return KernelEvaluator(bath).dissipation_signed(tau).value;
}

double dissipation_kernel_closed_form(double tau, const BathSpec& bath) {
  bath.validate();
  const double sign = tau < 0.0 ? -1.0 : 1.0;
  tau = std::abs(tau);
  const double l = bath.lambda_cutoff;
  const double mg = bath.mass * bath.gamma;
  if (bath.cutoff == CutoffKind::lorentz_drude) return tau == 0.0 ? 0.0 : sign * mg * l * l * std::exp(-l * tau);
  const double s = l * tau;
  return sign * (4.0 * mg / kPi) * l * l * l * tau / ((1.0 + s * s) * (1.0 + s * s));
}

double noise_kernel_high_temperature(double tau, const BathSpec& bath) {
  bath.validate();
  return bath.mass * bath.gamma * bath.omega_th * bath.lambda_cutoff * std::exp(-bath.lambda_cutoff * std::abs(tau));
}

namespace {

// Four-point Lagrange interpolation on a uniform grid. Stencils that would
// include a non-finite sample are shifted right.
double interpolate(const std::vector<double>& tau, const std::vector<double>& values, double t) {
  const std::size_t n = tau.size();
  if (n < 2) throw DomainError("kernel grid needs at least two samples");
  if (t < tau.front() || t > tau.back())
    throw DomainError("interpolation point " + std::to_string(t) + " outside kernel grid");
  const double h = tau[1] - tau[0];
  std::size_t cell = std::min(static_cast<std::size_t>((t - tau[0]) / h), n - 2);
  const std::size_t first_finite = std::isfinite(values[0]) ? 0 : 1;
  if (cell < first_finite) throw DomainError("interpolation inside the singular first cell of the kernel grid");
  if (n - first_finite < 4) {
    const double s = (t - tau[cell]) / h;
    return values[cell] * (1.0 - s) + values[cell + 1] * s;
  }
  std::size_t start = cell == 0 ? 0 : cell - 1;
  start = std::max(start, first_finite);
  start = std::min(start, n - 4);
  const double s = (t - tau[start]) / h;
  const double l0 = -(s - 1.0) * (s - 2.0) * (s - 3.0) / 6.0;
  const double l1 = s * (s - 2.0) * (s - 3.0) / 2.0;
  const double l2 = -s * (s - 1.0) * (s - 3.0) / 2.0;
  const double l3 = s * (s - 1.0) * (s - 2.0) / 6.0;
  return l0 * values[start] + l1 * values[start + 1] + l2 * values[start + 2] + l3 * values[start + 3];
}

}  // namespace

double KernelGrid::interpolate_nu(double tau) const { return interpolate(tau_values, nu_values, tau); }
double KernelGrid::interpolate_eta(double tau) const { return interpolate(tau_values, eta_values, tau); }

KernelGrid build_kernel_grid(const BathSpec& bath, double t_max, std::size_t n) {
  bath.validate();
  if (!(t_max > 0.0)) throw DomainError("kernel grid: t_max must be positive");
  if (n < 2) throw DomainError("kernel grid: need at least two samples");
  KernelEvaluator kernels(bath);
  KernelGrid grid;
  grid.tau_values.resize(n);
  grid.nu_values.resize(n);
  grid.eta_values.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double tau = i + 1 == n ? t_max : t_max * static_cast<double>(i) / static_cast<double>(n - 1);
    grid.tau_values[i] = tau;
    grid.nu_values[i] = kernels.noise(tau).value;
    grid.eta_values[i] = kernels.dissipation(tau).value;
  }
  return grid;
}

double midpoint_interpolation_error(const KernelGrid& grid, const KernelEvaluator& kernels) {
  const auto& tau = grid.tau_values;
  const auto& nu = grid.nu_values;
  const std::size_t n = tau.size();
  const double h = grid.spacing();
  // Near a logarithmic singularity the cubic error relative to nu only decays
  // like (h / tau)^4, independent of h, so cells within 20 spacings of it are
  // not counted.
  const double skip_until = std::isfinite(nu[0]) ? 0.0 : 20.0 * h;
  double worst = 0.0;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (!std::isfinite(nu[k]) || !std::isfinite(nu[k + 1])) continue;
    const double mid = 0.5 * (tau[k] + tau[k + 1]);
    if (mid < skip_until) continue;
    const double direct = kernels.noise(mid).value;
    const double approx = grid.interpolate_nu(mid);
    const double local = std::max({std::abs(nu[k]), std::abs(nu[k + 1]), std::abs(direct)});
    if (local == 0.0) continue;
    worst = std::max(worst, std::abs(approx - direct) / local);
  }
  return worst;
}

KernelGrid refine_kernel_grid(const BathSpec& bath, double t_max, double rel_tol, std::size_t n_start,
                              std::size_t n_max) {
  KernelEvaluator kernels(bath);
  std::size_t n = std::max<std::size_t>(n_start, 4);
  double err = kInf;
  while (n <= n_max) {
    KernelGrid grid = build_kernel_grid(bath, t_max, n);
    err = midpoint_interpolation_error(grid, kernels);
    if (err <= rel_tol) return grid;
    n = 2 * (n - 1) + 1;
  }
  throw ResolutionError("kernel grid refinement exceeded " + std::to_string(n_max) + " samples", err);
}

}  // namespace adec
