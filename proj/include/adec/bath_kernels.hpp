#pragma once

#include <cstddef>
#include <memory>
#include <vector>

namespace adec {

/// High-frequency regularization of the Ohmic spectral density.
enum class CutoffKind {
  lorentz_drude,  ///< J(w) = (2 m gamma / pi) w L^2 / (L^2 + w^2)
  exponential,    ///< J(w) = (2 m gamma / pi) w exp(-w / L)
};

/// Ohmic bath in units hbar = k_B = 1. omega_th = 2 k_B T / hbar; zero means T = 0.
struct BathSpec {
  double gamma = 10.0;
  double lambda_cutoff = 1.0e3;
  double omega_th = 0.1;
  double mass = 1.0;
  CutoffKind cutoff = CutoffKind::lorentz_drude;

  /// Throws DomainError on gamma <= 0, lambda_cutoff <= 0, omega_th < 0 or mass <= 0.
  void validate() const;
};

/// Value of a kernel together with its absolute error estimate.
struct KernelEstimate {
  double value = 0.0;
  double abs_error = 0.0;
};

double spectral_density(double omega, const BathSpec& bath);

/// J(w) coth(w / omega_th), the symmetrized bath spectrum entering the noise kernel.
/// Finite at w = 0, where it tends to (2 m gamma / pi) omega_th.
double thermal_spectrum(double omega, const BathSpec& bath);

/// Evaluates the noise kernel nu(tau) and the dissipation kernel eta_d(tau).
///
/// nu splits into its zero-temperature part, which has a closed form for both
/// cutoffs, and the thermal remainder int J(w) (coth(w/W) - 1) cos(w tau) dw.
/// The remainder is computed with a double-exponential Fourier quadrature. For
/// the Lorentz-Drude cutoff at pi*omega_th*tau >= 1 the whole of nu is summed
/// as a Matsubara series instead. Results depend only on the arguments, not on
/// the order of earlier calls, and a const evaluator may be shared between
/// threads.
class KernelEvaluator {
 public:
  explicit KernelEvaluator(BathSpec bath, double rel_tol = 1e-10);
  ~KernelEvaluator();
  KernelEvaluator(KernelEvaluator&&) noexcept;
  KernelEvaluator& operator=(KernelEvaluator&&) noexcept;

  const BathSpec& bath() const noexcept { return bath_; }

  /// nu(tau), even in tau. For the Lorentz-Drude cutoff nu diverges
  /// logarithmically at tau = 0 and +inf is returned there.
  KernelEstimate noise(double tau) const;
  /// eta_d(tau) for tau >= 0 by quadrature; eta_d(0) = 0 exactly.
  KernelEstimate dissipation(double tau) const;
  /// Odd extension eta_d(-tau) = -eta_d(tau).
  KernelEstimate dissipation_signed(double tau) const;

  /// Zero-temperature part of nu (closed form).
  double noise_zero_temperature(double tau) const;
  /// Thermal remainder nu(tau) - nu_{T=0}(tau).
  KernelEstimate noise_thermal(double tau) const;

  /// Typical magnitude of nu near tau ~ 1/lambda.
  double scale() const noexcept { return scale_; }

 private:
  struct Quadrature;
  KernelEstimate full_by_matsubara(double tau) const;
  bool matsubara_usable(double tau) const;

  BathSpec bath_;
  double rel_tol_;
  double scale_;
  KernelEstimate thermal_at_zero_{0.0, -1.0};  // negative error: not yet computed
  std::unique_ptr<Quadrature> quad_;
};

/// Convenience wrappers that build a temporary evaluator. Throw NumericError
/// when the quadrature does not converge.
double noise_kernel(double tau, const BathSpec& bath);
double dissipation_kernel(double tau, const BathSpec& bath);

/// Closed form of eta_d for tau > 0: m gamma L^2 exp(-L tau) (Lorentz-Drude) or
/// (4 m gamma / pi) L^3 tau / (1 + L^2 tau^2)^2 (exponential).
double dissipation_kernel_closed_form(double tau, const BathSpec& bath);

/// High-temperature limit coth(x) -> 1/x of nu for the Lorentz-Drude cutoff:
/// m gamma omega_th L exp(-L |tau|).
double noise_kernel_high_temperature(double tau, const BathSpec& bath);

/// Uniform samples of both kernels on [0, t_max].
struct KernelGrid {
  std::vector<double> tau_values;
  std::vector<double> nu_values;
  std::vector<double> eta_values;

  double spacing() const { return tau_values[1] - tau_values[0]; }
  /// Four-point cubic Lagrange interpolation of nu. Cells whose stencil would
  /// touch a non-finite sample (nu(0) for Lorentz-Drude) use a shifted stencil;
  /// throws DomainError if tau lies in the first cell while nu(0) is infinite.
  double interpolate_nu(double tau) const;
  double interpolate_eta(double tau) const;
};

KernelGrid build_kernel_grid(const BathSpec& bath, double t_max, std::size_t n);

/// Largest relative deviation between the cubic interpolant and direct
/// evaluation at cell midpoints, skipping cells adjacent to a non-finite sample.
/// The deviation is measured against the local scale max(|nu_k|, |nu_k+1|, |nu_mid|).
double midpoint_interpolation_error(const KernelGrid& grid, const KernelEvaluator& kernels);

/// Doubles the grid size starting from n_start until the midpoint
/// interpolation error drops below rel_tol. Throws ResolutionError past n_max.
KernelGrid refine_kernel_grid(const BathSpec& bath, double t_max, double rel_tol = 1e-6,
                              std::size_t n_start = 64, std::size_t n_max = 1u << 22);

}  // namespace adec
