#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "adec/perturbative_dynamics.hpp"

namespace adec {

/// Steady-state Wigner function parameters. eta_disp is the determinant of the
/// dispersion matrix, a free input (default 1). b_field uses e = 1, so the
/// caption value is B = m omega_c; a negative b_field selects that default.
struct WignerParams {
  OscillatorSpec spec;
  double eta_disp = 1.0;
  double b_field = -1.0;

  double field() const noexcept { return b_field < 0.0 ? spec.mass * spec.omega_c : b_field; }
  /// Throws DomainError unless eta_disp > 0, b_field finite and spec valid.
  void validate() const;
};

struct WignerValue {
  double value = 0.0;
  bool outside_guard = false;  // |alpha x| >= 1/3
};

/// W = exp[-(H0 - alpha H')/(eta omega0)] / (4 pi^2 eta^2) with
/// H0 = m w0^2 (x^2+y^2)/2 + (px + B y/2)^2/2m + (py - B x/2)^2/2m, H' = m w0^2 x^3.
WignerValue wigner_evaluate(double x, double y, double px, double py, const WignerParams& p);
double wigner_value(double x, double y, double px, double py, const WignerParams& p);

/// Terms of the Weyl expansion W_s = [1 + T1 + ... + T5] W, hbar = 1:
///   T1 = (i/2) d2_{px,x} W        T2 = (i/2) d2_{py,y} W
///   T3 = -(1/8) d4_{px,x} W       T4 = -(1/8) d4_{py,y} W
///   T5 = -(1/4) d2_{py,y} d2_{px,x} W   (both equal cross terms together)
/// Values are the exact derivatives of wigner_value. k outside 1..5 throws ConfigError.
std::complex<double> weyl_expansion_term(int k, double x, double y, double px, double py, const WignerParams& p);

/// The same operator applied to wigner_value by tensor-product fourth-order
/// central differences with two Richardson levels. Steps are h0 times the
/// Gaussian widths sqrt(eta/(m w0)) and sqrt(m eta w0).
std::complex<double> weyl_term_finite_difference(int k, double x, double y, double px, double py,
                                                 const WignerParams& p, double h0 = 0.16);

/// Magnitude of the term with every sum replaced by a sum of moduli. Used as
/// the denominator of relative comparisons so zero crossings of a term do not
/// blow up the ratio.
double weyl_term_scale(int k, double x, double y, double px, double py, const WignerParams& p);

struct WeylCheck {
  int term = 0;
  double max_rel_error = 0.0;
  bool pass = false;
};

/// Compares every term with its finite-difference estimate at `points` random
/// phase points (fixed seed) drawn within two widths of the origin and inside
/// the positivity guard.
std::vector<WeylCheck> verify_weyl_terms(const WignerParams& p, int points = 20, std::uint64_t seed = 20240607,
                                         double tolerance = 1e-5);

/// Coefficient functions of rho_s / (4 pi^2) in powers of alpha, with the
/// common factor exp[-(H0 - alpha H')/(eta w0)] removed.
struct DensityCoefficients {
  WignerParams params;

  /// 1 + harmonic terms. Passed through unexpanded: returns the alpha = 0
  /// Weyl-expanded W_s divided by its exponential.
  std::complex<double> harmonic(double x, double y, double px, double py) const;
  /// The printed first-order coefficient (only its two displayed terms):
  ///   3 i x^2 (2px + m wc y) / (64 m pi^2 eta^4 w0^2)
  ///   - 3 x (2px + m wc y)^2 (wc x(-2py + m wc x) - 4 eta w0 + 4 m w0^2 x^2) / (256 m pi^2 eta^6 w0^2)
  std::complex<double> alpha1(double x, double y, double px, double py) const;
  /// The printed second-order coefficient 9 x^4 ((2px + m wc y)^2 - 4 m eta w0) / (128 pi^2 eta^6).
  double alpha2(double x, double y, double px, double py) const;
  /// Second-order coefficient from differentiating W directly. It is the
  /// printed one with the opposite sign.
  double alpha2_derived(double x, double y, double px, double py) const;
};

DensityCoefficients normal_ordered_density_coefficients(const WignerParams& p);

struct EntropyQuery {
  double alpha = 0.0;
  double n_x = 0.0;
  double omega0 = 10.0;
  double eta_disp = 1.0;
  double mass = 1.0;

  /// Throws DomainError on n_x < 0 or nonpositive omega0, eta_disp, mass.
  void validate() const;
};

/// (2n+1)^2 + 2(n^2+n+1)
double occupation_factor(double n);

/// The alpha-dependent part 9 alpha^2 g(n_x) / (32 m w0 eta^5). The harmonic
/// baseline is never evaluated; see harmonic_entropy_placeholder.
double von_neumann_anharmonic(const EntropyQuery& q);

/// Symbolic stand-in for the harmonic entropy (S_VN)_HM.
inline constexpr const char* harmonic_entropy_placeholder = "(S_VN)_HM";

struct EntropyRow {
  double alpha = 0.0;
  double n_x = 0.0;
  double omega0 = 0.0;
  double eta = 0.0;
  double delta_s = 0.0;
  double scaled_s = 0.0;  // delta_s / delta_s(alpha = 1/2, n_x = 1, base omega0)
};

/// Rows over the product alphas x n_values x omega0_values in that nesting
/// order (alpha slowest). Empty n_values or omega0_values fall back to the
/// base query's value. Throws DomainError on an empty alpha grid.
std::vector<EntropyRow> entropy_sweep(const std::vector<double>& alphas, const std::vector<double>& n_values,
                                      const std::vector<double>& omega0_values, const EntropyQuery& base);

}  // namespace adec
