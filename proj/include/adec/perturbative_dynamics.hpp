#pragma once

#include <array>
#include <complex>
#include <string>
#include <vector>

#include "adec/trig_series.hpp"

namespace adec {

/// Initial phase-space point (X, Y, V_x, V_y).
struct InitialState {
  double x = 1.0;
  double y = 0.0;
  double vx = 0.0;
  double vy = 0.0;

  std::array<double, 4> as_array() const { return {x, y, vx, vy}; }
};

/// Charged oscillator in the potential m w0^2 [(x^2 + y^2)/2 - alpha x^3] with
/// cyclotron frequency omega_c. Equations of motion:
///   x'' + w0^2 x - 3 alpha w0^2 x^2 - omega_c y' = 0
///   y'' + w0^2 y + omega_c x' = 0
struct OscillatorSpec {
  double mass = 1.0;
  double omega0 = 10.0;
  double omega_c = 0.1;
  double alpha = 0.0;
  InitialState initial;

  /// Throws DomainError unless omega0 > 0, |omega_c| < omega0, mass > 0.
  void validate() const;
  /// Soft perturbative-validity warnings (|alpha| max(|X|,|Y|) > 0.3).
  std::vector<std::string> warnings() const;
};

struct PhasePoint {
  double x = 0.0;
  double y = 0.0;
  double vx = 0.0;
  double vy = 0.0;
  double t = 0.0;
};

/// A = sqrt(w0 (w0 + omega_c)), B = sqrt(w0 (w0 - omega_c)). These are the
/// small-omega_c forms of the normal-mode frequencies; see normal_modes().
struct Frequencies {
  double a = 0.0;
  double b = 0.0;
};
Frequencies derive_frequencies(const OscillatorSpec& spec);

/// Exact normal-mode frequencies sqrt(w0^2 + omega_c^2/4) +- omega_c/2.
struct NormalModes {
  double omega_plus = 0.0;
  double omega_minus = 0.0;
};
NormalModes normal_modes(const OscillatorSpec& spec);

/// Coefficients of (X, Y, V_x, V_y).
using LinearForm = std::array<double, 4>;
/// Row 0 gives x0(t), row 1 gives y0(t).
using HarmonicMatrix = std::array<LinearForm, 2>;

/// Exact solution of the alpha = 0 equations as a 2x4 matrix L(t) with
/// (x0, y0) = L(t) (X, Y, V_x, V_y).
HarmonicMatrix harmonic_solution(double t, const OscillatorSpec& spec);
/// Time derivative of harmonic_solution.
HarmonicMatrix harmonic_velocity(double t, const OscillatorSpec& spec);

/// The harmonic solution as trigonometric series, one per initial variable.
/// Terms are tagged (1,0) for omega_plus and (0,1) for omega_minus.
struct HarmonicSeries {
  std::array<TrigSeries, 4> x;
  std::array<TrigSeries, 4> y;
};
HarmonicSeries harmonic_series(const OscillatorSpec& spec);

/// Index of the monomial v_j v_k (j <= k) of v = (X, Y, V_x, V_y); 10 in total.
constexpr int monomial_index(int j, int k) {
  if (j > k) {
    const int s = j;
    j = k;
    k = s;
  }
  return j * 4 - j * (j - 1) / 2 + (k - j);
}
constexpr int kMonomials = 10;

/// First-order solution data. The first-order correction is linear in the ten
/// quadratic monomials of the initial data; x_response[i] and y_response[i]
/// are the responses to monomial i with zero initial data, so the assembled
/// trajectory keeps x(0) = X, y(0) = Y and the initial velocities exactly.
///
/// c holds C0..C16: the same responses projected on the small-omega_c basis
/// {1, cos w0 t, cos 2At, cos At cos Bt, cos 2Bt, sin At sin Bt, ...} in which
/// both normal-mode frequencies are lumped into w0. f1's basis cannot hold
/// separate sum and difference sine amplitudes, so c[6..10] is lossy; the
/// response series are the exact form.
struct TrajectoryCoefficients {
  double a = 0.0;  // amplitude convention A of the literal form
  double b = 0.0;  // amplitude convention B of the literal form
  double omega_plus = 0.0;
  double omega_minus = 0.0;
  std::array<double, 17> c{};
  std::array<TrigSeries, kMonomials> x_response;
  std::array<TrigSeries, kMonomials> y_response;

  /// Responses to X^2, XY and Y^2 in the x direction.
  const TrigSeries& f0() const { return x_response[monomial_index(0, 0)]; }
  const TrigSeries& f1() const { return x_response[monomial_index(0, 1)]; }
  const TrigSeries& f2() const { return x_response[monomial_index(1, 1)]; }
};

/// Solves x1'' + w0^2 x1 - omega_c y1' = 3 w0^2 x0^2, y1'' + w0^2 y1 + omega_c x1' = 0
/// by undetermined coefficients, monomial by monomial. Throws DegeneracyError
/// when a forcing frequency lies within 1e-6 w0 of a normal mode.
TrajectoryCoefficients derive_first_order_coefficients(const OscillatorSpec& spec);

/// f0, f1, f2 evaluated from C0..C16 on the small-omega_c basis with
/// (A, B) -> (omega_plus, omega_minus) and w0 = sqrt(omega_plus omega_minus)
/// for the C1/C6/C12 terms. Reproduces the response series up to O(omega_c t).
std::array<double, 3> f_from_c(const TrajectoryCoefficients& coeffs, double t);

/// Perturbative trajectory as a polynomial in the initial data at time t.
struct TrajectoryForm {
  HarmonicMatrix linear{};
  std::array<double, kMonomials> x_quadratic{};  // already multiplied by alpha
  std::array<double, kMonomials> y_quadratic{};

  /// Evaluates (x, y) at the given initial data.
  std::array<double, 2> evaluate(const InitialState& s) const;
};

TrajectoryForm perturbative_form(double t, const OscillatorSpec& spec, const TrajectoryCoefficients& coeffs);
/// Position and velocity of the first-order trajectory at the oscillator's initial data.
PhasePoint perturbative_trajectory(double t, const OscillatorSpec& spec, const TrajectoryCoefficients& coeffs);
PhasePoint perturbative_trajectory(double t, const OscillatorSpec& spec);

/// Literal evaluation of the printed small-omega_c expressions for x0, y0, f0..f2
/// and the assembled x, y (including the imaginary factors), with the C values
/// taken from coeffs. For comparison only; omega_c must be nonzero.
struct LiteralTrajectory {
  std::complex<double> x0, y0, f0, f1, f2, x, y;
};
LiteralTrajectory literal_trajectory(double t, const OscillatorSpec& spec, const TrajectoryCoefficients& coeffs);

}  // namespace adec
