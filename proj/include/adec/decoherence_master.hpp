#pragma once

#include <array>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "adec/bath_kernels.hpp"
#include "adec/perturbative_dynamics.hpp"
#include "adec/trig_series.hpp"

namespace adec {

/// Off-diagonal element <x', y'| rho |x, y> of the reduced density matrix.
/// Only the coordinates are stored; the combinations entering h(t) are methods.
struct CoherencePair {
  double x = 1.0;
  double x_prime = 2.0;
  double y = 0.0;
  double y_prime = 0.0;

  double delta_x() const noexcept { return x_prime - x; }
  double delta_y() const noexcept { return y_prime - y; }
  double delta_xy() const noexcept { return x_prime * y_prime - x * y; }
  double x_bar() const noexcept { return x_prime + x; }
  double y_bar() const noexcept { return y_prime + y; }
};

/// cos: interaction-picture weights cos(A tau), cos(B tau) (default).
/// cosh: the hyperbolic weights as printed; diverges exponentially in A t.
enum class TrigMode { cos, cosh };

/// moment: F_H(t) = t Q0(t) - Q1(t) with Q0, Q1 the zeroth and first tau-moments
/// of the h integrand, accurate on any grid.
/// simpson: cumulative Simpson over the sampled h with a Richardson check.
enum class HeatingMethod { moment, simpson };

enum class SeriesMode { non_markovian, markovian };

struct MasterConfig {
  TrigMode trig_mode = TrigMode::cos;
  HeatingMethod heating_method = HeatingMethod::moment;
  double rel_tol = 1e-10;    // inner tau quadrature
  double kernel_tol = 1e-10; // kernel evaluation
  double t_max = 2.0;
  std::size_t samples = 401;
  int max_intervals = 4000;  // per output cell

  /// Throws DomainError on nonpositive tolerances, t_max <= 0 or samples < 2.
  void validate() const;
  /// Uniform grid 0 .. t_max with `samples` points.
  std::vector<double> grid() const;
};

struct DecoherenceSeries {
  std::vector<double> t;
  std::vector<double> h;
  std::vector<double> f_heating;
  std::vector<double> rdm_ratio;
  SeriesMode mode = SeriesMode::non_markovian;
  double h_infinity = std::numeric_limits<double>::quiet_NaN();  // markovian only
  double window = std::numeric_limits<double>::quiet_NaN();      // markovian only
};

/// Number of tau-weights entering h: harmonic, f0, f1, f2, cos(w0 tau).
constexpr std::size_t kRateTerms = 5;

/// Coefficients multiplying the five tau-integrals:
/// dx^2 + dy^2 (harmonic), 2 alpha xbar dx^2, alpha dxy dx, 2 alpha ybar dx dy, 2 alpha ybar dy^2.
std::array<double, kRateTerms> rate_coefficients(const CoherencePair& pair, double alpha);

/// Precomputed weights and kernels for a fixed oscillator, bath and config.
///
/// h(t) = int_0^t nu(tau) w(tau) dtau with
/// w = (dx^2 + dy^2)(cos A tau + cos B tau)/2 + 2 alpha f0(-tau) xbar dx^2
///     + alpha f1(-tau) dxy dx + 2 alpha f2(-tau) ybar dx dy + 2 alpha cos(w0 tau) ybar dy^2.
/// The five tau-integrals do not depend on the pair or on alpha, so one
/// pass serves every pair and every alpha at the same (w0, omega_c).
class DecoherenceModel {
 public:
  DecoherenceModel(const OscillatorSpec& spec, const BathSpec& bath, const MasterConfig& cfg);

  /// Zeroth and first tau-moments of nu(tau) b_k(tau) over [grid[0], t] at
  /// each grid point, for each of the five weights b_k.
  struct Moments {
    std::vector<double> t;
    std::vector<std::array<double, kRateTerms>> m0;
    std::vector<std::array<double, kRateTerms>> m1;
  };
  /// grid must be strictly ascending with grid[0] >= 0.
  Moments moments(const std::vector<double>& grid) const;

  /// The five weights b_k(tau) (the f's at -tau).
  std::array<double, kRateTerms> weights(double tau) const;

  /// The weight w(tau) as a trigonometric series (cos mode only).
  TrigSeries weight_series(const CoherencePair& pair, double alpha) const;

  const OscillatorSpec& oscillator() const noexcept { return spec_; }
  const KernelEvaluator& kernels() const noexcept { return kernels_; }
  const MasterConfig& config() const noexcept { return cfg_; }
  const TrajectoryCoefficients& coefficients() const noexcept { return coeffs_; }

 private:
  OscillatorSpec spec_;
  MasterConfig cfg_;
  KernelEvaluator kernels_;
  TrajectoryCoefficients coeffs_;
  Frequencies freq_;
  double memory_ = 0.0;  // shortest kernel time scale, 1 / max(lambda, omega_th)
};

/// Rate h(t) at a single time. Positive sign convention: F_H >= 0 means decay.
double h_of_t(double t, const OscillatorSpec& spec, const BathSpec& bath, const CoherencePair& pair,
              const MasterConfig& cfg);

/// Non-Markovian series on the given grid (ascending, starting at 0).
DecoherenceSeries heating_function(const std::vector<double>& grid, const OscillatorSpec& spec, const BathSpec& bath,
                                   const CoherencePair& pair, const MasterConfig& cfg);
DecoherenceSeries heating_function(const DecoherenceModel& model, const std::vector<double>& grid,
                                   const CoherencePair& pair, double alpha);

/// Markovian series: h replaced by its long-time value h_inf, F_H = h_inf t.
/// h_inf is the mean of h over the last quarter of a window that starts at
/// max(t_max, 4) and doubles until the mean is stable to 1e-3 relative.
DecoherenceSeries markovian_heating(const std::vector<double>& grid, const OscillatorSpec& spec, const BathSpec& bath,
                                    const CoherencePair& pair, const MasterConfig& cfg);
DecoherenceSeries markovian_heating(const DecoherenceModel& model, const std::vector<double>& grid,
                                    const CoherencePair& pair, double alpha);

/// Cumulative integral of f sampled on a uniform grid t, from t[0]. Each cell
/// uses the parabola through three neighbouring samples.
std::vector<double> cumulative_simpson(const std::vector<double>& t, const std::vector<double>& f);

/// cumulative_simpson with a Richardson check against the same rule on every
/// second sample. Throws ResolutionError when the two disagree by more than
/// rel_tol times max |F| at a shared node. Needs an odd number of samples >= 5.
std::vector<double> cumulative_simpson_checked(const std::vector<double>& t, const std::vector<double>& f,
                                               double rel_tol = 1e-4);

struct CoherenceTime {
  bool reached = false;
  double time = std::numeric_limits<double>::quiet_NaN();
  double final_ratio = std::numeric_limits<double>::quiet_NaN();
};

/// First crossing of rdm_ratio = 1/e, linearly interpolated between samples.
CoherenceTime coherence_time(const DecoherenceSeries& series);

/// One double commutator of the decoherence term, its position-basis matrix
/// element factor and its phase-space diffusion operator.
struct DiffusionTerm {
  std::string commutator;      // e.g. "alpha[X,[X^2,rho]]"
  std::string wigner_operator; // e.g. "2 alpha x d^2/dp_x^2"
  double matrix_factor = 0.0;  // <x',y'|term|x,y> / <x',y'|rho|x,y>
  double expanded_factor = 0.0;  // same, from the operator products expanded term by term
};

/// The six terms: [X,[X,.]], [Y,[Y,.]], alpha[X,[X^2,.]], alpha[X,[XY,.]],
/// alpha[X,[Y^2,.]], alpha[Y,[Y^2,.]].
std::vector<DiffusionTerm> wigner_diffusion_form(const CoherencePair& pair, const OscillatorSpec& spec);

/// <x'|[X,[X^2,rho]]|x> / <x'|rho|x> expanded as x'^3 - x' x^2 - x'^2 x + x^3.
double anharmonic_commutator_expanded(double x, double x_prime);

}  // namespace adec
