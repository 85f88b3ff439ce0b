#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "adec/bath_kernels.hpp"
#include "adec/errors.hpp"
#include "adec/fourier_quadrature.hpp"
#include "bath_oracles.hpp"

using namespace adec;
using Catch::Matchers::WithinRel;
using Catch::Matchers::WithinAbs;

namespace {

BathSpec low_t() { return BathSpec{}; }

BathSpec high_t() {
  BathSpec b;
  b.omega_th = 1e4;
  return b;
}

BathSpec exponential(double omega_th) {
  BathSpec b;
  b.cutoff = CutoffKind::exponential;
  b.omega_th = omega_th;
  return b;
}

}  // namespace

TEST_CASE("spectral density values") {
  const BathSpec b = low_t();
  CHECK(spectral_density(0.0, b) == 0.0);
  CHECK_THAT(spectral_density(1e3, b), WithinRel(1e4 / std::numbers::pi, 1e-14));
  CHECK_THAT(spectral_density(10.0, b), WithinRel(static_cast<double>(oracle::spectrum(10.0L, BathSpec{.omega_th = 0.0})), 1e-14));
  CHECK_THAT(spectral_density(10.0, b), WithinAbs(63.6556, 1e-4));
  CHECK_THROWS_AS(spectral_density(-1.0, b), DomainError);
  // 2 m gamma L^2 / (pi w) tail
  CHECK_THAT(spectral_density(1e9, b), WithinRel(2.0 * 10.0 * 1e6 / (std::numbers::pi * 1e9), 1e-9));
}

TEST_CASE("bath validation") {
  CHECK_THROWS_AS(BathSpec{.gamma = 0.0}.validate(), DomainError);
  CHECK_THROWS_AS(BathSpec{.lambda_cutoff = -1.0}.validate(), DomainError);
  CHECK_THROWS_AS(BathSpec{.omega_th = -1.0}.validate(), DomainError);
  CHECK_NOTHROW(BathSpec{.omega_th = 0.0}.validate());
}

TEST_CASE("fourier quadrature against closed-form transforms") {
  for (double w : {1e-3, 0.1, 1.0, 10.0}) {
    auto c = fourier_integral([](double x) { return std::exp(-x); }, w, FourierKind::cosine, 1e-12);
    auto s = fourier_integral([](double x) { return std::exp(-x); }, w, FourierKind::sine, 1e-12);
    CHECK(c.converged);
    CHECK(s.converged);
    CHECK_THAT(c.value, WithinRel(1.0 / (1.0 + w * w), 1e-12));
    CHECK_THAT(s.value, WithinRel(w / (1.0 + w * w), 1e-12));
  }
  // Slow 1/x decay: int x/(1+x^2) sin(wx) = (pi/2) e^-w
  for (double w : {0.01, 1.0, 5.0}) {
    auto s = fourier_integral([](double x) { return x / (1.0 + x * x); }, w, FourierKind::sine, 1e-12);
    CHECK_THAT(s.value, WithinRel(std::numbers::pi / 2.0 * std::exp(-w), 1e-11));
  }
  CHECK_THROWS_AS(fourier_integral([](double) { return 1.0; }, 0.0, FourierKind::sine, 1e-8), DomainError);
}

TEST_CASE("noise kernel is even") {
  for (const BathSpec& b : {low_t(), high_t(), exponential(0.1)}) {
    KernelEvaluator k(b);
    for (double tau : {0.01, 0.1, 1.0}) CHECK(k.noise(-tau).value == k.noise(tau).value);
  }
}

TEST_CASE("noise kernel matches Boost Ooura on the full spectrum") {
  for (const BathSpec& b : {low_t(), high_t(), BathSpec{.omega_th = 0.0}, exponential(0.1), exponential(1e4)}) {
    KernelEvaluator k(b);
    for (double tau : {1e-5, 1e-4, 1e-3, 3e-3, 1e-2, 0.1, 1.0}) {
      const double ref = oracle::noise_ooura(tau, b);
      const auto got = k.noise(tau);
      INFO("omega_th=" << b.omega_th << " tau=" << tau);
      CHECK_THAT(got.value, WithinAbs(ref, 1e-8 * std::abs(ref) + 1e-12 * k.scale()));
    }
  }
}

TEST_CASE("noise kernel high-temperature limit") {
  const BathSpec b = high_t();
  const double tau = 1e-3;
  // m gamma W L e^-1 = 1e8/e; corrections are O(L^2/W^2) plus the low-frequency
  // part of coth that the limit drops.
  CHECK_THAT(noise_kernel_high_temperature(tau, b), WithinRel(1e8 * std::exp(-1.0), 1e-14));
  CHECK_THAT(noise_kernel(tau, b), WithinRel(3.6788e7, 1e-2));

  BathSpec hotter = b;
  hotter.omega_th = 1e6;
  KernelEvaluator k(hotter);
  for (double t : {1e-4, 1e-3, 3e-3, 1e-2}) {
    CHECK_THAT(k.noise(t).value, WithinRel(noise_kernel_high_temperature(t, hotter), 1e-4));
  }
}

TEST_CASE("noise kernel Matsubara and quadrature routes agree") {
  // pi W tau >= 1 selects the series inside the evaluator; the oracle sums it
  // independently and the quadrature oracle covers the same points.
  BathSpec b;
  b.omega_th = 1e4;
  KernelEvaluator k(b);
  for (double tau : {5e-5, 1e-4, 1e-3, 4e-3}) {
    const double series = oracle::noise_matsubara(tau, b);
    CHECK_THAT(k.noise(tau).value, WithinRel(series, 1e-10));
    CHECK_THAT(oracle::noise_ooura(tau, b), WithinRel(series, 1e-8));
  }
}

TEST_CASE("noise kernel at tau = 0") {
  // Lorentz-Drude: int J coth diverges logarithmically.
  CHECK(std::isinf(noise_kernel(0.0, low_t())));
  CHECK(std::isinf(noise_kernel(0.0, BathSpec{.omega_th = 0.0})));

  const BathSpec cold = exponential(0.0);
  CHECK_THAT(noise_kernel(0.0, cold), WithinRel(2.0 * 10.0 / std::numbers::pi * 1e6, 1e-14));
  CHECK_THAT(noise_kernel(0.0, cold), WithinRel(oracle::noise_at_zero_trapezoid(cold), 1e-6));
  const BathSpec warm = exponential(0.1);
  CHECK_THAT(noise_kernel(0.0, warm), WithinRel(oracle::noise_at_zero_trapezoid(warm), 1e-6));
}

TEST_CASE("zero temperature closed forms") {
  KernelEvaluator ld(BathSpec{.omega_th = 0.0});
  KernelEvaluator ex(exponential(0.0));
  for (double tau : {1e-6, 1e-3, 2e-3, 0.039, 0.041, 0.2, 5.0}) {
    // the Ei/E1 branch switches to its asymptotic series at lambda tau = 40
    const double ref_ld = oracle::noise_ooura(tau, ld.bath());
    const double ref_ex = oracle::noise_ooura(tau, ex.bath());
    // the exponential form crosses zero at lambda tau = 1
    CHECK_THAT(ld.noise_zero_temperature(tau), WithinAbs(ref_ld, 1e-10 * std::abs(ref_ld) + 1e-14 * ld.scale()));
    CHECK_THAT(ex.noise_zero_temperature(tau), WithinAbs(ref_ex, 1e-10 * std::abs(ref_ex) + 1e-14 * ex.scale()));
  }
  // far tail ~ -(2 m gamma / pi) / tau^2
  CHECK_THAT(ld.noise(100.0).value, WithinRel(-20.0 / std::numbers::pi / 1e4, 1e-5));
}

TEST_CASE("dissipation kernel") {
  const BathSpec b = low_t();
  CHECK(dissipation_kernel(0.0, b) == 0.0);
  CHECK_THAT(dissipation_kernel(1e-3, b), WithinRel(1e7 * std::exp(-1.0), 1e-8));
  KernelEvaluator k(b);
  for (double tau = 1e-4; tau <= 1e-2 + 1e-15; tau *= std::pow(10.0, 0.25)) {
    CHECK_THAT(k.dissipation(tau).value, WithinRel(dissipation_kernel_closed_form(tau, b), 1e-8));
  }
  CHECK(k.dissipation_signed(-1e-3).value == -k.dissipation(1e-3).value);
  CHECK_THROWS_AS(k.dissipation(-1.0), DomainError);

  double previous = k.dissipation(1e-4).value;
  for (double tau = 2e-4; tau < 2e-2; tau += 1e-4) {
    const double v = k.dissipation(tau).value;
    CHECK(v < previous);
    previous = v;
  }

  KernelEvaluator e(exponential(0.1));
  for (double tau : {1e-4, 1e-3, 1e-2, 0.3})
    CHECK_THAT(e.dissipation(tau).value, WithinRel(dissipation_kernel_closed_form(tau, e.bath()), 1e-8));
  for (double tau : {1e-4, 1e-3, 1e-2})
    CHECK_THAT(k.dissipation(tau).value, WithinRel(oracle::dissipation_ooura(tau, b), 1e-8));
}

TEST_CASE("kernels decay beyond 1/lambda") {
  // ratio test across decades for the exponentially damped pieces
  for (const BathSpec& b : {high_t(), BathSpec{.omega_th = 1e6}}) {
    KernelEvaluator k(b);
    for (double tau : {1e-3, 2e-3, 4e-3}) {
      const double bound = std::exp(-b.lambda_cutoff * tau / 2.0);
      CHECK(std::abs(k.noise(2.0 * tau).value / k.noise(tau).value) <= bound);
      CHECK(k.dissipation(2.0 * tau).value / k.dissipation(tau).value <= bound);
    }
  }
}

TEST_CASE("quadrature agrees with an independent splitting within 10x its error estimate") {
  for (const BathSpec& b : {low_t(), exponential(1.0)}) {
    KernelEvaluator k(b);
    for (double tau : {1e-3, 1e-2, 0.1}) {
      const auto thermal = k.noise_thermal(tau);
      const double ref = oracle::noise_ooura(tau, b) - k.noise_zero_temperature(tau);
      CHECK(std::abs(thermal.value - ref) <= 10.0 * thermal.abs_error + 1e-14 * k.scale());
    }
  }
}

TEST_CASE("noise increases with temperature for lambda tau < 1") {
  for (double tau : {0.0, 1e-4, 5e-4, 9e-4}) {
    double previous = -std::numeric_limits<double>::infinity();
    for (double w : {0.0, 0.1, 1.0, 10.0, 100.0, 1e3, 1e4}) {
      const double v = tau == 0.0 ? noise_kernel(0.0, exponential(w)) : noise_kernel(tau, BathSpec{.omega_th = w});
      CHECK(v > previous);
      previous = v;
    }
  }
}

TEST_CASE("kernel grid") {
  const BathSpec b = low_t();
  const KernelGrid two = build_kernel_grid(b, 1.0, 2);
  REQUIRE(two.tau_values.size() == 2);
  CHECK(two.tau_values[0] == 0.0);
  CHECK(two.tau_values[1] == 1.0);
  CHECK(two.eta_values[0] == 0.0);

  const KernelGrid grid = build_kernel_grid(b, 0.05, 101);
  KernelEvaluator k(b);
  for (std::size_t i = 0; i < grid.tau_values.size(); ++i) {
    CHECK(grid.nu_values[i] == k.noise(grid.tau_values[i]).value);
    CHECK(grid.eta_values[i] == k.dissipation(grid.tau_values[i]).value);
  }
  CHECK_THROWS_AS(build_kernel_grid(b, 0.0, 10), DomainError);
  CHECK_THROWS_AS(build_kernel_grid(b, 1.0, 1), DomainError);
  CHECK_THROWS_AS(grid.interpolate_nu(1e-4), DomainError);
}

TEST_CASE("kernel grid refinement reaches 1e-6 at midpoints") {
  for (const BathSpec& b : {low_t(), high_t()}) {
    const KernelGrid grid = refine_kernel_grid(b, 0.02, 1e-6);
    KernelEvaluator k(b);
    CHECK(midpoint_interpolation_error(grid, k) < 1e-6);
    const double h = grid.spacing();
    // spot-check away from the refinement's own midpoints
    for (double tau = 25.0 * h; tau < 0.02; tau += 7.3 * h) {
      const double direct = k.noise(tau).value;
      CHECK_THAT(grid.interpolate_nu(tau), WithinAbs(direct, 1e-6 * std::abs(direct) + 1e-9 * k.scale()));
      CHECK_THAT(grid.interpolate_eta(tau), WithinAbs(k.dissipation(tau).value, 1e-6 * 1e7));
    }
  }
  CHECK_THROWS_AS(refine_kernel_grid(low_t(), 1.0, 1e-6, 64, 256), ResolutionError);
}
