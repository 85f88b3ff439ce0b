#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <random>

#include "adec/errors.hpp"
#include "adec/perturbative_dynamics.hpp"
#include "dynamics_oracles.hpp"

using namespace adec;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

OscillatorSpec caption(double alpha = 0.0, InitialState s = {}) {
  OscillatorSpec spec;
  spec.alpha = alpha;
  spec.initial = s;
  return spec;
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = a + (b - a) * i / (n - 1);
  return out;
}

double max_deviation(const OscillatorSpec& spec, const std::vector<double>& times) {
  const auto coeffs = derive_first_order_coefficients(spec);
  const auto ode = oracle::nonlinear_trajectory(spec, times);
  double worst = 0.0;
  for (std::size_t k = 0; k < times.size(); ++k)
    worst = std::max(worst, std::abs(perturbative_trajectory(times[k], spec, coeffs).x - ode[k].x));
  return worst;
}

}  // namespace

TEST_CASE("frequencies") {
  OscillatorSpec s;
  s.omega_c = 0.0;
  CHECK(derive_frequencies(s).a == 10.0);
  CHECK(derive_frequencies(s).b == 10.0);
  s.omega_c = 0.1;
  CHECK_THAT(derive_frequencies(s).a, WithinRel(std::sqrt(101.0), 1e-15));
  CHECK_THAT(derive_frequencies(s).b, WithinRel(std::sqrt(99.0), 1e-15));
  CHECK_THAT(derive_frequencies(s).a, WithinAbs(10.04988, 1e-5));
  CHECK_THAT(derive_frequencies(s).b, WithinAbs(9.94987, 1e-5));
  s.omega0 = 1.0;
  s.omega_c = 0.5;
  CHECK_THAT(derive_frequencies(s).a, WithinRel(std::sqrt(1.5), 1e-15));
  CHECK_THAT(derive_frequencies(s).b, WithinRel(std::sqrt(0.5), 1e-15));
  CHECK(derive_frequencies(s).a >= derive_frequencies(s).b);

  s.omega_c = 1.0;
  CHECK_THROWS_AS(derive_frequencies(s), DomainError);
  s.omega_c = 2.0;
  CHECK_THROWS_AS(normal_modes(s), DomainError);

  // exact modes: product w0^2, difference omega_c
  OscillatorSpec c = caption();
  const auto m = normal_modes(c);
  CHECK_THAT(m.omega_plus * m.omega_minus, WithinRel(100.0, 1e-15));
  CHECK_THAT(m.omega_plus - m.omega_minus, WithinRel(0.1, 1e-12));
}

TEST_CASE("harmonic solution at t = 0 and without field") {
  const auto l0 = harmonic_solution(0.0, caption());
  CHECK_THAT(l0[0][0], WithinAbs(1.0, 1e-15));
  CHECK_THAT(l0[1][1], WithinAbs(1.0, 1e-15));
  for (int i : {1, 2, 3}) CHECK_THAT(l0[0][i], WithinAbs(0.0, 1e-15));
  for (int i : {0, 2, 3}) CHECK_THAT(l0[1][i], WithinAbs(0.0, 1e-15));
  const auto v0 = harmonic_velocity(0.0, caption());
  CHECK_THAT(v0[0][2], WithinAbs(1.0, 1e-15));
  CHECK_THAT(v0[1][3], WithinAbs(1.0, 1e-15));

  OscillatorSpec free = caption();
  free.omega_c = 0.0;
  for (double t : {0.1, 0.7, 2.3}) {
    const auto l = harmonic_solution(t, free);
    CHECK_THAT(l[0][0], WithinAbs(std::cos(10.0 * t), 1e-14));
    CHECK_THAT(l[0][2], WithinAbs(std::sin(10.0 * t) / 10.0, 1e-14));
    CHECK_THAT(l[0][1], WithinAbs(0.0, 1e-14));
    CHECK_THAT(l[0][3], WithinAbs(0.0, 1e-14));
    CHECK_THAT(l[1][1], WithinAbs(std::cos(10.0 * t), 1e-14));
    CHECK_THAT(l[1][3], WithinAbs(std::sin(10.0 * t) / 10.0, 1e-14));
  }
}

TEST_CASE("harmonic solution matches the ODE oracle") {
  const auto spec = caption(0.0, {1.0, 0.0, 0.0, 0.0});
  const auto ode = oracle::nonlinear_trajectory(spec, {0.5});
  const auto l = harmonic_solution(0.5, spec);
  CHECK_THAT(l[0][0], WithinAbs(ode[0].x, 1e-9));
  CHECK_THAT(l[1][0], WithinAbs(ode[0].y, 1e-9));

  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const auto times = linspace(0.0, 1.0, 201);
  for (int trial = 0; trial < 5; ++trial) {
    OscillatorSpec s = caption(0.0, {u(rng), u(rng), 10.0 * u(rng), 10.0 * u(rng)});
    s.omega_c = trial == 4 ? -0.3 : 0.1 * (trial + 1);
    const auto ref = oracle::nonlinear_trajectory(s, times);
    const auto v = s.initial.as_array();
    for (std::size_t k = 0; k < times.size(); ++k) {
      const auto l = harmonic_solution(times[k], s);
      const auto dl = harmonic_velocity(times[k], s);
      double x = 0, y = 0, vx = 0, vy = 0;
      for (int i = 0; i < 4; ++i) {
        x += l[0][i] * v[i];
        y += l[1][i] * v[i];
        vx += dl[0][i] * v[i];
        vy += dl[1][i] * v[i];
      }
      CHECK_THAT(x, WithinAbs(ref[k].x, 1e-8));
      CHECK_THAT(y, WithinAbs(ref[k].y, 1e-8));
      CHECK_THAT(vx, WithinAbs(ref[k].vx, 1e-7));
      CHECK_THAT(vy, WithinAbs(ref[k].vy, 1e-7));
    }
  }
}

TEST_CASE("harmonic reversal symmetry") {
  // L(-t) with omega_c -> -omega_c equals L(t) with velocity columns negated
  OscillatorSpec s = caption();
  OscillatorSpec r = s;
  r.omega_c = -s.omega_c;
  for (double t : {0.2, 1.3, 4.0}) {
    const auto fwd = harmonic_solution(t, s);
    const auto back = harmonic_solution(-t, r);
    for (int row = 0; row < 2; ++row) {
      CHECK_THAT(back[row][0], WithinAbs(fwd[row][0], 1e-14));
      CHECK_THAT(back[row][1], WithinAbs(fwd[row][1], 1e-14));
      CHECK_THAT(back[row][2], WithinAbs(-fwd[row][2], 1e-14));
      CHECK_THAT(back[row][3], WithinAbs(-fwd[row][3], 1e-14));
    }
  }
}

TEST_CASE("first-order responses carry zero initial data") {
  const auto k = derive_first_order_coefficients(caption());
  for (int i = 0; i < kMonomials; ++i) {
    CHECK_THAT(k.x_response[i](0.0), WithinAbs(0.0, 1e-12));
    CHECK_THAT(k.y_response[i](0.0), WithinAbs(0.0, 1e-12));
    CHECK_THAT(k.x_response[i].derivative()(0.0), WithinAbs(0.0, 1e-11));
    CHECK_THAT(k.y_response[i].derivative()(0.0), WithinAbs(0.0, 1e-11));
  }
  const auto f = f_from_c(k, 0.0);
  for (double v : f) CHECK_THAT(v, WithinAbs(0.0, 1e-12));
}

TEST_CASE("first-order closed form satisfies the driven equations") {
  const OscillatorSpec spec = caption();
  const auto k = derive_first_order_coefficients(spec);
  const auto h = harmonic_series(spec);
  const double w2 = 100.0, wc = 0.1;
  double worst = 0.0;
  for (double t : linspace(0.0, 5.0, 501)) {
    for (int j = 0; j < 4; ++j) {
      for (int m = j; m < 4; ++m) {
        const int idx = monomial_index(j, m);
        const TrigSeries& x1 = k.x_response[idx];
        const TrigSeries& y1 = k.y_response[idx];
        const double forcing = 3.0 * w2 * (j == m ? 1.0 : 2.0) * h.x[j](t) * h.x[m](t);
        const double rx = x1.derivative().derivative()(t) + w2 * x1(t) - wc * y1.derivative()(t) - forcing;
        const double ry = y1.derivative().derivative()(t) + w2 * y1(t) + wc * x1.derivative()(t);
        worst = std::max({worst, std::abs(rx), std::abs(ry)});
      }
    }
  }
  CHECK(worst < 1e-9 * w2);
}

TEST_CASE("f-functions match the driven-ODE oracle") {
  const OscillatorSpec base = caption();
  const auto k = derive_first_order_coefficients(base);
  const double t = 0.3;
  const auto xx = oracle::first_order_trajectory(caption(0.0, {1, 0, 0, 0}), {t})[0].x;
  const auto yy = oracle::first_order_trajectory(caption(0.0, {0, 1, 0, 0}), {t})[0].x;
  const auto xy = oracle::first_order_trajectory(caption(0.0, {1, 1, 0, 0}), {t})[0].x - xx - yy;
  CHECK_THAT(k.f0()(t), WithinAbs(xx, 1e-8));
  CHECK_THAT(k.f1()(t), WithinAbs(xy, 1e-8));
  CHECK_THAT(k.f2()(t), WithinAbs(yy, 1e-8));

  // general initial data, x and y, whole window
  const InitialState s{0.7, -0.4, 2.0, -3.0};
  const auto times = linspace(0.0, 1.0, 101);
  const auto ref = oracle::first_order_trajectory(caption(0.0, s), times);
  OscillatorSpec unit_alpha = caption(1.0, s);
  for (std::size_t i = 0; i < times.size(); ++i) {
    const auto form = perturbative_form(times[i], unit_alpha, k);
    TrajectoryForm quad = form;
    quad.linear = {};
    const auto v = quad.evaluate(s);
    CHECK_THAT(v[0], WithinAbs(ref[i].x, 1e-7));
    CHECK_THAT(v[1], WithinAbs(ref[i].y, 1e-7));
  }
}

TEST_CASE("C basis reproduces the response series to O(omega_c t)") {
  const auto k = derive_first_order_coefficients(caption());
  for (double t : {0.05, 0.3, 1.0}) {
    const auto f = f_from_c(k, t);
    const double scale = 30.0;  // |f| ~ 3 w0^2 / w0^2 times O(10) terms
    CHECK(std::abs(f[0] - k.f0()(t)) < scale * 0.1 * t + 1e-12);
    CHECK(std::abs(f[2] - k.f2()(t)) < scale * 0.1 * t + 1e-12);
  }
  // exact at omega_c = 0, where the lumping is an identity
  OscillatorSpec free = caption();
  free.omega_c = 0.0;
  const auto k0 = derive_first_order_coefficients(free);
  for (double t : {0.1, 0.9, 3.0}) {
    const auto f = f_from_c(k0, t);
    CHECK_THAT(f[0], WithinAbs(k0.f0()(t), 1e-12));
    CHECK_THAT(f[1], WithinAbs(k0.f1()(t), 1e-12));
    CHECK_THAT(f[2], WithinAbs(k0.f2()(t), 1e-12));
  }
}

TEST_CASE("omega_c -> 0 continuity") {
  OscillatorSpec free = caption();
  free.omega_c = 0.0;
  OscillatorSpec tiny = caption();
  tiny.omega_c = 1e-7;
  const auto k0 = derive_first_order_coefficients(free);
  const auto k1 = derive_first_order_coefficients(tiny);
  for (double v : k1.c) CHECK(std::isfinite(v));
  for (double t : {0.1, 1.0, 3.0}) {
    CHECK_THAT(k1.f0()(t), WithinAbs(k0.f0()(t), 1e-6));
    CHECK_THAT(k1.f1()(t), WithinAbs(k0.f1()(t), 1e-6));
    CHECK_THAT(k1.f2()(t), WithinAbs(k0.f2()(t), 1e-6));
  }
  // x'' + w^2 x = 3 w^2 cos^2(wt) = 1.5 w^2 (1 + cos 2wt), zero initial data
  for (double t : {0.1, 1.0, 3.0}) {
    const double w = 10.0;
    CHECK_THAT(k0.f0()(t), WithinAbs(1.5 - 0.5 * std::cos(2.0 * w * t) - std::cos(w * t), 1e-12));
  }
}

TEST_CASE("resonant tuning is rejected") {
  OscillatorSpec s;
  s.omega0 = 1.0;
  s.omega_c = 1.0 / std::sqrt(2.0);  // omega_plus = 2 omega_minus
  CHECK_THROWS_AS(derive_first_order_coefficients(s), DegeneracyError);
  try {
    derive_first_order_coefficients(s);
  } catch (const DegeneracyError& e) {
    CHECK(std::string(e.what()).find("collides with normal mode") != std::string::npos);
  }
}

TEST_CASE("perturbative trajectory limits and initial data") {
  const OscillatorSpec zero = caption(0.0, {0.3, -0.2, 1.0, 2.0});
  for (double t : {0.0, 0.4, 1.7}) {
    const auto p = perturbative_trajectory(t, zero);
    const auto l = harmonic_solution(t, zero);
    const auto v = zero.initial.as_array();
    CHECK(p.x == l[0][0] * v[0] + l[0][1] * v[1] + l[0][2] * v[2] + l[0][3] * v[3]);
  }
  const OscillatorSpec s = caption(0.05, {1.0, 1.0, 0.5, -0.5});
  const auto p0 = perturbative_trajectory(0.0, s);
  CHECK_THAT(p0.x, WithinAbs(1.0, 1e-13));
  CHECK_THAT(p0.y, WithinAbs(1.0, 1e-13));
  CHECK_THAT(p0.vx, WithinAbs(0.5, 1e-12));
  CHECK_THAT(p0.vy, WithinAbs(-0.5, 1e-12));

  const auto form = perturbative_form(0.8, s, derive_first_order_coefficients(s));
  const auto xy = form.evaluate(s.initial);
  const auto p = perturbative_trajectory(0.8, s);
  CHECK_THAT(xy[0], WithinAbs(p.x, 1e-13));
  CHECK_THAT(xy[1], WithinAbs(p.y, 1e-13));
}

TEST_CASE("perturbative error is second order in alpha") {
  const auto times = linspace(0.0, 2.0, 401);
  const InitialState s{1.0, 1.0, 0.0, 0.0};
  const double e05 = max_deviation(caption(0.05, s), times);
  const double e025 = max_deviation(caption(0.025, s), times);
  CHECK(e05 / e025 > 2.5);
  CHECK(e05 / e025 < 6.0);

  const double e1 = max_deviation(caption(0.01, s), times);
  const double e2 = max_deviation(caption(0.02, s), times);
  const double e4 = max_deviation(caption(0.04, s), times);
  const double slope = (std::log(e4) - std::log(e1)) / (std::log(0.04) - std::log(0.01));
  CHECK(slope > 1.7);
  CHECK(slope < 2.3);
  CHECK(e2 > e1);
}

TEST_CASE("nonlinear oracle sanity") {
  OscillatorSpec s = caption(0.0, {0.8, 0.0, 1.5, 0.0});
  s.omega_c = 0.0;
  const auto times = linspace(0.0, 2.0, 41);
  const auto ode = oracle::nonlinear_trajectory(s, times);
  for (std::size_t k = 0; k < times.size(); ++k)
    CHECK_THAT(ode[k].x, WithinAbs(0.8 * std::cos(10.0 * times[k]) + 0.15 * std::sin(10.0 * times[k]), 1e-9));

  // magnetic force does no work
  OscillatorSpec m = caption(0.0, {0.5, -0.3, 2.0, 1.0});
  m.omega_c = 3.0;
  const auto long_run = oracle::nonlinear_trajectory(m, linspace(0.0, 10.0, 101));
  auto energy = [](const PhasePoint& p) { return 0.5 * (p.vx * p.vx + p.vy * p.vy) + 50.0 * (p.x * p.x + p.y * p.y); };
  const double e0 = energy(long_run.front());
  for (const auto& p : long_run) CHECK_THAT(energy(p), WithinRel(e0, 1e-8));
}

TEST_CASE("perturbative validity warning") {
  CHECK(caption(0.05, {1.0, 0.0, 0.0, 0.0}).warnings().empty());
  CHECK(caption(0.5, {1.0, 0.0, 0.0, 0.0}).warnings().size() == 1);
  CHECK(caption(-0.2, {0.0, -2.0, 0.0, 0.0}).warnings().size() == 1);
}

TEST_CASE("literal mode") {
  const OscillatorSpec s = caption(0.05, {1.0, 0.0, 0.0, 0.0});
  const auto k = derive_first_order_coefficients(s);
  // the X column is real and close to the exact solution for small omega_c
  for (double t : {0.1, 0.5}) {
    const auto lit = literal_trajectory(t, s, k);
    CHECK(lit.x0.imag() == 0.0);
    CHECK_THAT(lit.x0.real(), WithinAbs(harmonic_solution(t, s)[0][0], 1e-2));
    CHECK_THAT(lit.f0.real(), WithinAbs(f_from_c(k, t)[0], 0.5));
  }
  // the Y column carries the printed imaginary factor
  const OscillatorSpec y = caption(0.05, {0.0, 1.0, 0.0, 0.0});
  CHECK(literal_trajectory(0.3, y, k).x0.imag() != 0.0);
  // y(0) = Y + alpha Y^2 as printed
  CHECK_THAT(literal_trajectory(0.0, y, k).y.real(), WithinAbs(1.05, 1e-14));

  OscillatorSpec free = s;
  free.omega_c = 0.0;
  CHECK_THROWS_AS(literal_trajectory(0.1, free, k), DomainError);
}
