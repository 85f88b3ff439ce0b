#include <catch_amalgamated.hpp>

#include <cmath>
#include <functional>
#include <numbers>
#include <random>

#include "adec/errors.hpp"
#include "adec/wigner_weyl_entropy.hpp"
#include "wigner_oracles.hpp"

using namespace adec;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

constexpr double kPi = std::numbers::pi;

WignerParams params(double alpha) {
  WignerParams p;
  p.spec.alpha = alpha;
  return p;
}

// Mixed derivative d2 f / (du dv) by fourth-order central differences with one
// Richardson level, u and v chosen by index into (x, y, px, py).
double mixed(const std::function<double(std::array<double, 4>)>& f, std::array<double, 4> at, int u, int v,
             double hu, double hv) {
  auto level = [&](double s) {
    static constexpr std::array<double, 4> off{-2.0, -1.0, 1.0, 2.0};
    static constexpr std::array<double, 4> w{1.0 / 12.0, -8.0 / 12.0, 8.0 / 12.0, -1.0 / 12.0};
    double sum = 0.0;
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        auto q = at;
        q[u] += off[i] * s * hu;
        q[v] += off[j] * s * hv;
        sum += w[i] * w[j] * f(q);
      }
    }
    return sum / (s * hu * s * hv);
  };
  const double d1 = level(1.0), d2 = level(0.5), d3 = level(0.25);
  const double r1 = (16.0 * d2 - d1) / 15.0, r2 = (16.0 * d3 - d2) / 15.0;
  return (64.0 * r2 - r1) / 63.0;
}

// Non-exponential prefactor N (1 + sum of Weyl terms / W): a quadratic polynomial in alpha.
std::complex<double> prefactor(double alpha, double x, double y, double px, double py) {
  const WignerParams p = params(alpha);
  const double w = wigner_value(x, y, px, py, p);
  std::complex<double> sum = 1.0;
  for (int k = 1; k <= 5; ++k) sum += weyl_expansion_term(k, x, y, px, py, p) / w;
  return sum / (4.0 * kPi * kPi * p.eta_disp * p.eta_disp);
}

}  // namespace

TEST_CASE("Wigner value at the origin without field or cubic term", "[wigner]") {
  WignerParams p = params(0.0);
  p.b_field = 0.0;
  CHECK_THAT(wigner_value(0, 0, 0, 0, p), WithinRel(1.0 / (4.0 * kPi * kPi), 1e-15));
  p.eta_disp = 2.0;
  CHECK_THAT(wigner_value(0, 0, 0, 0, p), WithinRel(1.0 / (16.0 * kPi * kPi), 1e-15));
}

TEST_CASE("Default field is m omega_c", "[wigner]") {
  WignerParams p = params(0.0);
  p.spec.mass = 2.0;
  CHECK(p.field() == 0.2);
  p.b_field = 0.5;
  CHECK(p.field() == 0.5);
}

TEST_CASE("Gaussian normalization by Gauss-Hermite quadrature", "[wigner][oracle]") {
  for (double eta : {1.0, 0.5, 3.0}) {
    WignerParams p = params(0.0);
    p.eta_disp = eta;
    CHECK_THAT(oracle::wigner_normalization(p), WithinAbs(1.0, 1e-6));
  }
  WignerParams strong = params(0.0);
  strong.spec.omega_c = 5.0;
  CHECK_THAT(oracle::wigner_normalization(strong, 40), WithinAbs(1.0, 1e-6));
}

TEST_CASE("Cubic term enters as an exact exponential ratio", "[wigner]") {
  const WignerParams p0 = params(0.0), p1 = params(0.05);
  const double x = 1.0;
  for (auto [y, px, py] : {std::tuple{0.0, 0.0, 0.0}, std::tuple{0.3, -1.0, 2.0}}) {
    const double ratio = wigner_value(x, y, px, py, p1) / wigner_value(x, y, px, py, p0);
    CHECK_THAT(ratio, WithinRel(std::exp(p1.spec.mass * p1.spec.omega0 * 0.05 * x * x * x / p1.eta_disp), 1e-13));
  }
}

TEST_CASE("Positivity guard flags but still evaluates", "[wigner]") {
  const WignerParams p = params(0.1);
  const auto inside = wigner_evaluate(3.0, 0.0, 0.0, 0.0, p);
  const auto outside = wigner_evaluate(3.5, 0.0, 0.0, 0.0, p);
  CHECK_FALSE(inside.outside_guard);
  CHECK(outside.outside_guard);
  CHECK(outside.value > 0.0);
  CHECK(wigner_evaluate(-3.5, 0.0, 0.0, 0.0, p).outside_guard);
}

TEST_CASE("Parameter validation", "[wigner]") {
  WignerParams p = params(0.0);
  p.eta_disp = 0.0;
  CHECK_THROWS_AS(p.validate(), DomainError);
  p.eta_disp = 1.0;
  p.spec.omega_c = 20.0;
  CHECK_THROWS_AS(p.validate(), DomainError);
}

TEST_CASE("Weyl term index outside 1..5 is a usage error", "[weyl]") {
  const WignerParams p = params(0.05);
  CHECK_THROWS_AS(weyl_expansion_term(0, 0, 0, 0, 0, p), ConfigError);
  CHECK_THROWS_AS(weyl_expansion_term(6, 0, 0, 0, 0, p), ConfigError);
  CHECK_THROWS_AS(weyl_term_finite_difference(-1, 0, 0, 0, 0, p), ConfigError);
}

TEST_CASE("Term 2 vanishes where 2 py = m omega_c x", "[weyl]") {
  const WignerParams p = params(0.05);
  const double x = 0.4;
  const double py = 0.5 * p.spec.mass * p.spec.omega_c * x;
  CHECK(std::abs(weyl_expansion_term(2, x, 0.2, 1.3, py, p)) == 0.0);
}

TEST_CASE("Terms 1 and 2 are imaginary, terms 3 to 5 real", "[weyl]") {
  const WignerParams p = params(0.05);
  for (int k = 1; k <= 5; ++k) {
    const auto v = weyl_expansion_term(k, 0.2, -0.1, 1.0, 0.7, p);
    if (k <= 2) {
      CHECK(v.real() == 0.0);
      CHECK(v.imag() != 0.0);
    } else {
      CHECK(v.imag() == 0.0);
    }
  }
}

TEST_CASE("Term 1 against the harmonic closed form", "[weyl]") {
  // i (2px + m wc y)(-2 wc py + m wc^2 x + 4 m x (1 - 3 alpha x) w0^2) / (64 m pi^2 eta^4 w0^2) exp(...)
  auto closed = [](double alpha, double x, double y, double px, double py) {
    const WignerParams p = params(alpha);
    const double m = p.spec.mass, w0 = p.spec.omega0, wc = p.spec.omega_c, eta = p.eta_disp;
    const double e = wigner_value(x, y, px, py, p) * 4.0 * kPi * kPi * eta * eta;
    return (2 * px + m * wc * y) * (-2 * wc * py + m * wc * wc * x + 4 * m * x * (1 - 3 * x * alpha) * w0 * w0) /
           (64 * m * kPi * kPi * std::pow(eta, 4) * w0 * w0) * e;
  };
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 20; ++i) {
    const double x = 0.6 * u(rng), y = 0.6 * u(rng), px = 6 * u(rng), py = 6 * u(rng);
    for (double alpha : {0.0, 0.05}) {
      const double got = weyl_expansion_term(1, x, y, px, py, params(alpha)).imag();
      CHECK_THAT(got, WithinRel(closed(alpha, x, y, px, py), 1e-12));
    }
  }
}

TEST_CASE("Weyl terms match Richardson finite differences", "[weyl][oracle]") {
  const auto checks = verify_weyl_terms(params(0.05), 20, 20240607, 1e-5);
  REQUIRE(checks.size() == 5);
  for (const auto& c : checks) {
    INFO("term " << c.term << " max rel error " << c.max_rel_error);
    CHECK(c.pass);
    CHECK(c.max_rel_error < 1e-5);
  }
}

TEST_CASE("Weyl terms match finite differences in plain relative error away from zeros", "[weyl][oracle]") {
  const WignerParams p = params(0.05);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  int compared = 0;
  for (int i = 0; i < 40; ++i) {
    const double x = 0.6 * u(rng), y = 0.6 * u(rng), px = 6 * u(rng), py = 6 * u(rng);
    for (int k = 1; k <= 5; ++k) {
      const auto exact = weyl_expansion_term(k, x, y, px, py, p);
      if (std::abs(exact) < 0.05 * weyl_term_scale(k, x, y, px, py, p)) continue;
      const auto fd = weyl_term_finite_difference(k, x, y, px, py, p);
      CHECK(std::abs(fd - exact) <= 1e-5 * std::abs(exact));
      ++compared;
    }
  }
  CHECK(compared > 100);
}

TEST_CASE("Cross term: mixed partials commute", "[weyl]") {
  const WignerParams p = params(0.05);
  const double hx = 0.02 * std::sqrt(p.eta_disp / p.spec.omega0), hp = 0.02 * std::sqrt(p.eta_disp * p.spec.omega0);
  // d2_{py,y} of the exact d2_{px,x} W, and the reverse.
  auto t1 = [&](std::array<double, 4> q) { return weyl_expansion_term(1, q[0], q[1], q[2], q[3], p).imag() * 2.0; };
  auto t2 = [&](std::array<double, 4> q) { return weyl_expansion_term(2, q[0], q[1], q[2], q[3], p).imag() * 2.0; };
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 10; ++i) {
    const std::array<double, 4> q{0.6 * u(rng), 0.6 * u(rng), 6 * u(rng), 6 * u(rng)};
    const double a = mixed(t1, q, 1, 3, hx, hp);
    const double b = mixed(t2, q, 0, 2, hx, hp);
    const double exact = -4.0 * weyl_expansion_term(5, q[0], q[1], q[2], q[3], p).real();
    const double scale = 4.0 * weyl_term_scale(5, q[0], q[1], q[2], q[3], p);
    CHECK(std::abs(a - b) <= 1e-8 * scale);
    CHECK(std::abs(a - exact) <= 1e-8 * scale);
  }
}

TEST_CASE("Printed second-order density coefficient", "[density]") {
  const auto c = normal_ordered_density_coefficients(params(0.05));
  CHECK(c.alpha2(0.0, 0.3, 1.0, -2.0) == 0.0);
  const double w0 = 10.0, eta = 1.0;
  CHECK_THAT(c.alpha2(1.0, 0.0, 0.0, 0.0), WithinRel(-9.0 * w0 / (32.0 * kPi * kPi * std::pow(eta, 5)), 1e-14));

  WignerParams p2 = params(0.05);
  p2.eta_disp = 2.0;
  const auto c2 = normal_ordered_density_coefficients(p2);
  CHECK_THAT(c2.alpha2(1.0, 0.0, 0.0, 0.0), WithinRel(-9.0 * w0 / (32.0 * kPi * kPi * 32.0), 1e-14));
}

TEST_CASE("Derived second-order coefficient is the alpha^2 part of the expansion", "[density]") {
  const auto c = normal_ordered_density_coefficients(params(0.05));
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 20; ++i) {
    const double x = 0.6 * u(rng), y = 0.6 * u(rng), px = 6 * u(rng), py = 6 * u(rng);
    const double a = 0.05;
    // The prefactor is quadratic in alpha, so the central second difference is exact up to rounding.
    const auto second = (prefactor(a, x, y, px, py) + prefactor(-a, x, y, px, py) - 2.0 * prefactor(0.0, x, y, px, py)) /
                        (2.0 * a * a);
    const double derived = c.alpha2_derived(x, y, px, py);
    CHECK_THAT(second.real(), WithinAbs(derived, 1e-9 * (1.0 + std::abs(derived))));
    CHECK(std::abs(second.imag()) < 1e-9);
    CHECK_THAT(derived, WithinAbs(-c.alpha2(x, y, px, py), 1e-12 * (1.0 + std::abs(derived))));
  }
}

TEST_CASE("Harmonic passthrough equals the alpha = 0 prefactor", "[density]") {
  const auto c = normal_ordered_density_coefficients(params(0.05));
  const auto got = c.harmonic(0.2, -0.3, 1.1, 0.4);
  const auto want = prefactor(0.0, 0.2, -0.3, 1.1, 0.4);
  CHECK_THAT(got.real(), WithinRel(want.real(), 1e-14));
  CHECK_THAT(got.imag(), WithinRel(want.imag(), 1e-14));
}

TEST_CASE("First-order coefficient has zero number-state expectation", "[density][oracle]") {
  const WignerParams p = params(0.05);
  const auto c = normal_ordered_density_coefficients(p);
  auto f = [&](double x, double y, double px, double py) { return c.alpha1(x, y, px, py); };
  for (int n : {0, 1, 2}) {
    const auto e = oracle::number_state_expectation(f, n, p.spec.mass, p.spec.omega0);
    INFO("n = " << n);
    CHECK(e.magnitude > 0.0);
    CHECK(std::abs(e.value) < 1e-8 * e.magnitude);
    CHECK(std::abs(e.value) < 1e-8);
  }
}

TEST_CASE("Occupation factor matches the number-state fourth moment", "[entropy][oracle]") {
  // <n| x^4 |n> = g(n) / (4 m^2 w^2)
  for (int n : {0, 1, 2, 3}) {
    for (double w : {1.0, 10.0}) {
      auto x4 = [](double x, double, double, double) { return std::complex<double>(std::pow(x, 4)); };
      const auto e = oracle::number_state_expectation(x4, n, 1.0, w);
      CHECK_THAT(e.value.real(), WithinRel(occupation_factor(n) / (4.0 * w * w), 1e-12));
    }
  }
}

TEST_CASE("Occupation factor values", "[entropy]") {
  CHECK(occupation_factor(0) == 3.0);
  CHECK(occupation_factor(1) == 15.0);
  CHECK(occupation_factor(2) == 39.0);
}

TEST_CASE("Entropy correction closed form", "[entropy]") {
  EntropyQuery q;
  CHECK(von_neumann_anharmonic(q) == 0.0);
  q.alpha = 0.2;
  q.n_x = 1.0;
  q.omega0 = 10.0;
  q.eta_disp = 1.5;
  q.mass = 2.0;
  CHECK_THAT(von_neumann_anharmonic(q), WithinRel(9.0 * 0.04 * 15.0 / (32.0 * 2.0 * 10.0 * std::pow(1.5, 5)), 1e-15));
  q.n_x = -0.1;
  CHECK_THROWS_AS(von_neumann_anharmonic(q), DomainError);
  q.n_x = 0.0;
  q.eta_disp = 0.0;
  CHECK_THROWS_AS(von_neumann_anharmonic(q), DomainError);
  CHECK(std::string(harmonic_entropy_placeholder) == "(S_VN)_HM");
}

TEST_CASE("Scaled entropy is 4 alpha^2 g / 15", "[entropy]") {
  EntropyQuery base;
  const std::vector<double> alphas{0.0, 0.1, 0.5, 1.0, 1.7};
  const std::vector<double> ns{0.0, 1.0, 2.0, 3.5};
  const auto rows = entropy_sweep(alphas, ns, {}, base);
  REQUIRE(rows.size() == alphas.size() * ns.size());
  for (const auto& r : rows) {
    CHECK_THAT(r.scaled_s, WithinAbs(4.0 * r.alpha * r.alpha * occupation_factor(r.n_x) / 15.0, 1e-14));
    CHECK(r.eta == base.eta_disp);
  }
  EntropyQuery one = base;
  one.alpha = 1.0;
  one.n_x = 1.0;
  const auto single = entropy_sweep({1.0}, {1.0}, {}, base);
  CHECK_THAT(single[0].scaled_s, WithinRel(4.0, 1e-15));
  CHECK(entropy_sweep({0.5}, {1.0}, {}, base)[0].scaled_s == 1.0);
}

TEST_CASE("Entropy sweep ordering and monotonicity", "[entropy]") {
  EntropyQuery base;
  const std::vector<double> alphas{0.1, 0.2, 0.3};
  const std::vector<double> ns{0.0, 1.0};
  const std::vector<double> ws{5.0, 10.0, 20.0};
  const auto rows = entropy_sweep(alphas, ns, ws, base);
  REQUIRE(rows.size() == 18);
  std::size_t i = 0;
  for (double a : alphas)
    for (double n : ns)
      for (double w : ws) {
        CHECK(rows[i].alpha == a);
        CHECK(rows[i].n_x == n);
        CHECK(rows[i].omega0 == w);
        ++i;
      }
  auto at = [&](std::size_t ia, std::size_t in, std::size_t iw) { return rows[(ia * 2 + in) * 3 + iw].scaled_s; };
  for (std::size_t ia = 0; ia < 3; ++ia)
    for (std::size_t in = 0; in < 2; ++in)
      for (std::size_t iw = 0; iw < 3; ++iw) {
        if (ia + 1 < 3) CHECK(at(ia + 1, in, iw) > at(ia, in, iw));
        if (in + 1 < 2) CHECK(at(ia, in + 1, iw) > at(ia, in, iw));
        if (iw + 1 < 3) CHECK(at(ia, in, iw + 1) < at(ia, in, iw));
      }
  CHECK_THROWS_AS(entropy_sweep({}, ns, ws, base), DomainError);
}

TEST_CASE("Entropy correction monotonicity on sampled grids", "[entropy]") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    EntropyQuery q;
    q.alpha = 2.0 * u(rng) - 1.0;
    q.n_x = 5.0 * u(rng);
    q.omega0 = 0.5 + 20.0 * u(rng);
    q.eta_disp = 0.5 + 2.0 * u(rng);
    const double s = von_neumann_anharmonic(q);
    CHECK(s >= 0.0);
    auto bumped = [&](auto field, double factor) {
      EntropyQuery b = q;
      b.*field *= factor;
      return von_neumann_anharmonic(b);
    };
    CHECK(bumped(&EntropyQuery::alpha, 1.1) > s);
    CHECK(bumped(&EntropyQuery::omega0, 1.1) < s);
    CHECK(bumped(&EntropyQuery::eta_disp, 1.1) < s);
    EntropyQuery more = q;
    more.n_x += 0.1;
    CHECK(von_neumann_anharmonic(more) > s);
  }
}
