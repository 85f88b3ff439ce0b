#include "adec/wigner_weyl_entropy.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include "adec/errors.hpp"

namespace adec {
namespace {

constexpr double kPi = std::numbers::pi;

// W = N exp(g), g = -E/K. Subscripts are partial derivatives of g; every
// derivative not listed is zero.
struct Parts {
  double w = 0.0;
  double a = 0.0, a_px = 0.0, a_y = 0.0;  // a = g_px
  double b = 0.0, b_x = 0.0, b_py = 0.0;  // b = g_x
  double c = 0.0, c_py = 0.0, c_x = 0.0;  // c = g_py
  double d = 0.0, d_y = 0.0, d_px = 0.0;  // d = g_y
};

Parts parts(double x, double y, double px, double py, const WignerParams& p) {
  const double m = p.spec.mass, w0 = p.spec.omega0, al = p.spec.alpha, bf = p.field();
  const double k = p.eta_disp * w0;
  const double u = px + 0.5 * bf * y, v = py - 0.5 * bf * x;
  Parts s;
  s.w = wigner_value(x, y, px, py, p);
  s.a = -u / (m * k);
  s.a_px = -1.0 / (m * k);
  s.a_y = -bf / (2.0 * m * k);
  s.b = -(m * w0 * w0 * x * (1.0 - 3.0 * al * x) - bf * v / (2.0 * m)) / k;
  s.b_x = -(m * w0 * w0 * (1.0 - 6.0 * al * x) + bf * bf / (4.0 * m)) / k;
  s.b_py = bf / (2.0 * m * k);
  s.c = -v / (m * k);
  s.c_py = -1.0 / (m * k);
  s.c_x = bf / (2.0 * m * k);
  s.d = -(m * w0 * w0 * y + bf * u / (2.0 * m)) / k;
  s.d_y = -(m * w0 * w0 + bf * bf / (4.0 * m)) / k;
  s.d_px = -bf / (2.0 * m * k);
  return s;
}

void check_term(int k) {
  if (k < 1 || k > 5) throw ConfigError("term", 0, "Weyl term index must be 1..5, got " + std::to_string(k));
}

// Central stencils on offsets -2..2: value, first and second derivative (times h^order).
constexpr std::array<std::array<double, 5>, 3> kStencil{{
    {0.0, 0.0, 1.0, 0.0, 0.0},
    {1.0 / 12.0, -8.0 / 12.0, 0.0, 8.0 / 12.0, -1.0 / 12.0},
    {-1.0 / 12.0, 16.0 / 12.0, -30.0 / 12.0, 16.0 / 12.0, -1.0 / 12.0},
}};

// Derivative orders in (x, px, y, py) and the prefactor of each term.
struct TermShape {
  std::array<int, 4> order;
  std::complex<double> factor;
};

TermShape shape(int k) {
  using namespace std::complex_literals;
  switch (k) {
    case 1: return {{1, 1, 0, 0}, 0.5i};
    case 2: return {{0, 0, 1, 1}, 0.5i};
    case 3: return {{2, 2, 0, 0}, -1.0 / 8.0};
    case 4: return {{0, 0, 2, 2}, -1.0 / 8.0};
    default: return {{1, 1, 1, 1}, -0.25};
  }
}

double stencil_derivative(const std::array<int, 4>& order, const std::array<double, 4>& at,
                          const std::array<double, 4>& h, const WignerParams& p) {
  double sum = 0.0;
  for (int i0 = 0; i0 < 5; ++i0) {
    const double w0 = kStencil[order[0]][i0];
    if (w0 == 0.0) continue;
    for (int i1 = 0; i1 < 5; ++i1) {
      const double w1 = kStencil[order[1]][i1];
      if (w1 == 0.0) continue;
      for (int i2 = 0; i2 < 5; ++i2) {
        const double w2 = kStencil[order[2]][i2];
        if (w2 == 0.0) continue;
        for (int i3 = 0; i3 < 5; ++i3) {
          const double w3 = kStencil[order[3]][i3];
          if (w3 == 0.0) continue;
          sum += w0 * w1 * w2 * w3 *
                 wigner_value(at[0] + (i0 - 2) * h[0], at[2] + (i2 - 2) * h[2], at[1] + (i1 - 2) * h[1],
                              at[3] + (i3 - 2) * h[3], p);
        }
      }
    }
  }
  for (int j = 0; j < 4; ++j) sum /= std::pow(h[j], order[j]);
  return sum;
}

}  // namespace

void WignerParams::validate() const {
  spec.validate();
  if (!(eta_disp > 0.0) || !std::isfinite(eta_disp)) throw DomainError("eta_disp must be > 0");
  if (!std::isfinite(b_field)) throw DomainError("b_field must be finite");
}

WignerValue wigner_evaluate(double x, double y, double px, double py, const WignerParams& p) {
  const double m = p.spec.mass, w0 = p.spec.omega0, bf = p.field();
  const double u = px + 0.5 * bf * y, v = py - 0.5 * bf * x;
  const double h0 = 0.5 * m * w0 * w0 * (x * x + y * y) + (u * u + v * v) / (2.0 * m);
  const double h1 = m * w0 * w0 * x * x * x;
  const double eta = p.eta_disp;
  WignerValue out;
  out.value = std::exp(-(h0 - p.spec.alpha * h1) / (eta * w0)) / (4.0 * kPi * kPi * eta * eta);
  out.outside_guard = std::abs(p.spec.alpha * x) >= 1.0 / 3.0;
  return out;
}

double wigner_value(double x, double y, double px, double py, const WignerParams& p) {
  return wigner_evaluate(x, y, px, py, p).value;
}

std::complex<double> weyl_expansion_term(int k, double x, double y, double px, double py, const WignerParams& p) {
  check_term(k);
  const Parts s = parts(x, y, px, py, p);
  double d = 0.0;
  switch (k) {
    case 1: d = s.a * s.b; break;
    case 2: d = s.c * s.d; break;
    case 3: d = (s.a * s.a + s.a_px) * (s.b * s.b + s.b_x); break;
    case 4: d = (s.c * s.c + s.c_py) * (s.d * s.d + s.d_y); break;
    default: d = (s.a * s.d + s.a_y) * (s.b * s.c + s.b_py); break;
  }
  return shape(k).factor * (s.w * d);
}

double weyl_term_scale(int k, double x, double y, double px, double py, const WignerParams& p) {
  check_term(k);
  const double m = p.spec.mass, w0 = p.spec.omega0, al = p.spec.alpha, bf = p.field();
  const double kk = p.eta_disp * w0;
  const double u = px + 0.5 * bf * y, v = py - 0.5 * bf * x;
  Parts s = parts(x, y, px, py, p);
  // Moduli of the sums inside b, b_x and d.
  const double b = (m * w0 * w0 * std::abs(x) * (1.0 + 3.0 * std::abs(al * x)) + std::abs(bf * v) / (2.0 * m)) / kk;
  const double b_x = (m * w0 * w0 * (1.0 + 6.0 * std::abs(al * x)) + bf * bf / (4.0 * m)) / kk;
  const double d = (m * w0 * w0 * std::abs(y) + std::abs(bf * u) / (2.0 * m)) / kk;
  double out = 0.0;
  switch (k) {
    case 1: out = std::abs(s.a) * b; break;
    case 2: out = std::abs(s.c) * d; break;
    case 3: out = (s.a * s.a + std::abs(s.a_px)) * (b * b + b_x); break;
    case 4: out = (s.c * s.c + std::abs(s.c_py)) * (d * d + std::abs(s.d_y)); break;
    default: out = (std::abs(s.a) * d + std::abs(s.a_y)) * (b * std::abs(s.c) + std::abs(s.b_py)); break;
  }
  return std::abs(shape(k).factor) * s.w * out;
}

std::complex<double> weyl_term_finite_difference(int k, double x, double y, double px, double py,
                                                 const WignerParams& p, double h0) {
  check_term(k);
  const double m = p.spec.mass, w0 = p.spec.omega0, eta = p.eta_disp;
  const double sx = std::sqrt(eta / (m * w0)), sp = std::sqrt(m * eta * w0);
  const TermShape ts = shape(k);
  const std::array<double, 4> at{x, px, y, py};
  auto level = [&](double scale) {
    const std::array<double, 4> h{scale * sx, scale * sp, scale * sx, scale * sp};
    return stencil_derivative(ts.order, at, h, p);
  };
  // Leading errors h^4 and h^6.
  const double d1 = level(h0), d2 = level(h0 / 2.0), d3 = level(h0 / 4.0);
  const double r1 = (16.0 * d2 - d1) / 15.0, r2 = (16.0 * d3 - d2) / 15.0;
  return ts.factor * ((64.0 * r2 - r1) / 63.0);
}

std::vector<WeylCheck> verify_weyl_terms(const WignerParams& p, int points, std::uint64_t seed, double tolerance) {
  p.validate();
  const double m = p.spec.mass, w0 = p.spec.omega0, eta = p.eta_disp;
  const double sx = std::sqrt(eta / (m * w0)), sp = std::sqrt(m * eta * w0);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-2.0, 2.0);
  std::vector<std::array<double, 4>> pts;
  while (static_cast<int>(pts.size()) < points) {
    const std::array<double, 4> q{unit(rng) * sx, unit(rng) * sx, unit(rng) * sp, unit(rng) * sp};
    if (!wigner_evaluate(q[0], q[1], q[2], q[3], p).outside_guard) pts.push_back(q);
  }
  std::vector<WeylCheck> out;
  for (int k = 1; k <= 5; ++k) {
    WeylCheck c{k, 0.0, true};
    for (const auto& q : pts) {
      const auto exact = weyl_expansion_term(k, q[0], q[1], q[2], q[3], p);
      const auto fd = weyl_term_finite_difference(k, q[0], q[1], q[2], q[3], p);
      const double scale = weyl_term_scale(k, q[0], q[1], q[2], q[3], p);
      const double rel = std::abs(exact - fd) / std::max(std::abs(exact), scale);
      c.max_rel_error = std::max(c.max_rel_error, rel);
    }
    c.pass = c.max_rel_error < tolerance;
    out.push_back(c);
  }
  return out;
}

std::complex<double> DensityCoefficients::harmonic(double x, double y, double px, double py) const {
  WignerParams h = params;
  h.spec.alpha = 0.0;
  const double n = 1.0 / (4.0 * kPi * kPi * h.eta_disp * h.eta_disp);
  const double w = wigner_value(x, y, px, py, h);
  std::complex<double> sum = 1.0;
  for (int k = 1; k <= 5; ++k) sum += weyl_expansion_term(k, x, y, px, py, h) / w;
  return n * sum;
}

std::complex<double> DensityCoefficients::alpha1(double x, double y, double px, double py) const {
  using namespace std::complex_literals;
  const double m = params.spec.mass, w0 = params.spec.omega0, wc = params.spec.omega_c, eta = params.eta_disp;
  const double s = 2.0 * px + m * wc * y;
  const double first = 3.0 * x * x * s / (64.0 * m * kPi * kPi * std::pow(eta, 4) * w0 * w0);
  const double second = 3.0 * x * s * s * (wc * x * (-2.0 * py + m * wc * x) - 4.0 * eta * w0 + 4.0 * m * w0 * w0 * x * x) /
                        (256.0 * m * kPi * kPi * std::pow(eta, 6) * w0 * w0);
  return 1i * first - second;
}

double DensityCoefficients::alpha2(double x, double y, double px, double py) const {
  (void)py;
  const double m = params.spec.mass, w0 = params.spec.omega0, wc = params.spec.omega_c, eta = params.eta_disp;
  const double s = 2.0 * px + m * wc * y;
  return 9.0 * std::pow(x, 4) * (s * s - 4.0 * m * eta * w0) / (128.0 * kPi * kPi * std::pow(eta, 6));
}

double DensityCoefficients::alpha2_derived(double x, double y, double px, double py) const {
  // Only T3 is quadratic in alpha: -(1/8) (a^2 + a_px) (3 m w0^2 alpha x^2 / K)^2, times N.
  const double m = params.spec.mass, w0 = params.spec.omega0, eta = params.eta_disp, bf = params.field();
  const double k = eta * w0;
  const double u = px + 0.5 * bf * y;
  const double a2 = (u * u - m * k) / (m * m * k * k);
  const double b2 = std::pow(3.0 * m * w0 * w0 * x * x / k, 2);
  (void)py;
  return -0.125 * a2 * b2 / (4.0 * kPi * kPi * eta * eta);
}

DensityCoefficients normal_ordered_density_coefficients(const WignerParams& p) {
  p.validate();
  return DensityCoefficients{p};
}

void EntropyQuery::validate() const {
  if (!(n_x >= 0.0)) throw DomainError("n_x must be >= 0");
  if (!(omega0 > 0.0)) throw DomainError("omega0 must be > 0");
  if (!(eta_disp > 0.0)) throw DomainError("eta_disp must be > 0");
  if (!(mass > 0.0)) throw DomainError("mass must be > 0");
  if (!std::isfinite(alpha)) throw DomainError("alpha must be finite");
}

double occupation_factor(double n) { return (2.0 * n + 1.0) * (2.0 * n + 1.0) + 2.0 * (n * n + n + 1.0); }

double von_neumann_anharmonic(const EntropyQuery& q) {
  q.validate();
  return 9.0 * q.alpha * q.alpha * occupation_factor(q.n_x) / (32.0 * q.mass * q.omega0 * std::pow(q.eta_disp, 5));
}

std::vector<EntropyRow> entropy_sweep(const std::vector<double>& alphas, const std::vector<double>& n_values,
                                      const std::vector<double>& omega0_values, const EntropyQuery& base) {
  if (alphas.empty()) throw DomainError("entropy_sweep needs at least one alpha");
  base.validate();
  const std::vector<double> ns = n_values.empty() ? std::vector<double>{base.n_x} : n_values;
  const std::vector<double> ws = omega0_values.empty() ? std::vector<double>{base.omega0} : omega0_values;
  EntropyQuery ref = base;
  ref.alpha = 0.5;
  ref.n_x = 1.0;
  const double denom = von_neumann_anharmonic(ref);
  std::vector<EntropyRow> rows;
  rows.reserve(alphas.size() * ns.size() * ws.size());
  for (double a : alphas) {
    for (double n : ns) {
      for (double w : ws) {
        EntropyQuery q = base;
        q.alpha = a;
        q.n_x = n;
        q.omega0 = w;
        const double ds = von_neumann_anharmonic(q);
        rows.push_back({a, n, w, q.eta_disp, ds, ds / denom});
      }
    }
  }
  return rows;
}

}  // namespace adec
