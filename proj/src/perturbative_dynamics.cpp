#include "adec/perturbative_dynamics.hpp"

#include <cmath>
#include <sstream>

#include "adec/errors.hpp"

namespace adec {

void OscillatorSpec::validate() const {
  if (!(omega0 > 0.0) || !std::isfinite(omega0)) throw DomainError("omega0 must be positive");
  if (!(std::abs(omega_c) < omega0)) throw DomainError("omega_c must be < omega0 in magnitude");
  if (!(mass > 0.0) || !std::isfinite(mass)) throw DomainError("mass must be positive");
  if (!std::isfinite(alpha)) throw DomainError("alpha must be finite");
  for (double v : initial.as_array())
    if (!std::isfinite(v)) throw DomainError("initial state must be finite");
}

std::vector<std::string> OscillatorSpec::warnings() const {
  std::vector<std::string> out;
  const double amplitude = std::max(std::abs(initial.x), std::abs(initial.y));
  if (std::abs(alpha) * amplitude > 0.3) {
    std::ostringstream msg;
    msg << "perturbative validity: |alpha| * max(|X|,|Y|) = " << std::abs(alpha) * amplitude << " exceeds 0.3";
    out.push_back(msg.str());
  }
  return out;
}

Frequencies derive_frequencies(const OscillatorSpec& spec) {
  spec.validate();
  return {std::sqrt(spec.omega0 * (spec.omega0 + spec.omega_c)), std::sqrt(spec.omega0 * (spec.omega0 - spec.omega_c))};
}

NormalModes normal_modes(const OscillatorSpec& spec) {
  spec.validate();
  const double root = std::sqrt(spec.omega0 * spec.omega0 + 0.25 * spec.omega_c * spec.omega_c);
  return {root + 0.5 * spec.omega_c, root - 0.5 * spec.omega_c};
}

namespace {

// Mode amplitudes of the harmonic solution for initial data r = (X, Vx, Y, Vy)
// reordered as in the derivation below.
//   x = ap cos(wp t) + bp sin(wp t) + am cos(wm t) + bm sin(wm t)
//   y = bp cos(wp t) - ap sin(wp t) - bm cos(wm t) + am sin(wm t)
struct ModeAmplitudes {
  double ap, bp, am, bm;
};

ModeAmplitudes amplitudes(double x, double y, double vx, double vy, const NormalModes& m) {
  const double sum = m.omega_plus + m.omega_minus;
  return {(m.omega_minus * x - vy) / sum, (vx + m.omega_minus * y) / sum, (m.omega_plus * x + vy) / sum,
          (vx - m.omega_plus * y) / sum};
}

std::array<TrigSeries, 2> mode_series(const ModeAmplitudes& c, const NormalModes& m) {
  TrigSeries x({TrigTerm{1, 0, m.omega_plus, c.ap, c.bp}, TrigTerm{0, 1, m.omega_minus, c.am, c.bm}});
  TrigSeries y({TrigTerm{1, 0, m.omega_plus, c.bp, -c.ap}, TrigTerm{0, 1, m.omega_minus, -c.bm, c.am}});
  return {x, y};
}

constexpr std::array<double, 4> unit(int i) {
  std::array<double, 4> e{};
  e[i] = 1.0;
  return e;
}

HarmonicMatrix matrix_from_series(const HarmonicSeries& s, double t) {
  HarmonicMatrix out{};
  for (int i = 0; i < 4; ++i) {
    out[0][i] = s.x[i](t);
    out[1][i] = s.y[i](t);
  }
  return out;
}

// Particular solution for x-forcing F cos(wt) + G sin(wt), returned as
// (x term, y term) with the forcing's tag.
std::pair<TrigTerm, TrigTerm> driven_response(const TrigTerm& f, const OscillatorSpec& spec, const NormalModes& m) {
  const double w = f.frequency;
  const double tol = 1e-6 * spec.omega0;
  for (double mode : {m.omega_plus, m.omega_minus}) {
    if (std::abs(w - mode) < tol) {
      std::ostringstream msg;
      msg << "forcing frequency " << w << " (tag " << f.p << "," << f.q << ") collides with normal mode " << mode;
      throw DegeneracyError(msg.str(), std::abs(w - mode));
    }
  }
  const double w0sq = spec.omega0 * spec.omega0;
  const double d = w0sq - w * w;
  const double delta = d * d - spec.omega_c * spec.omega_c * w * w;
  const double a = f.cos_coef * d / delta;
  const double b = f.sin_coef * d / delta;
  const double c = -spec.omega_c * w * f.sin_coef / delta;
  const double e = spec.omega_c * w * f.cos_coef / delta;
  return {TrigTerm{f.p, f.q, w, a, b}, TrigTerm{f.p, f.q, w, c, e}};
}

double value_at_zero(const TrigSeries& s) {
  double sum = 0.0;
  for (const auto& term : s.terms()) sum += term.cos_coef;
  return sum;
}

double slope_at_zero(const TrigSeries& s) {
  double sum = 0.0;
  for (const auto& term : s.terms()) sum += term.sin_coef * term.frequency;
  return sum;
}

}  // namespace

HarmonicSeries harmonic_series(const OscillatorSpec& spec) {
  const NormalModes m = normal_modes(spec);
  HarmonicSeries out;
  for (int i = 0; i < 4; ++i) {
    const auto e = unit(i);
    const auto series = mode_series(amplitudes(e[0], e[1], e[2], e[3], m), m);
    out.x[i] = series[0];
    out.y[i] = series[1];
  }
  return out;
}

HarmonicMatrix harmonic_solution(double t, const OscillatorSpec& spec) {
  return matrix_from_series(harmonic_series(spec), t);
}

HarmonicMatrix harmonic_velocity(double t, const OscillatorSpec& spec) {
  HarmonicSeries s = harmonic_series(spec);
  for (int i = 0; i < 4; ++i) {
    s.x[i] = s.x[i].derivative();
    s.y[i] = s.y[i].derivative();
  }
  return matrix_from_series(s, t);
}

TrajectoryCoefficients derive_first_order_coefficients(const OscillatorSpec& spec) {
  const NormalModes m = normal_modes(spec);
  const Frequencies f = derive_frequencies(spec);
  const HarmonicSeries h = harmonic_series(spec);
  const double w0sq = spec.omega0 * spec.omega0;

  TrajectoryCoefficients out;
  out.a = f.a;
  out.b = f.b;
  out.omega_plus = m.omega_plus;
  out.omega_minus = m.omega_minus;

  for (int j = 0; j < 4; ++j) {
    for (int k = j; k < 4; ++k) {
      const double multiplicity = j == k ? 1.0 : 2.0;
      const TrigSeries forcing = (3.0 * w0sq * multiplicity) * (h.x[j] * h.x[k]);
      std::vector<TrigTerm> xs, ys;
      for (const auto& term : forcing.terms()) {
        const auto [xt, yt] = driven_response(term, spec, m);
        xs.push_back(xt);
        ys.push_back(yt);
      }
      TrigSeries x(std::move(xs));
      TrigSeries y(std::move(ys));
      // Homogeneous part cancelling the particular solution's initial data.
      const auto hom = mode_series(
          amplitudes(-value_at_zero(x), -value_at_zero(y), -slope_at_zero(x), -slope_at_zero(y), m), m);
      const int idx = monomial_index(j, k);
      out.x_response[idx] = x + hom[0];
      out.y_response[idx] = y + hom[1];
    }
  }

  auto cos_of = [](const TrigSeries& s, int p, int q) { return s.component(p, q).cos_coef; };
  auto sin_of = [](const TrigSeries& s, int p, int q) { return s.component(p, q).sin_coef; };
  const TrigSeries& f0 = out.f0();
  const TrigSeries& f1 = out.f1();
  const TrigSeries& f2 = out.f2();
  auto& c = out.c;
  c[0] = cos_of(f0, 0, 0);
  c[1] = -(cos_of(f0, 1, 0) + cos_of(f0, 0, 1));
  c[2] = -cos_of(f0, 2, 0);
  c[3] = cos_of(f0, 1, 1) + cos_of(f0, 1, -1);
  c[4] = cos_of(f0, 0, 2);
  c[5] = cos_of(f0, 1, 1) - cos_of(f0, 1, -1);
  c[6] = sin_of(f1, 1, 0) + sin_of(f1, 0, 1);
  c[7] = sin_of(f1, 1, 1) + sin_of(f1, 1, -1);
  c[8] = -sin_of(f1, 2, 0);
  c[9] = cos_of(f1, 1, 0);
  c[10] = 2.0 * sin_of(f1, 0, 2);
  c[11] = cos_of(f2, 0, 0);
  c[12] = cos_of(f2, 1, 0) + cos_of(f2, 0, 1);
  c[13] = cos_of(f2, 2, 0);
  c[14] = -cos_of(f2, 0, 2);
  c[15] = cos_of(f2, 1, 1) + cos_of(f2, 1, -1);
  c[16] = cos_of(f2, 1, 1) - cos_of(f2, 1, -1);
  return out;
}

std::array<double, 3> f_from_c(const TrajectoryCoefficients& k, double t) {
  const auto& c = k.c;
  const double w0 = std::sqrt(k.omega_plus * k.omega_minus);
  const double ca = std::cos(k.omega_plus * t), sa = std::sin(k.omega_plus * t);
  const double cb = std::cos(k.omega_minus * t), sb = std::sin(k.omega_minus * t);
  const double c2a = std::cos(2.0 * k.omega_plus * t), c2b = std::cos(2.0 * k.omega_minus * t);
  const double s2a = std::sin(2.0 * k.omega_plus * t);
  const double cw = std::cos(w0 * t), sw = std::sin(w0 * t);
  const double f0 = c[0] - c[1] * cw - c[2] * c2a + c[3] * ca * cb + c[4] * c2b - c[5] * sa * sb;
  const double f1 = c[6] * sw + c[7] * cb * sa - c[8] * s2a + c[9] * ca + c[10] * cb * sb;
  const double f2 = c[11] + c[12] * cw + c[13] * c2a - c[14] * c2b + c[15] * ca * cb - c[16] * sa * sb;
  return {f0, f1, f2};
}

std::array<double, 2> TrajectoryForm::evaluate(const InitialState& s) const {
  const auto v = s.as_array();
  std::array<double, 2> out{};
  for (int r = 0; r < 2; ++r)
    for (int i = 0; i < 4; ++i) out[r] += linear[r][i] * v[i];
  for (int j = 0; j < 4; ++j) {
    for (int k = j; k < 4; ++k) {
      const int idx = monomial_index(j, k);
      out[0] += x_quadratic[idx] * v[j] * v[k];
      out[1] += y_quadratic[idx] * v[j] * v[k];
    }
  }
  return out;
}

TrajectoryForm perturbative_form(double t, const OscillatorSpec& spec, const TrajectoryCoefficients& coeffs) {
  TrajectoryForm form;
  form.linear = harmonic_solution(t, spec);
  if (spec.alpha == 0.0) return form;
  for (int i = 0; i < kMonomials; ++i) {
    form.x_quadratic[i] = spec.alpha * coeffs.x_response[i](t);
    form.y_quadratic[i] = spec.alpha * coeffs.y_response[i](t);
  }
  return form;
}

PhasePoint perturbative_trajectory(double t, const OscillatorSpec& spec, const TrajectoryCoefficients& coeffs) {
  const auto v = spec.initial.as_array();
  const HarmonicMatrix pos = harmonic_solution(t, spec);
  const HarmonicMatrix vel = harmonic_velocity(t, spec);
  PhasePoint p;
  p.t = t;
  for (int i = 0; i < 4; ++i) {
    p.x += pos[0][i] * v[i];
    p.y += pos[1][i] * v[i];
    p.vx += vel[0][i] * v[i];
    p.vy += vel[1][i] * v[i];
  }
  if (spec.alpha == 0.0) return p;
  for (int j = 0; j < 4; ++j) {
    for (int k = j; k < 4; ++k) {
      const double mono = v[j] * v[k];
      if (mono == 0.0) continue;
      const int idx = monomial_index(j, k);
      p.x += spec.alpha * coeffs.x_response[idx](t) * mono;
      p.y += spec.alpha * coeffs.y_response[idx](t) * mono;
      p.vx += spec.alpha * coeffs.x_response[idx].derivative()(t) * mono;
      p.vy += spec.alpha * coeffs.y_response[idx].derivative()(t) * mono;
    }
  }
  return p;
}

PhasePoint perturbative_trajectory(double t, const OscillatorSpec& spec) {
  return perturbative_trajectory(t, spec, derive_first_order_coefficients(spec));
}

LiteralTrajectory literal_trajectory(double t, const OscillatorSpec& spec, const TrajectoryCoefficients& k) {
  spec.validate();
  if (spec.omega_c == 0.0) throw DomainError("literal mode divides by omega_c; use omega_c != 0");
  using cd = std::complex<double>;
  const cd i(0.0, 1.0);
  const double w0 = spec.omega0, wc = spec.omega_c, a = k.a, b = k.b;
  const double r2 = std::sqrt(2.0);
  const double ca = std::cos(a * t), sa = std::sin(a * t), cb = std::cos(b * t), sb = std::sin(b * t);
  const auto& s = spec.initial;
  const double pre = 1.0 / (4.0 * w0 * wc);

  LiteralTrajectory out;
  out.x0 = pre * ((2.0 * w0 * wc * ca + 2.0 * w0 * wc * cb) * s.x + 2.0 * i * r2 * w0 * w0 * wc * (sa / a - sb / b) * s.y +
                  (2.0 * i * r2 * w0 * wc / a * sa + 2.0 * r2 * w0 * wc / b * sb) * s.vx + 2.0 * wc * (-ca + cb) * s.vy);
  out.y0 = pre * ((2.0 * w0 * wc * ca + 2.0 * w0 * wc * cb) * s.y - 2.0 * i * r2 * w0 * w0 * wc * (sa / a - sb / b) * s.x +
                  (2.0 * i * r2 * w0 * wc / a * sa + 2.0 * i * r2 * w0 * wc / b * sb) * s.vy - 2.0 * wc * (-ca + cb) * s.vx);
  const auto& c = k.c;
  const double cw = std::cos(w0 * t), sw = std::sin(w0 * t);
  out.f0 = c[0] - c[1] * cw - c[2] * std::cos(2.0 * a * t) + c[3] * ca * cb + c[4] * std::cos(2.0 * b * t) - c[5] * sa * sb;
  out.f1 = c[6] * sw + i * c[7] * cb * sa - i * c[8] * std::sin(2.0 * a * t) + c[9] * ca + i * c[10] * cb * sb;
  out.f2 = c[11] + c[12] * cw + c[13] * std::cos(2.0 * a * t) - c[14] * std::cos(2.0 * b * t) + c[15] * ca * cb - c[16] * sa * sb;
  out.x = out.x0 + spec.alpha * (out.f0 * s.x * s.x + out.f1 * s.x * s.y + out.f2 * s.y * s.y + sw / w0 * s.x * s.vx);
  out.y = out.y0 + spec.alpha * cw * s.y * s.y + sw / w0 * s.y * s.vy;
  return out;
}

}  // namespace adec
