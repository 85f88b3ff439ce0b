#include "decoherence_oracles.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/ooura_fourier_integrals.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "bath_oracles.hpp"

namespace adec::oracle {
namespace {

using LD = long double;

// int_0^t cos(nu tau) dtau = sin(nu t)/nu
LD k_cos(LD nu, LD t) {
  const LD x = nu * t;
  if (std::abs(x) < 1e-4L) return t * (1.0L - x * x / 6.0L + x * x * x * x / 120.0L);
  return std::sin(x) / nu;
}
// int_0^t sin(nu tau) dtau = (1 - cos(nu t))/nu
LD k_sin(LD nu, LD t) {
  const LD x = nu * t;
  if (std::abs(x) < 1e-4L) return t * (x / 2.0L - x * x * x / 24.0L);
  const LD s = std::sin(0.5L * x);
  return 2.0L * s * s / nu;
}
// int_0^t (t - tau) cos(nu tau) dtau = (1 - cos(nu t))/nu^2
LD v_cos(LD nu, LD t) {
  const LD x = nu * t;
  if (std::abs(x) < 1e-4L) return t * t * (0.5L - x * x / 24.0L);
  const LD s = std::sin(0.5L * x);
  return 2.0L * s * s / (nu * nu);
}
// int_0^t (t - tau) sin(nu tau) dtau = (nu t - sin(nu t))/nu^2
LD v_sin(LD nu, LD t) {
  const LD x = nu * t;
  if (std::abs(x) < 1e-3L) return t * t * (x / 6.0L - x * x * x / 120.0L);
  return (x - std::sin(x)) / (nu * nu);
}

// Kernel of the w integral for h (moment = 0) or F_H (moment = 1).
LD kernel(const TrigSeries& weight, LD w, LD t, int moment) {
  LD sum = 0.0L;
  for (const auto& term : weight.terms()) {
    const LD f = term.frequency;
    // cos(w tau) cos(f tau) = [cos((w-f)tau) + cos((w+f)tau)]/2
    // cos(w tau) sin(f tau) = [sin((f+w)tau) + sin((f-w)tau)]/2
    if (moment == 0) {
      sum += 0.5L * term.cos_coef * (k_cos(w - f, t) + k_cos(w + f, t));
      sum += 0.5L * term.sin_coef * (k_sin(f + w, t) + k_sin(f - w, t));
    } else {
      sum += 0.5L * term.cos_coef * (v_cos(w - f, t) + v_cos(w + f, t));
      sum += 0.5L * term.sin_coef * (v_sin(f + w, t) + v_sin(f - w, t));
    }
  }
  return sum;
}

// Tail form kernel(w) = A(w) + B(w) cos(w t) + C(w) sin(w t), valid for w above every |f|.
struct TailParts {
  LD a = 0.0L, b = 0.0L, c = 0.0L;
};

TailParts tail_parts(const TrigSeries& weight, LD w, LD t, int moment) {
  TailParts p;
  for (const auto& term : weight.terms()) {
    const LD f = term.frequency;
    const LD cf = std::cos(f * t), sf = std::sin(f * t);
    const LD c = 0.5L * term.cos_coef, s = 0.5L * term.sin_coef;
    const LD dm = w - f, dp = w + f;
    if (moment == 0) {
      // sin((w -+ f)t)/(w -+ f)
      p.c += c * cf / dm + c * cf / dp;
      p.b += -c * sf / dm + c * sf / dp;
      // (1 - cos((w+f)t))/(w+f) + (1 - cos((w-f)t))/(f-w)
      p.a += s / dp - s / dm;
      p.b += -s * cf / dp + s * cf / dm;
      p.c += s * sf / dp + s * sf / dm;
    } else {
      // (1 - cos((w -+ f)t))/(w -+ f)^2
      p.a += c / (dm * dm) + c / (dp * dp);
      p.b += -c * cf / (dm * dm) - c * cf / (dp * dp);
      p.c += -c * sf / (dm * dm) + c * sf / (dp * dp);
      // U(w+f) + U(f-w), U(v) = t/v - sin(v t)/v^2
      p.a += s * t / dp - s * t / dm;
      p.c += -s * cf / (dp * dp) + s * cf / (dm * dm);
      p.b += -s * sf / (dp * dp) - s * sf / (dm * dm);
    }
  }
  return p;
}

RateValues spectral_moment_pair(const TrigSeries& weight, const BathSpec& bath, double t, double rel_tol) {
  using boost::math::quadrature::gauss_kronrod;
  double fmax = 0.0;
  for (const auto& term : weight.terms()) fmax = std::max(fmax, term.frequency);
  const double cut = 2.0 * fmax + 40.0 / t + 20.0;

  std::vector<double> breaks{0.0, cut};
  for (const auto& term : weight.terms()) {
    if (term.frequency > 0.0) breaks.push_back(term.frequency);
  }
  if (bath.omega_th > 0.0 && bath.omega_th < cut) breaks.push_back(bath.omega_th);
  std::sort(breaks.begin(), breaks.end());
  // Subdivide so every panel spans at most a few oscillations of the kernel.
  std::vector<double> panels{breaks.front()};
  const double span = 4.0 / t;
  for (std::size_t i = 1; i < breaks.size(); ++i) {
    const double a = panels.back(), b = breaks[i];
    if (b <= a) continue;
    const int n = std::max(1, static_cast<int>(std::ceil((b - a) / span)));
    for (int j = 1; j <= n; ++j) panels.push_back(a + (b - a) * j / n);
  }

  RateValues out;
  for (int moment = 0; moment < 2; ++moment) {
    auto body = [&](double w) {
      return static_cast<double>(spectrum(w, bath) * kernel(weight, w, t, moment));
    };
    LD finite = 0.0L;
    for (std::size_t i = 1; i < panels.size(); ++i) {
      finite += gauss_kronrod<double, 61>::integrate(body, panels[i - 1], panels[i], 8, rel_tol * 1e-2);
    }

    auto part = [&](double u, int which) {
      const LD w = cut + u;
      const auto p = tail_parts(weight, w, t, moment);
      const LD v = which == 0 ? p.a : (which == 1 ? p.b : p.c);
      return static_cast<double>(spectrum(w, bath) * v);
    };
    boost::math::quadrature::exp_sinh<double> es;
    const LD smooth = es.integrate([&](double u) { return part(u, 0); }, 0.0, std::numeric_limits<double>::infinity(),
                                   rel_tol);
    boost::math::quadrature::ooura_fourier_cos<double> oc(rel_tol, 12);
    boost::math::quadrature::ooura_fourier_sin<double> os(rel_tol, 12);
    // cos((cut+u)t) = cos(cut t) cos(ut) - sin(cut t) sin(ut), sin((cut+u)t) = sin(cut t) cos(ut) + cos(cut t) sin(ut)
    const LD bc = oc.integrate([&](double u) { return part(u, 1); }, t).first;
    const LD bs = os.integrate([&](double u) { return part(u, 1); }, t).first;
    const LD cc = oc.integrate([&](double u) { return part(u, 2); }, t).first;
    const LD cs = os.integrate([&](double u) { return part(u, 2); }, t).first;
    const LD ct = std::cos(static_cast<LD>(cut) * t), st = std::sin(static_cast<LD>(cut) * t);
    const LD tail = smooth + (ct * bc - st * bs) + (st * cc + ct * cs);
    (moment == 0 ? out.h : out.f_heating) = static_cast<double>(finite + tail);
  }
  return out;
}

}  // namespace

RateValues spectral_rate(const TrigSeries& weight, const BathSpec& bath, double t, double rel_tol) {
  if (!(t > 0.0)) return {};
  return spectral_moment_pair(weight, bath, t, rel_tol);
}

double nested_rate(const TrigSeries& weight, const BathSpec& bath, double t, double rel_tol) {
  if (!(t > 0.0)) return 0.0;
  boost::math::quadrature::ooura_fourier_cos<double> oc(1e-13, 12);
  auto nu = [&](double tau) {
    return oc.integrate([&](double w) { return static_cast<double>(spectrum(w, bath)); }, tau).first;
  };
  auto f = [&](double tau) { return nu(tau) * weight(tau); };
  // Separate the kernel's memory scale from the slow part of the weight.
  const double edge = std::min(t, 50.0 / bath.lambda_cutoff);
  boost::math::quadrature::tanh_sinh<double> ts;
  double sum = ts.integrate(f, 0.0, edge, rel_tol);
  if (t > edge) {
    const int n = std::max(1, static_cast<int>(std::ceil((t - edge) / 0.05)));
    for (int i = 0; i < n; ++i) {
      const double a = edge + (t - edge) * i / n, b = edge + (t - edge) * (i + 1) / n;
      sum += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 15, rel_tol);
    }
  }
  return sum;
}

}  // namespace adec::oracle
