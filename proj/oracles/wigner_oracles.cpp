#include "wigner_oracles.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <gsl/gsl_integration.h>
#include <gsl/gsl_sf_laguerre.h>

namespace adec::oracle {
namespace {

// Nodes and weights for int g(t) e^{-t^2} dt.
struct Rule {
  std::vector<double> t, w;
};

Rule hermite(int n) {
  gsl_integration_fixed_workspace* ws = gsl_integration_fixed_alloc(gsl_integration_fixed_hermite, n, 0.0, 1.0, 0.0, 0.0);
  if (!ws) throw std::runtime_error("gsl_integration_fixed_alloc failed");
  Rule r;
  const double* t = gsl_integration_fixed_nodes(ws);
  const double* w = gsl_integration_fixed_weights(ws);
  r.t.assign(t, t + n);
  r.w.assign(w, w + n);
  gsl_integration_fixed_free(ws);
  return r;
}

}  // namespace

double wigner_normalization(const WignerParams& p, int nodes) {
  const double m = p.spec.mass, w0 = p.spec.omega0, bf = p.field();
  const double k = p.eta_disp * w0;
  // Diagonal part of the exponent: (m w0^2/2 + B^2/8m) x^2 / K and px^2 / (2 m K).
  const double sx = 1.0 / std::sqrt((0.5 * m * w0 * w0 + bf * bf / (8.0 * m)) / k);
  const double sp = std::sqrt(2.0 * m * k);
  const Rule r = hermite(nodes);
  long double sum = 0.0L;
  for (int i = 0; i < nodes; ++i) {
    for (int j = 0; j < nodes; ++j) {
      for (int a = 0; a < nodes; ++a) {
        for (int b = 0; b < nodes; ++b) {
          const double e = r.t[i] * r.t[i] + r.t[j] * r.t[j] + r.t[a] * r.t[a] + r.t[b] * r.t[b];
          const double f = wigner_value(sx * r.t[i], sx * r.t[j], sp * r.t[a], sp * r.t[b], p) * std::exp(e);
          sum += static_cast<long double>(r.w[i] * r.w[j] * r.w[a] * r.w[b] * f);
        }
      }
    }
  }
  return static_cast<double>(sum) * sx * sx * sp * sp;
}

Expectation number_state_expectation(const std::function<std::complex<double>(double, double, double, double)>& f,
                                     int n, double mass, double omega, int nodes) {
  // W_n(x, p) = (-1)^n / pi exp(-(xi^2 + zeta^2)) L_n(2 (xi^2 + zeta^2)), xi = x sqrt(m w), zeta = p / sqrt(m w).
  const double sx = 1.0 / std::sqrt(mass * omega), sp = std::sqrt(mass * omega);
  const double sign = n % 2 == 0 ? 1.0 : -1.0;
  const Rule r = hermite(nodes);
  Expectation out;
  std::complex<double> sum = 0.0;
  for (int i = 0; i < nodes; ++i) {
    for (int a = 0; a < nodes; ++a) {
      const double rho = r.t[i] * r.t[i] + r.t[a] * r.t[a];
      const double wn = sign / std::numbers::pi * gsl_sf_laguerre_n(n, 0.0, 2.0 * rho);
      for (int j = 0; j < nodes; ++j) {
        for (int b = 0; b < nodes; ++b) {
          const double w = r.w[i] * r.w[a] * r.w[j] * r.w[b] * wn / std::numbers::pi;
          const auto v = f(sx * r.t[i], sx * r.t[j], sp * r.t[a], sp * r.t[b]);
          sum += w * v;
          out.magnitude += std::abs(w) * std::abs(v);
        }
      }
    }
  }
  out.value = sum;
  return out;
}

}  // namespace adec::oracle
