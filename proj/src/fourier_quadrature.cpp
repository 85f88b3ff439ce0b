#include "adec/fourier_quadrature.hpp"

#include <algorithm>
#include <array>
#include <mutex>
#include <numbers>
#include <vector>

#include "adec/errors.hpp"

namespace adec {
namespace {

constexpr int kMaxLevel = 12;

struct LevelTable {
  std::vector<double> nodes;    // y_n = M phi(t_n); the integrand is sampled at y_n / omega
  std::vector<double> weights;  // h M phi'(t_n) trig(y_n)
};

// phi(t) = t / (1 - exp(-u(t))), u(t) = 2t + a (1 - e^-t) + b (e^t - 1).
struct Transform {
  double a;
  double b = 0.25;

  double u(double t) const { return 2.0 * t + a * (1.0 - std::exp(-t)) + b * (std::exp(t) - 1.0); }
  double du(double t) const { return 2.0 + a * std::exp(-t) + b * std::exp(t); }

  struct Values {
    double phi;
    double excess;  // phi - t, accurate where phi ~ t
    double dphi;
  };

  // Valid for t != 0.
  Values eval(double t) const {
    const double ut = u(t);
    const double denom = -std::expm1(-ut);  // 1 - e^-u
    const double dphi = (denom - t * du(t) * std::exp(-ut)) / (denom * denom);
    return {t / denom, t / std::expm1(ut), dphi};
  }
};

LevelTable build_level(int level, FourierKind kind) {
  const double h = std::ldexp(1.0, -level);
  const double m = std::numbers::pi / h;
  Transform tr{0.25 / std::sqrt(1.0 + m * std::log1p(m) / (4.0 * std::numbers::pi))};
  const double shift = kind == FourierKind::cosine ? 0.5 : 0.0;

  LevelTable table;
  // Returns |w_n| and whether the node lies in the regime where |w| decays
  // monotonically (no further sign changes of the trig factor).
  auto add = [&](long n) -> std::pair<double, bool> {
    const double t = (static_cast<double>(n) - shift) * h;
    Transform::Values v{};
    if (t == 0.0) {
      const double u1 = tr.du(0.0);
      const double u2 = tr.b - tr.a;
      v = {1.0 / u1, 0.0, 0.5 * (1.0 - u2 / (u1 * u1))};
    } else {
      v = tr.eval(t);
    }
    const double excess = v.excess;
    const double dphi = v.dphi;
    const double y = m * v.phi;
    // trig(M phi) with M t = (n - shift) pi exactly.
    const double sign = (n % 2 == 0) ? 1.0 : -1.0;
    const double d = m * excess;
    double trig = 0.0;
    if (kind == FourierKind::sine) {
      trig = t > 1.0 ? sign * std::sin(d) : std::sin(y);
    } else {
      trig = t > 1.0 ? sign * std::sin(d) : std::cos(y);
    }
    const double w = h * m * dphi * trig;
    if (y > 0.0 && std::isfinite(w) && std::isfinite(y)) {
      table.nodes.push_back(y);
      table.weights.push_back(w);
    }
    const bool monotone = t > 0.0 ? std::abs(d) < 1.0 : y < 1.0;
    return {std::abs(w), monotone};
  };

  double max_w = 0.0;
  long n = 0;
  for (;; ++n) {
    const auto [w, monotone] = add(n);
    max_w = std::max(max_w, w);
    const double t = (static_cast<double>(n) - shift) * h;
    if (t > 1.0 && monotone && w < 1e-18 * max_w) break;
    if (n > 200000) break;
  }
  for (n = -1;; --n) {
    const std::size_t before = table.nodes.size();
    const auto [w, monotone] = add(n);
    if (table.nodes.size() == before) break;  // node underflowed to zero
    if (monotone && w < 1e-300) break;
    if (n < -200000) break;
  }
  return table;
}

const LevelTable& level_table(int level, FourierKind kind) {
  static std::array<std::array<LevelTable, kMaxLevel + 1>, 2> tables;
  static std::array<std::once_flag, 2 * (kMaxLevel + 1)> flags;
  const int k = kind == FourierKind::sine ? 0 : 1;
  std::call_once(flags[k * (kMaxLevel + 1) + level],
                 [&] { tables[k][level] = build_level(level, kind); });
  return tables[k][level];
}

double estimate(const std::function<double(double)>& f, double omega, const LevelTable& table) {
  double sum = 0.0;
  const double inv = 1.0 / omega;
  for (std::size_t j = 0; j < table.nodes.size(); ++j) {
    const double w = table.weights[j];
    if (w == 0.0) continue;
    sum += w * f(table.nodes[j] * inv);
  }
  return sum * inv;
}

}  // namespace

QuadratureResult fourier_integral(const std::function<double(double)>& f, double omega, FourierKind kind,
                                  double rel_tol, double abs_floor, int max_level) {
  if (!(omega > 0.0)) throw DomainError("fourier_integral: omega must be positive");
  max_level = std::clamp(max_level, 1, kMaxLevel);
  QuadratureResult result;
  double previous = std::numeric_limits<double>::quiet_NaN();
  for (int level = 0; level <= max_level; ++level) {
    const double current = estimate(f, omega, level_table(level, kind));
    if (!std::isnan(previous)) {
      const double err = std::abs(current - previous);
      result.value = current;
      result.abs_error = err;
      result.level = level;
      if (err <= rel_tol * std::abs(current) || err <= abs_floor) {
        result.converged = true;
        return result;
      }
    }
    previous = current;
  }
  return result;
}

}  // namespace adec
