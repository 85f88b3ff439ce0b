#include "dynamics_oracles.hpp"

#include <array>

#include <boost/numeric/odeint.hpp>

namespace adec::oracle {
namespace {

namespace odeint = boost::numeric::odeint;

template <std::size_t N, class System>
std::vector<std::array<double, N>> integrate(System system, std::array<double, N> state, const std::vector<double>& times,
                                             double tol) {
  using stepper = odeint::runge_kutta_fehlberg78<std::array<double, N>>;
  std::vector<std::array<double, N>> out;
  out.reserve(times.size());
  auto observer = [&](const std::array<double, N>& s, double) { out.push_back(s); };
  std::vector<double> grid = times;
  if (grid.empty() || grid.front() != 0.0) grid.insert(grid.begin(), 0.0);
  odeint::integrate_times(odeint::make_controlled(tol, tol, stepper()), system, state, grid.begin(), grid.end(),
                          1e-4, observer);
  if (times.empty() || times.front() != 0.0) out.erase(out.begin());
  return out;
}

}  // namespace

std::vector<PhasePoint> nonlinear_trajectory(const OscillatorSpec& spec, const std::vector<double>& times, double tol) {
  const double w2 = spec.omega0 * spec.omega0, wc = spec.omega_c, a = spec.alpha;
  auto rhs = [=](const std::array<double, 4>& s, std::array<double, 4>& d, double) {
    d[0] = s[2];
    d[1] = s[3];
    d[2] = -w2 * s[0] + 3.0 * a * w2 * s[0] * s[0] + wc * s[3];
    d[3] = -w2 * s[1] - wc * s[2];
  };
  const auto& i = spec.initial;
  const auto states = integrate<4>(rhs, {i.x, i.y, i.vx, i.vy}, times, tol);
  std::vector<PhasePoint> out;
  for (std::size_t k = 0; k < states.size(); ++k)
    out.push_back({states[k][0], states[k][1], states[k][2], states[k][3], times[k]});
  return out;
}

std::vector<PhasePoint> first_order_trajectory(const OscillatorSpec& spec, const std::vector<double>& times, double tol) {
  const double w2 = spec.omega0 * spec.omega0, wc = spec.omega_c;
  // state: x0, y0, vx0, vy0, x1, y1, vx1, vy1
  auto rhs = [=](const std::array<double, 8>& s, std::array<double, 8>& d, double) {
    d[0] = s[2];
    d[1] = s[3];
    d[2] = -w2 * s[0] + wc * s[3];
    d[3] = -w2 * s[1] - wc * s[2];
    d[4] = s[6];
    d[5] = s[7];
    d[6] = -w2 * s[4] + wc * s[7] + 3.0 * w2 * s[0] * s[0];
    d[7] = -w2 * s[5] - wc * s[6];
  };
  const auto& i = spec.initial;
  const auto states = integrate<8>(rhs, {i.x, i.y, i.vx, i.vy, 0.0, 0.0, 0.0, 0.0}, times, tol);
  std::vector<PhasePoint> out;
  for (std::size_t k = 0; k < states.size(); ++k)
    out.push_back({states[k][4], states[k][5], states[k][6], states[k][7], times[k]});
  return out;
}

}  // namespace adec::oracle
