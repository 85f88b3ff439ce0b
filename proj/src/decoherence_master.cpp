#include "adec/decoherence_master.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>

#include "adec/errors.hpp"

namespace adec {
namespace {

constexpr std::size_t kComponents = 2 * kRateTerms + 1;  // nu b_k, tau nu b_k, then nu
using Vec = std::array<double, kComponents>;

// Gauss-Kronrod 7/15 nodes and weights; index 7 is the centre, odd indices are Gauss nodes.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                                       0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a = 0.0;
  double b = 0.0;
  Vec value{};
  Vec error{};
  Vec l1{};
  double badness = 0.0;  // max over components of error / tolerance
  bool operator<(const Panel& o) const { return badness < o.badness; }
};

template <class F>
Panel gk15(const F& f, double a, double b) {
  Panel p{a, b};
  const double c = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  Vec kron{}, gauss{}, l1{};
  auto accumulate = [&](const Vec& v, double wk, double wg) {
    for (std::size_t k = 0; k < kComponents; ++k) {
      kron[k] += wk * v[k];
      gauss[k] += wg * v[k];
      l1[k] += wk * std::abs(v[k]);
    }
  };
  accumulate(f(c), kWgk[7], kWg[3]);
  for (int j = 0; j < 7; ++j) {
    const double wg = (j % 2 == 1) ? kWg[j / 2] : 0.0;
    const double dx = half * kXgk[j];
    accumulate(f(c - dx), kWgk[j], wg);
    accumulate(f(c + dx), kWgk[j], wg);
  }
  for (std::size_t k = 0; k < kComponents; ++k) {
    p.value[k] = half * kron[k];
    p.error[k] = std::abs(half * (kron[k] - gauss[k]));
    p.l1[k] = std::abs(half) * l1[k];
  }
  return p;
}

}  // namespace

void MasterConfig::validate() const {
  if (!(rel_tol > 0.0) || !(kernel_tol > 0.0)) throw DomainError("MasterConfig: tolerances must be positive");
  if (!(t_max > 0.0) || !std::isfinite(t_max)) throw DomainError("MasterConfig: t_max must be positive");
  if (samples < 2) throw DomainError("MasterConfig: samples must be at least 2");
  if (max_intervals < 1) throw DomainError("MasterConfig: max_intervals must be positive");
}

std::vector<double> MasterConfig::grid() const {
  std::vector<double> t(samples);
  const double n = static_cast<double>(samples - 1);
  for (std::size_t i = 0; i < samples; ++i) t[i] = t_max * (static_cast<double>(i) / n);
  return t;
}

std::array<double, kRateTerms> rate_coefficients(const CoherencePair& pair, double alpha) {
  const double dx = pair.delta_x();
  const double dy = pair.delta_y();
  return {dx * dx + dy * dy, 2.0 * alpha * pair.x_bar() * dx * dx, alpha * pair.delta_xy() * dx,
          2.0 * alpha * pair.y_bar() * dx * dy, 2.0 * alpha * pair.y_bar() * dy * dy};
}

DecoherenceModel::DecoherenceModel(const OscillatorSpec& spec, const BathSpec& bath, const MasterConfig& cfg)
    : spec_(spec), cfg_(cfg), kernels_(bath, cfg.kernel_tol) {
  spec_.validate();
  bath.validate();
  cfg_.validate();
  coeffs_ = derive_first_order_coefficients(spec_);
  freq_ = derive_frequencies(spec_);
  memory_ = 1.0 / std::max(bath.lambda_cutoff, bath.omega_th);
}

std::array<double, kRateTerms> DecoherenceModel::weights(double tau) const {
  double harmonic = 0.0;
  if (cfg_.trig_mode == TrigMode::cos) {
    harmonic = 0.5 * (std::cos(freq_.a * tau) + std::cos(freq_.b * tau));
  } else {
    harmonic = 0.5 * (std::cosh(freq_.a * tau) + std::cosh(freq_.b * tau));
  }
  return {harmonic, coeffs_.f0()(-tau), coeffs_.f1()(-tau), coeffs_.f2()(-tau), std::cos(spec_.omega0 * tau)};
}

TrigSeries DecoherenceModel::weight_series(const CoherencePair& pair, double alpha) const {
  if (cfg_.trig_mode != TrigMode::cos) throw DomainError("weight_series: only defined for trig_mode = cos");
  const auto c = rate_coefficients(pair, alpha);
  auto reflect = [](const TrigSeries& s) {
    std::vector<TrigTerm> terms = s.terms();
    for (auto& term : terms) term.sin_coef = -term.sin_coef;
    return TrigSeries(std::move(terms));
  };
  TrigSeries harmonic({TrigTerm{0, 0, freq_.a, 0.5, 0.0}, TrigTerm{0, 0, freq_.b, 0.5, 0.0}});
  TrigSeries out = c[0] * harmonic;
  out += c[1] * reflect(coeffs_.f0());
  out += c[2] * reflect(coeffs_.f1());
  out += c[3] * reflect(coeffs_.f2());
  out += c[4] * TrigSeries({TrigTerm{0, 0, spec_.omega0, 1.0, 0.0}});
  return out;
}

DecoherenceModel::Moments DecoherenceModel::moments(const std::vector<double>& grid) const {
  if (grid.empty() || !(grid.front() >= 0.0)) throw DomainError("moments: grid must start at a time >= 0");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) throw DomainError("moments: grid must be strictly ascending");
  }
  if (cfg_.trig_mode == TrigMode::cosh && freq_.a * grid.back() > 30.0) {
    throw DomainError("trig_mode = cosh: A t = " + std::to_string(freq_.a * grid.back()) +
                      " exceeds 30; the hyperbolic weights grow like exp(A tau) and h(t) diverges on this branch");
  }

  auto integrand = [this](double tau) {
    const double nu = kernels_.noise(tau).value;
    const auto w = weights(tau);
    Vec v{};
    for (std::size_t k = 0; k < kRateTerms; ++k) {
      v[k] = nu * w[k];
      v[kRateTerms + k] = tau * v[k];
    }
    v[2 * kRateTerms] = nu;
    return v;
  };

  // Absolute floor per component: rel_tol * sup|b_k| * int |nu|. Components
  // whose weight is rounding noise near tau = 0 cannot meet a relative test.
  auto bound = [](const TrigSeries& s) {
    double b = 0.0;
    for (const auto& term : s.terms()) b += std::abs(term.cos_coef) + std::abs(term.sin_coef);
    return b;
  };
  const std::array<double, kRateTerms> sup_weight = {1.0, bound(coeffs_.f0()), bound(coeffs_.f1()), bound(coeffs_.f2()),
                                                     1.0};

  auto cell = [&](double a, double b) {
    std::priority_queue<Panel> queue;
    Vec err{}, l1{};
    auto add = [&](const Panel& p, double sign) {
      for (std::size_t k = 0; k < kComponents; ++k) {
        err[k] += sign * p.error[k];
        l1[k] += sign * p.l1[k];
      }
    };
    const double harmonic_sup =
        cfg_.trig_mode == TrigMode::cos ? 1.0 : 0.5 * (std::cosh(freq_.a * b) + std::cosh(freq_.b * b));
    // Far in the tail nu can fall below the rounding of its own peak.
    const double nu_floor = 1e-15 * kernels_.scale() * (b - a);
    auto tolerance = [&](std::size_t k) {
      if (k == 2 * kRateTerms) return std::max(cfg_.rel_tol * l1[k], nu_floor);
      const std::size_t j = k % kRateTerms;
      const double sup = (j == 0 ? harmonic_sup : sup_weight[j]) * (k >= kRateTerms ? b : 1.0);
      return std::max(cfg_.rel_tol * std::max(l1[k], sup * l1[2 * kRateTerms]), sup * nu_floor);
    };
    auto score = [&](Panel& p) {
      p.badness = 0.0;
      for (std::size_t k = 0; k < kComponents; ++k) {
        const double tol = tolerance(k);
        if (p.error[k] > 0.0) p.badness = std::max(p.badness, tol > 0.0 ? p.error[k] / tol : HUGE_VAL);
      }
    };
    // Seed breakpoints on the kernel memory scale so that a long first panel
    // cannot step over the peak of nu near tau = 0.
    std::vector<double> edges{a};
    for (double p = memory_; p < b; p *= 4.0) {
      if (p > a) edges.push_back(p);
    }
    edges.push_back(b);
    std::vector<Panel> initial;
    for (std::size_t i = 1; i < edges.size(); ++i) {
      initial.push_back(gk15(integrand, edges[i - 1], edges[i]));
      add(initial.back(), 1.0);
    }
    for (auto& p : initial) {
      score(p);
      queue.push(p);
    }
    int intervals = static_cast<int>(initial.size());
    for (;;) {
      bool done = true;
      for (std::size_t k = 0; k < kComponents; ++k) {
        // Summed per-panel errors of a cumulative total drift below the rounding
        // of the total itself; treat that level as converged.
        if (err[k] > tolerance(k) && err[k] > 1e-15 * l1[k]) done = false;
      }
      if (done) break;
      if (intervals >= cfg_.max_intervals) {
        double worst = 0.0;
        for (std::size_t k = 0; k < kComponents; ++k) worst = std::max(worst, err[k] / std::max(l1[k], 1e-300));
        throw NumericError("h(t) inner quadrature did not converge on [" + std::to_string(a) + ", " +
                               std::to_string(b) + "]",
                           worst);
      }
      Panel worst = queue.top();
      queue.pop();
      add(worst, -1.0);
      const double mid = 0.5 * (worst.a + worst.b);
      Panel left = gk15(integrand, worst.a, mid);
      Panel right = gk15(integrand, mid, worst.b);
      add(left, 1.0);
      add(right, 1.0);
      // Rescore with the updated scale; stale entries only affect the order of refinement.
      score(left);
      score(right);
      queue.push(left);
      queue.push(right);
      ++intervals;
    }
    // Re-sum the panels in a fixed order for a result independent of the
    // add/subtract history.
    std::vector<Panel> panels;
    while (!queue.empty()) {
      panels.push_back(queue.top());
      queue.pop();
    }
    std::sort(panels.begin(), panels.end(), [](const Panel& p, const Panel& q) { return p.a < q.a; });
    Vec sum{};
    for (const auto& p : panels) {
      for (std::size_t k = 0; k < kComponents; ++k) sum[k] += p.value[k];
    }
    return sum;
  };

  Moments m;
  m.t = grid;
  m.m0.resize(grid.size());
  m.m1.resize(grid.size());
  std::array<double, kRateTerms> q0{}, q1{};
  m.m0[0] = q0;
  m.m1[0] = q1;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const Vec v = cell(grid[i - 1], grid[i]);
    for (std::size_t k = 0; k < kRateTerms; ++k) {
      q0[k] += v[k];
      q1[k] += v[kRateTerms + k];
    }
    m.m0[i] = q0;
    m.m1[i] = q1;
  }
  return m;
}

namespace {

double assemble_rate(const std::array<double, kRateTerms>& c, const std::array<double, kRateTerms>& m0) {
  double h = 0.0;
  for (std::size_t k = 0; k < kRateTerms; ++k) h += c[k] * m0[k];
  return h;
}

double assemble_heating(const std::array<double, kRateTerms>& c, double t, const std::array<double, kRateTerms>& m0,
                        const std::array<double, kRateTerms>& m1) {
  double f = 0.0;
  for (std::size_t k = 0; k < kRateTerms; ++k) f += c[k] * (t * m0[k] - m1[k]);
  return f;
}

void fill_ratio(DecoherenceSeries& s) {
  s.rdm_ratio.resize(s.f_heating.size());
  for (std::size_t i = 0; i < s.f_heating.size(); ++i) s.rdm_ratio[i] = std::exp(-s.f_heating[i]);
}

}  // namespace

double h_of_t(double t, const OscillatorSpec& spec, const BathSpec& bath, const CoherencePair& pair,
              const MasterConfig& cfg) {
  if (!(t >= 0.0)) throw DomainError("h_of_t: t must be nonnegative");
  if (t == 0.0) return 0.0;
  DecoherenceModel model(spec, bath, cfg);
  const auto m = model.moments({0.0, t});
  return assemble_rate(rate_coefficients(pair, spec.alpha), m.m0[1]);
}

DecoherenceSeries heating_function(const DecoherenceModel& model, const std::vector<double>& grid,
                                   const CoherencePair& pair, double alpha) {
  const auto m = model.moments(grid);
  const auto c = rate_coefficients(pair, alpha);
  DecoherenceSeries s;
  s.mode = SeriesMode::non_markovian;
  s.t = grid;
  s.h.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) s.h[i] = assemble_rate(c, m.m0[i]);
  if (model.config().heating_method == HeatingMethod::simpson) {
    s.f_heating = cumulative_simpson_checked(grid, s.h);
  } else {
    s.f_heating.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) s.f_heating[i] = assemble_heating(c, grid[i], m.m0[i], m.m1[i]);
  }
  s.f_heating[0] = 0.0;
  fill_ratio(s);
  return s;
}

DecoherenceSeries heating_function(const std::vector<double>& grid, const OscillatorSpec& spec, const BathSpec& bath,
                                   const CoherencePair& pair, const MasterConfig& cfg) {
  DecoherenceModel model(spec, bath, cfg);
  return heating_function(model, grid, pair, spec.alpha);
}

DecoherenceSeries markovian_heating(const DecoherenceModel& model, const std::vector<double>& grid,
                                    const CoherencePair& pair, double alpha) {
  if (grid.empty() || grid.front() != 0.0) throw DomainError("markovian_heating: grid must start at 0");
  const auto c = rate_coefficients(pair, alpha);
  constexpr double kCell = 0.25;
  constexpr int kMaxDoublings = 6;
  const double start = std::max(model.config().t_max, 4.0);

  // Heating function at the cumulative nodes, extended window by window.
  std::vector<double> nodes{0.0};
  std::vector<double> heating{0.0};
  std::array<double, kRateTerms> q0{}, q1{};
  auto extend_to = [&](double end) {
    const double from = nodes.back();
    const auto cells = 2 * static_cast<std::size_t>(std::ceil((end - from) / (2.0 * kCell)));
    std::vector<double> local(cells + 1);
    for (std::size_t i = 0; i <= cells; ++i) {
      local[i] = from + (end - from) * (static_cast<double>(i) / static_cast<double>(cells));
    }
    const auto m = model.moments(local);
    const auto base0 = q0, base1 = q1;
    for (std::size_t i = 1; i < local.size(); ++i) {
      for (std::size_t k = 0; k < kRateTerms; ++k) {
        q0[k] = base0[k] + m.m0[i][k];
        q1[k] = base1[k] + m.m1[i][k];
      }
      nodes.push_back(local[i]);
      heating.push_back(assemble_heating(c, local[i], q0, q1));
    }
  };
  auto heating_at = [&](double t) {
    const auto it = std::lower_bound(nodes.begin(), nodes.end(), t - 1e-12 * t);
    return heating[static_cast<std::size_t>(it - nodes.begin())];
  };
  auto tail_mean = [&](double window) { return (heating_at(window) - heating_at(0.75 * window)) / (0.25 * window); };

  extend_to(0.75 * start);
  extend_to(start);
  double window = start;
  double previous = tail_mean(window);
  double current = previous;
  bool converged = false;
  for (int d = 0; d < kMaxDoublings; ++d) {
    extend_to(1.5 * window);
    extend_to(2.0 * window);
    window *= 2.0;
    current = tail_mean(window);
    const double diff = std::abs(current - previous);
    if (diff <= 1e-3 * std::abs(current) || (current == 0.0 && previous == 0.0)) {
      converged = true;
      break;
    }
    previous = current;
  }
  if (!converged) {
    throw NumericError("markovian_heating: tail mean of h(t) not stable to 1e-3 up to window " + std::to_string(window),
                       std::abs(current - previous) / std::max(std::abs(current), 1e-300));
  }

  DecoherenceSeries s;
  s.mode = SeriesMode::markovian;
  s.h_infinity = current;
  s.window = window;
  s.t = grid;
  s.h.assign(grid.size(), current);
  s.f_heating.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) s.f_heating[i] = current * grid[i];
  fill_ratio(s);
  return s;
}

DecoherenceSeries markovian_heating(const std::vector<double>& grid, const OscillatorSpec& spec, const BathSpec& bath,
                                    const CoherencePair& pair, const MasterConfig& cfg) {
  DecoherenceModel model(spec, bath, cfg);
  return markovian_heating(model, grid, pair, spec.alpha);
}

std::vector<double> cumulative_simpson(const std::vector<double>& t, const std::vector<double>& f) {
  const std::size_t n = t.size();
  if (n != f.size()) throw DomainError("cumulative_simpson: size mismatch");
  if (n < 3) throw DomainError("cumulative_simpson: needs at least 3 samples");
  const double step = (t.back() - t.front()) / static_cast<double>(n - 1);
  for (std::size_t i = 1; i < n; ++i) {
    if (std::abs((t[i] - t[i - 1]) - step) > 1e-9 * std::abs(step)) {
      throw DomainError("cumulative_simpson: grid must be uniform");
    }
  }
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    double cell = 0.0;
    if (i + 2 < n) {
      cell = step / 12.0 * (5.0 * f[i] + 8.0 * f[i + 1] - f[i + 2]);
    } else {
      cell = step / 12.0 * (-f[i - 1] + 8.0 * f[i] + 5.0 * f[i + 1]);
    }
    out[i + 1] = out[i] + cell;
  }
  return out;
}

std::vector<double> cumulative_simpson_checked(const std::vector<double>& t, const std::vector<double>& f,
                                               double rel_tol) {
  if (t.size() < 5 || t.size() % 2 == 0) {
    throw DomainError("cumulative_simpson_checked: needs an odd number of samples, at least 5");
  }
  auto fine = cumulative_simpson(t, f);
  std::vector<double> tc, fc;
  for (std::size_t i = 0; i < t.size(); i += 2) {
    tc.push_back(t[i]);
    fc.push_back(f[i]);
  }
  const auto coarse = cumulative_simpson(tc, fc);
  double scale = 0.0, diff = 0.0;
  for (double v : fine) scale = std::max(scale, std::abs(v));
  for (std::size_t j = 0; j < coarse.size(); ++j) diff = std::max(diff, std::abs(fine[2 * j] - coarse[j]));
  if (diff > rel_tol * scale) {
    throw ResolutionError("heating_function: Simpson and its half-resolution estimate disagree; use a finer grid",
                          scale > 0.0 ? diff / scale : diff);
  }
  return fine;
}

CoherenceTime coherence_time(const DecoherenceSeries& series) {
  CoherenceTime out;
  const auto& r = series.rdm_ratio;
  if (r.empty()) return out;
  out.final_ratio = r.back();
  const double target = std::exp(-1.0);
  for (std::size_t i = 1; i < r.size(); ++i) {
    if (r[i] <= target) {
      const double frac = (r[i - 1] - target) / (r[i - 1] - r[i]);
      out.reached = true;
      out.time = series.t[i - 1] + frac * (series.t[i] - series.t[i - 1]);
      return out;
    }
  }
  return out;
}

double anharmonic_commutator_expanded(double x, double x_prime) {
  return x_prime * x_prime * x_prime - x_prime * x * x - x_prime * x_prime * x + x * x * x;
}

std::vector<DiffusionTerm> wigner_diffusion_form(const CoherencePair& pair, const OscillatorSpec& spec) {
  const double a = spec.alpha;
  const double x = pair.x, xp = pair.x_prime, y = pair.y, yp = pair.y_prime;
  // <a'b'| [A,[B,rho]] |ab> / <..|rho|..> = a'b' - a'b - b'a + ba for diagonal A, B.
  auto expand = [](double ap, double am, double bp, double bm) { return ap * bp - ap * bm - bp * am + bm * am; };
  const double dx = pair.delta_x(), dy = pair.delta_y();
  return {
      {"[X,[X,rho]]", "d^2/dp_x^2", dx * dx, expand(xp, x, xp, x)},
      {"[Y,[Y,rho]]", "d^2/dp_y^2", dy * dy, expand(yp, y, yp, y)},
      {"alpha[X,[X^2,rho]]", "2 alpha x d^2/dp_x^2", a * pair.x_bar() * dx * dx, a * anharmonic_commutator_expanded(x, xp)},
      {"alpha[X,[XY,rho]]", "alpha (y d^2/dp_x^2 + x d^2/dp_x dp_y)", a * pair.delta_xy() * dx,
       a * expand(xp, x, xp * yp, x * y)},
      {"alpha[X,[Y^2,rho]]", "2 alpha y d^2/dp_x dp_y", a * pair.y_bar() * dy * dx, a * expand(xp, x, yp * yp, y * y)},
      {"alpha[Y,[Y^2,rho]]", "2 alpha y d^2/dp_y^2", a * pair.y_bar() * dy * dy, a * expand(yp, y, yp * yp, y * y)},
  };
}

}  // namespace adec
