// Acceptance gate: one PASS/FAIL line per criterion.
//
// Exit status is 0 when the set of failing criteria equals --known-failures
// (empty by default), so an unexpected failure and an unexpected pass both
// make the run fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "adec/bath_kernels.hpp"
#include "adec/decoherence_master.hpp"
#include "adec/perturbative_dynamics.hpp"
#include "adec/sweep_runner.hpp"
#include "adec/wigner_weyl_entropy.hpp"
#include "dynamics_oracles.hpp"
#include "wigner_oracles.hpp"

using namespace adec;

namespace {

struct Outcome {
  bool pass = true;
  std::vector<std::string> notes;

  void check(bool ok, const std::string& what) {
    if (!ok) pass = false;
    notes.push_back(std::string(ok ? "ok " : "FAILED ") + what);
  }
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<double> linspace(double a, double b, std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
  return v;
}

// 1. Kernels against closed forms.
Outcome kernels() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  BathSpec bath;
  bath.omega_th = 0.0;
  const KernelEvaluator k(bath);
  double worst_eta = 0.0;
  for (double tau : linspace(1e-4, 1e-2, 100)) {
    const double exact = dissipation_kernel_closed_form(tau, bath);
    worst_eta = std::max(worst_eta, std::abs(k.dissipation(tau).value - exact) / std::abs(exact));
  }
  o.check(worst_eta < 1e-8, "dissipation vs m gamma L^2 exp(-L tau): max rel " + num(worst_eta) + " < 1e-8");

  BathSpec hot = bath;
  hot.omega_th = 1e6;
  const KernelEvaluator kh(hot);
  double worst_nu = 0.0;
  for (double tau : linspace(1e-4, 1e-2, 100)) {
    const double exact = noise_kernel_high_temperature(tau, hot);
    worst_nu = std::max(worst_nu, std::abs(kh.noise(tau).value - exact) / std::abs(exact));
  }
  o.check(worst_nu < 1e-4, "noise vs high-T limit at omega_th 1e6: max rel " + num(worst_nu) + " < 1e-4");
  const double s = seconds_since(t0);
  o.check(s < 5.0, "runtime " + num(s) + " s < 5 s");
  return o;
}

// 2. Trajectories against ODE integrations.
Outcome trajectories() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  OscillatorSpec spec;
  spec.initial = {1.0, 0.5, 0.3, -0.2};
  const auto times = linspace(0.0, 10.0 / spec.omega0, 201);

  const auto ref = oracle::nonlinear_trajectory(spec, times);
  double harm = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const auto p = perturbative_trajectory(times[i], spec);
    harm = std::max({harm, std::abs(p.x - ref[i].x), std::abs(p.y - ref[i].y)});
  }
  o.check(harm < 1e-8, "harmonic closed form vs ODE: max abs " + num(harm) + " < 1e-8");

  const auto k = derive_first_order_coefficients(spec);
  const auto driven = oracle::first_order_trajectory(spec, times);
  OscillatorSpec unit = spec;
  unit.alpha = 1.0;
  double first = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    TrajectoryForm quad = perturbative_form(times[i], unit, k);
    quad.linear = {};
    const auto v = quad.evaluate(spec.initial);
    first = std::max({first, std::abs(v[0] - driven[i].x), std::abs(v[1] - driven[i].y)});
  }
  o.check(first < 1e-7, "first-order closed form vs driven ODE: max abs " + num(first) + " < 1e-7");

  auto deviation = [&](double alpha) {
    OscillatorSpec s = spec;
    s.alpha = alpha;
    const auto c = derive_first_order_coefficients(s);
    const auto nl = oracle::nonlinear_trajectory(s, times);
    double worst = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
      const auto p = perturbative_trajectory(times[i], s, c);
      worst = std::max({worst, std::abs(p.x - nl[i].x), std::abs(p.y - nl[i].y)});
    }
    return worst;
  };
  const std::vector<double> alphas{0.01, 0.02, 0.04};
  std::vector<double> lx, ly;
  for (double a : alphas) {
    lx.push_back(std::log(a));
    ly.push_back(std::log(deviation(a)));
  }
  // Least-squares slope through the three points.
  const double mx = (lx[0] + lx[1] + lx[2]) / 3.0, my = (ly[0] + ly[1] + ly[2]) / 3.0;
  double sxy = 0.0, sxx = 0.0;
  for (int i = 0; i < 3; ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  const double slope = sxy / sxx;
  o.check(std::abs(slope - 2.0) <= 0.3, "log-log slope of perturbative error " + num(slope) + " in 2 +- 0.3");
  const double s = seconds_since(t0);
  o.check(s < 30.0, "runtime " + num(s) + " s < 30 s");
  return o;
}

BathSpec bath_at(double omega_th) {
  BathSpec b;
  b.omega_th = omega_th;
  return b;
}

const std::vector<double> kAlphas{0.0, 0.05, 0.1};

// 3. Alpha and temperature ordering of the density-matrix ratio, and pinned values.
Outcome ordering() {
  Outcome o;
  const MasterConfig cfg;
  const auto grid = cfg.grid();
  // Ratios underflow at high temperature; F_H = -ln(ratio) carries the same order.
  std::vector<std::vector<double>> low, high;
  const DecoherenceModel cold(OscillatorSpec{}, bath_at(0.1), cfg);
  const DecoherenceModel hot(OscillatorSpec{}, bath_at(1e4), cfg);
  for (double a : kAlphas) {
    low.push_back(heating_function(cold, grid, CoherencePair{}, a).f_heating);
    high.push_back(heating_function(hot, grid, CoherencePair{}, a).f_heating);
  }
  auto ordered = [&](const std::vector<std::vector<double>>& f, int& bad) {
    bad = 0;
    for (std::size_t i = 0; i < grid.size(); ++i)
      if (grid[i] > 0.05 && !(f[2][i] > f[1][i] && f[1][i] > f[0][i])) ++bad;
    return bad == 0;
  };
  int bad_low = 0, bad_high = 0;
  const bool lo = ordered(low, bad_low), hi = ordered(high, bad_high);
  const int sampled = static_cast<int>(std::count_if(grid.begin(), grid.end(), [](double t) { return t > 0.05; }));
  o.check(lo, "low T: ratio(0.1) < ratio(0.05) < ratio(0) at " + std::to_string(sampled - bad_low) + "/" +
                  std::to_string(sampled) + " samples t > 0.05 (F_H(2) = " + num(low[0].back()) + ", " +
                  num(low[1].back()) + ", " + num(low[2].back()) + ")");
  o.check(hi, "high T: ratio(0.1) < ratio(0.05) < ratio(0) at " + std::to_string(sampled - bad_high) + "/" +
                  std::to_string(sampled) + " samples t > 0.05");
  int bad_t = 0;
  for (std::size_t a = 0; a < kAlphas.size(); ++a)
    for (std::size_t i = 1; i < grid.size(); ++i)
      if (!(high[a][i] > low[a][i])) ++bad_t;
  o.check(bad_t == 0, "high-T ratio < low-T ratio pointwise for each alpha (" + std::to_string(bad_t) + " violations)");

  // F_H from the spectral oracle at rel_tol 1e-12; the 1e-4 relative ratio
  // tolerance is 1e-4 absolute in F_H.
  struct Pin {
    double omega_th, alpha;
    double f[4];
  };
  const double times[4] = {0.1, 0.5, 1.0, 2.0};
  const Pin pins[] = {
      {0.1, 0.0, {34.5530477441, 72.8698665627, 122.875610622, 222.929985532}},
      {0.1, 0.05, {33.1852264115, 52.7071574069, 74.703512437, 116.784795597}},
      {0.1, 0.1, {31.817405079, 32.544448251, 26.5314142516, 10.6396056613}},
      {1e4, 0.0, {9899.3591233, 49895.3728553, 99890.3900203, 199880.42435}},
      {1e4, 0.05, {9900.2289578, 49899.8296138, 99899.3304337, 199898.332074}},
      {1e4, 0.1, {9901.09879229, 49904.2863722, 99908.2708471, 199916.239797}},
  };
  double worst = 0.0;
  for (const auto& p : pins) {
    const auto& f = (p.omega_th < 1.0 ? low : high)[p.alpha == 0.0 ? 0 : (p.alpha == 0.05 ? 1 : 2)];
    for (int j = 0; j < 4; ++j) {
      const auto i = static_cast<std::size_t>(std::lround(times[j] / grid[1]));
      // Ratio comparison at high T: both sides underflow, compare exp(-dF) - 1 instead.
      worst = std::max(worst, std::abs(std::expm1(-(f[i] - p.f[j]))));
    }
  }
  o.check(worst < 1e-4, "pinned ratios: max rel " + num(worst) + " < 1e-4");
  return o;
}

int slope_sign_changes(const std::vector<double>& h) {
  int changes = 0;
  double prev = 0.0;
  for (std::size_t i = 1; i < h.size(); ++i) {
    const double d = h[i] - h[i - 1];
    if (prev != 0.0 && d != 0.0 && (d > 0.0) != (prev > 0.0)) ++changes;
    if (d != 0.0) prev = d;
  }
  return changes;
}

double window_amplitude(const DecoherenceSeries& s, double a, double b) {
  double lo = HUGE_VAL, hi = -HUGE_VAL;
  for (std::size_t i = 0; i < s.t.size(); ++i) {
    if (s.t[i] < a || s.t[i] > b) continue;
    lo = std::min(lo, s.h[i]);
    hi = std::max(hi, s.h[i]);
  }
  return hi - lo;
}

// 4. Non-Markovian signature.
Outcome non_markovian() {
  Outcome o;
  const MasterConfig cfg;
  const auto grid = cfg.grid();
  const DecoherenceModel cold(OscillatorSpec{}, bath_at(0.1), cfg);
  for (double a : kAlphas) {
    const auto s = heating_function(cold, grid, CoherencePair{}, a);
    const int changes = slope_sign_changes(s.h);
    o.check(changes >= 3, "low T alpha " + num(a) + ": " + std::to_string(changes) + " sign changes of dh/dt on [0, 2] (>= 3)");
    const double early = window_amplitude(s, 0.1, 0.6), late = window_amplitude(s, 1.5, 2.0);
    o.check(late < 0.1 * early, "low T alpha " + num(a) + ": late/early amplitude " + num(late / early) + " < 0.1");
  }
  for (double omega_th : {0.1, 1e4}) {
    const DecoherenceModel model(OscillatorSpec{}, bath_at(omega_th), cfg);
    for (double a : kAlphas) {
      const auto m = markovian_heating(model, grid, CoherencePair{}, a);
      double worst = 0.0, peak = 0.0;
      for (std::size_t i = 0; i < grid.size(); ++i) {
        worst = std::max(worst, std::abs(m.f_heating[i] - m.h_infinity * grid[i]));
        peak = std::max(peak, std::abs(m.f_heating[i]));
      }
      const std::string tag = "omega_th " + num(omega_th) + " alpha " + num(a);
      o.check(worst / peak < 1e-9, tag + ": Markovian F_H linear, max dev " + num(worst / peak));
      // Beyond the 1/omega_th memory time.
      const std::vector<double> late{0.0, 30.0, 60.0, 64.0};
      const auto s = heating_function(model, late, CoherencePair{}, a);
      const double slope = (s.f_heating[3] - s.f_heating[2]) / (late[3] - late[2]);
      const double rel = std::abs(slope - m.h_infinity) / std::abs(m.h_infinity);
      o.check(rel < 1e-2, tag + ": late dF_H/dt vs h_inf rel " + num(rel) + " < 1e-2");
    }
  }
  return o;
}

// 5. Weyl terms against finite differences.
Outcome weyl() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  WignerParams p;
  p.spec.alpha = 0.05;
  for (const auto& c : verify_weyl_terms(p, 20, 20240607, 1e-5))
    o.check(c.pass, "term " + std::to_string(c.term) + ": max rel " + num(c.max_rel_error) + " < 1e-5");
  const double s = seconds_since(t0);
  o.check(s < 10.0, "runtime " + num(s) + " s < 10 s");
  return o;
}

// 6. Entropy correction.
Outcome entropy() {
  Outcome o;
  o.check(occupation_factor(0) == 3.0 && occupation_factor(1) == 15.0 && occupation_factor(2) == 39.0,
          "g(0), g(1), g(2) = " + num(occupation_factor(0)) + ", " + num(occupation_factor(1)) + ", " +
              num(occupation_factor(2)));
  std::vector<double> alphas, ns{0, 0.5, 1, 2, 3}, ws{2, 5, 10, 20};
  for (int i = 0; i <= 40; ++i) alphas.push_back(0.05 * i);
  const auto rows = entropy_sweep(alphas, ns, ws, EntropyQuery{});
  double worst = 0.0;
  for (const auto& r : rows) {
    if (r.omega0 != EntropyQuery{}.omega0) continue;
    const double want = 4.0 * r.alpha * r.alpha * occupation_factor(r.n_x) / 15.0;
    if (want != 0.0) worst = std::max(worst, std::abs(r.scaled_s - want) / want);
  }
  o.check(worst <= 4.0 * std::numeric_limits<double>::epsilon(), "scaled ratio vs 4 alpha^2 g / 15: max rel " + num(worst));
  auto at = [&](std::size_t ia, std::size_t in, std::size_t iw) {
    return rows[(ia * ns.size() + in) * ws.size() + iw].scaled_s;
  };
  bool mono = true;
  for (std::size_t ia = 0; ia < alphas.size(); ++ia)
    for (std::size_t in = 0; in < ns.size(); ++in)
      for (std::size_t iw = 0; iw < ws.size(); ++iw) {
        if (ia + 1 < alphas.size() && !(at(ia + 1, in, iw) > at(ia, in, iw))) mono = false;
        if (ia > 0 && in + 1 < ns.size() && !(at(ia, in + 1, iw) > at(ia, in, iw))) mono = false;
        if (ia > 0 && iw + 1 < ws.size() && !(at(ia, in, iw + 1) < at(ia, in, iw))) mono = false;
      }
  o.check(mono, "increasing in alpha and n_x, decreasing in omega0");
  WignerParams p;
  p.spec.alpha = 0.05;
  const auto c = normal_ordered_density_coefficients(p);
  for (int n : {0, 1, 2}) {
    const auto e = oracle::number_state_expectation(
        [&](double x, double y, double px, double py) { return c.alpha1(x, y, px, py); }, n, p.spec.mass, p.spec.omega0);
    o.check(std::abs(e.value) < 1e-8, "first-order expectation in |" + std::to_string(n) + ">: " + num(std::abs(e.value)) +
                                          " < 1e-8");
  }
  return o;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

// 7. Two CLI runs of the same figure give identical bytes.
Outcome determinism(const std::string& cli) {
  Outcome o;
  namespace fs = std::filesystem;
  const fs::path root = fs::temp_directory_path() / "adec_acceptance";
  fs::remove_all(root);
  std::vector<std::string> csv;
  for (const char* run : {"a", "b"}) {
    const fs::path dir = root / run;
    const std::string cmd = cli + " --out " + dir.string() + " figure fig2B > /dev/null";
    const int status = std::system(cmd.c_str());
    o.check(status == 0, std::string("run ") + run + " exit status " + std::to_string(status));
    csv.push_back(slurp(dir / "fig2B.csv"));
  }
  o.check(!csv[0].empty() && csv[0] == csv[1], "fig2B.csv identical across runs (" + std::to_string(csv[0].size()) + " bytes)");
  // The sidecars record their own output directory; compare with it masked.
  auto masked = [&](const char* run) {
    std::string s = slurp(root / run / "fig2B.meta.json");
    const std::string dir = (root / run).string();
    for (auto pos = s.find(dir); pos != std::string::npos; pos = s.find(dir, pos)) s.replace(pos, dir.size(), "<out>");
    return s;
  };
  o.check(masked("a") == masked("b"), "sidecars identical apart from the output directory");
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria 1-7"};
  std::string cli = "adec";
  std::vector<int> known;
  bool verbose = false;
  app.add_option("--cli", cli, "Path of the adec executable");
  app.add_option("--known-failures", known, "Criteria expected to fail")->delimiter(',');
  app.add_flag("-v,--verbose", verbose, "Print every sub-check");
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"kernel correctness", kernels},
      {"trajectory correctness", trajectories},
      {"decoherence ordering", ordering},
      {"non-Markovian signature", non_markovian},
      {"Weyl expansion", weyl},
      {"entropy", entropy},
      {"determinism", [&] { return determinism(cli); }},
  };
  std::set<int> failed;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.check(false, std::string("exception: ") + e.what());
    }
    if (!o.pass) failed.insert(id);
    std::printf("criterion %d (%s): %s\n", id, criteria[i].first, o.pass ? "PASS" : "FAIL");
    for (const auto& n : o.notes)
      if (verbose || n.rfind("FAILED", 0) == 0) std::printf("    %s\n", n.c_str());
    std::fflush(stdout);
  }
  const std::set<int> expected(known.begin(), known.end());
  if (failed == expected) return 0;
  for (int id : failed)
    if (!expected.count(id)) std::printf("unexpected failure: criterion %d\n", id);
  for (int id : expected)
    if (!failed.count(id)) std::printf("criterion %d passed but was listed as a known failure\n", id);
  return 1;
}
