#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "adec/errors.hpp"
#include "adec/sweep_runner.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw adec::ConfigError("config", 0, "cannot read " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Anharmonic oscillator decoherence: kernels, trajectories, decoherence rates, Weyl terms and entropy"};
  app.require_subcommand(1);

  std::string out_dir, format, config_path;
  int workers = 0;
  double tolerance = 0.0;
  std::vector<std::string> overrides;
  app.add_option("--out", out_dir, "Output directory (default: out, or [output] dir)");
  app.add_option("--format", format, "Data file format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--workers", workers, "Worker threads for sweeps")->check(CLI::PositiveNumber);
  app.add_option("--tolerance", tolerance, "Relative tolerance of the inner tau quadrature")->check(CLI::PositiveNumber);
  app.add_option("--config", config_path, "Configuration document");
  app.add_option("--set", overrides, "Override a config key, key=value (repeatable)");

  double tau_min = 1e-4, tau_max = 1e-2;
  std::size_t kernel_samples = 101;
  auto* kernels = app.add_subcommand("kernels", "Noise and dissipation kernels on a tau grid");
  kernels->add_option("--tau-min", tau_min, "First tau");
  kernels->add_option("--tau-max", tau_max, "Last tau");
  kernels->add_option("--samples", kernel_samples, "Number of tau samples");

  double traj_t = 1.0;
  std::size_t traj_samples = 201;
  auto* trajectory = app.add_subcommand("trajectory", "First-order perturbative trajectory against the nonlinear ODE");
  trajectory->add_option("--t-max", traj_t, "End time");
  trajectory->add_option("--samples", traj_samples, "Number of time samples");

  auto* decohere = app.add_subcommand("decohere", "Non-Markovian h(t), F_H(t) and the density-matrix ratio");
  auto* markov = app.add_subcommand("markov", "decohere plus the Markovian F_H = h_inf t");

  std::vector<double> alphas, ns, omegas;
  auto* entropy = app.add_subcommand("entropy", "Anharmonic von Neumann entropy correction");
  entropy->add_option("--alpha", alphas, "Anharmonicity values")->delimiter(',');
  entropy->add_option("--n-x", ns, "Occupation numbers")->delimiter(',');
  entropy->add_option("--omega0", omegas, "Harmonic frequencies")->delimiter(',');

  int weyl_points = 20;
  double weyl_tol = 1e-5;
  auto* weyl = app.add_subcommand("weyl-verify", "Weyl expansion terms against finite differences");
  weyl->add_option("--points", weyl_points, "Random phase points");
  weyl->add_option("--max-rel-error", weyl_tol, "Pass threshold");

  std::string figure_id;
  auto* figure = app.add_subcommand("figure", "Reproduce one figure panel");
  figure->add_option("id", figure_id, "fig2A fig2B fig3A fig3B fig4A fig4B fig4C fig4D fig6A fig6B")->required();

  std::string sweep_path;
  auto* sweep = app.add_subcommand("sweep", "Grid sweep over at most two config keys");
  sweep->add_option("config", sweep_path, "Configuration document with a [sweep] section")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    const std::string path = sweep->parsed() ? sweep_path : config_path;
    adec::RunConfig cfg = path.empty() ? adec::RunConfig{} : adec::parse_config(read_file(path));
    for (const auto& o : overrides) {
      const auto eq = o.find('=');
      if (eq == std::string::npos) throw adec::ConfigError("--set", 0, "expected key=value, got '" + o + "'");
      adec::apply_override(cfg, o.substr(0, eq), o.substr(eq + 1));
    }
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (!format.empty()) cfg.format = format == "csv" ? adec::OutputFormat::csv : adec::OutputFormat::json;
    if (workers > 0) cfg.workers = workers;
    if (tolerance > 0.0) cfg.master.rel_tol = tolerance;

    adec::Artifact artifact;
    if (kernels->parsed()) artifact = adec::run_kernels(cfg, tau_min, tau_max, kernel_samples);
    else if (trajectory->parsed()) artifact = adec::run_trajectory(cfg, traj_t, traj_samples);
    else if (decohere->parsed()) artifact = adec::run_decohere(cfg);
    else if (markov->parsed()) artifact = adec::run_markov(cfg);
    else if (entropy->parsed()) artifact = adec::run_entropy(cfg, alphas, ns, omegas);
    else if (weyl->parsed()) artifact = adec::run_weyl_verify(cfg, weyl_points, weyl_tol);
    else if (figure->parsed()) artifact = adec::run_figure(figure_id, cfg);
    else artifact = adec::run_sweep(cfg);

    const std::string written = adec::write_artifact(artifact, cfg);
    for (const auto& w : artifact.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());

    if (weyl->parsed()) {
      bool all = true;
      for (const auto& row : artifact.table.rows) {
        const bool pass = row[2] == 1.0;
        all = all && pass;
        std::printf("term %d: %s  max rel error %s\n", static_cast<int>(row[0]), pass ? "PASS" : "FAIL",
                    adec::format_number(row[1]).c_str());
      }
      std::printf("%s\n", written.c_str());
      return all ? 0 : 2;
    }
    std::printf("%s\n", written.c_str());
    return 0;
  } catch (const adec::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 1;
  } catch (const adec::DomainError& e) {
    std::fprintf(stderr, "domain error: %s\n", e.what());
    return 1;
  } catch (const adec::NumericError& e) {
    std::fprintf(stderr, "numeric error: %s\n", e.what());
    return 2;
  }
}
