#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "adec/bath_kernels.hpp"
#include "adec/decoherence_master.hpp"
#include "adec/perturbative_dynamics.hpp"
#include "adec/wigner_weyl_entropy.hpp"

namespace adec {

inline constexpr const char* kVersion = ADEC_VERSION;

enum class OutputFormat { csv, json };

struct SweepAxis {
  std::string name;  // a numeric config key, e.g. "alpha"
  std::vector<double> values;
};

/// Everything a run needs. Defaults are the figure-caption values.
///
/// Document grammar: `[section]` headers, `key = value` lines, `#` or `;`
/// comments. Sections and their keys:
///   [oscillator] mass omega0 omega_c alpha x0 y0 vx0 vy0 eta_disp n_x
///   [bath]       gamma lambda omega_th cutoff (lorentz_drude | exponential)
///   [pair]       x x_prime y y_prime
///   [master]     trig_mode (cos | cosh) heating_method (moment | simpson)
///                rel_tol kernel_tol t_max samples max_intervals
///   [sweep]      <numeric key> = v1, v2, ...   (at most two axes)
///   [output]     dir format (csv | json) workers
struct RunConfig {
  OscillatorSpec oscillator;
  BathSpec bath;
  CoherencePair pair;
  MasterConfig master;
  double eta_disp = 1.0;
  double n_x = 1.0;
  std::vector<SweepAxis> sweep;
  std::string out_dir = "out";
  OutputFormat format = OutputFormat::csv;
  int workers = 1;
  std::map<std::string, int> explicit_keys;  // key -> source line, for keys set by the document

  EntropyQuery entropy_query() const;
  WignerParams wigner_params() const;
};

/// Throws ConfigError naming key and line on unknown sections or keys, type
/// mismatches, duplicate keys and constraint violations.
RunConfig parse_config(std::string_view text);

/// Canonical document with every key, shortest round-trip numbers.
/// parse_config(serialize_config(c)) reproduces c.
std::string serialize_config(const RunConfig& config);

/// Sets one key as if it appeared in its section at line 0. On error the
/// config is left unchanged.
void apply_override(RunConfig& config, const std::string& key, const std::string& value);

/// Names of all numeric keys that may be swept.
std::vector<std::string> numeric_keys();

/// Shortest decimal that round-trips; "nan", "inf", "-inf" otherwise.
std::string format_number(double v);

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

std::string to_csv(const Table& table);
std::string to_json(const Table& table);

/// A data table and everything its sidecar records.
struct Artifact {
  std::string name;
  Table table;
  std::vector<std::string> warnings;
  std::map<std::string, std::string> recipe;  // recipe-level overrides, recorded in the sidecar
  std::optional<RunConfig> effective;         // config after recipe overrides, when they change it
};

/// Sidecar JSON: artifact name, version, resolved config (the effective one
/// when set, as a canonical document and as structured fields), recipe
/// overrides and warnings.
std::string sidecar_json(const Artifact& artifact, const RunConfig& config);

/// Writes <dir>/<name>.csv or .json and <dir>/<name>.meta.json. Returns the data path.
std::string write_artifact(const Artifact& artifact, const RunConfig& config);

// Subcommand bodies. Each returns the finished artifact without writing it.
Artifact run_kernels(const RunConfig& config, double tau_min, double tau_max, std::size_t samples);
Artifact run_trajectory(const RunConfig& config, double t_max, std::size_t samples);
Artifact run_decohere(const RunConfig& config);
Artifact run_markov(const RunConfig& config);
Artifact run_entropy(const RunConfig& config, const std::vector<double>& alphas, const std::vector<double>& n_values,
                     const std::vector<double>& omega0_values);
Artifact run_weyl_verify(const RunConfig& config, int points, double tolerance);

/// fig2A, fig2B, fig3A, fig3B, fig4A, fig4B, fig4C, fig4D, fig6A, fig6B.
const std::vector<std::string>& figure_ids();
/// Throws ConfigError on an unknown id.
Artifact run_figure(const std::string& id, const RunConfig& config);

/// One row per grid point of the sweep axes (first axis slowest) with the axis
/// values, coherence_time, final_F_H and delta_S. Rows are computed on
/// config.workers threads and assembled in grid order.
Artifact run_sweep(const RunConfig& config);

}  // namespace adec
