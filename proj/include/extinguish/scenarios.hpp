#pragma once

// Scenario runner: turns a RunConfig into an evolution, evaluates the check
// the config asks for, and writes the run directory:
//   series.csv      t, mass, lmp1, h1, h2, source_work, tail_mass (%.17g)
//   summary.json    config_hash, t_extinction, t_star_bound, delta, c_emp,
//                   decay_rate, r2, flags, plus the auxiliary measurements
//   summary.txt     the same scalars as flat `key = value` lines
//   plot_series.py  matplotlib script reading series.csv
//   config.ini      canonical config text
//   snapshot_<i>.bin field snapshots, when requested

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "extinguish/config.hpp"
#include "extinguish/diagnostics.hpp"
#include "extinguish/evolve.hpp"

namespace extinguish {

struct RunSummary {
  std::string name;
  std::string config_hash;
  double wall_clock = 0.0;
  double final_time = 0.0;
  int steps = 0;

  std::optional<double> t_extinction;
  double delta = 0.0;
  double c_emp = 0.0;
  double t_star_bound = 0.0;

  std::optional<double> decay_rate;
  std::optional<double> r2;
  std::optional<double> predicted_exponent;

  double final_mass_ratio = 0.0;
  double max_tail_mass = 0.0;
  double max_mass_balance_residual = 0.0;
  /// Worst ||u - v|| / (||u0 - v0|| + int ||f - g||) over records (contraction check).
  std::optional<double> worst_contraction_ratio;
  /// Largest per-record increase of ||grad u||^2 relative to its initial value (gradient check).
  std::optional<double> worst_gradient_increase;
  /// Largest ||u^{n+1} - u^n|| / dt over the bound (u_t check).
  std::optional<double> worst_ut_ratio;

  std::map<std::string, bool> flags;

  bool passed() const;
};

/// Builds the initial datum described by the config.
Field initial_field(const RunConfig& config, const PeriodicGrid& grid);

/// Builds the source term described by the config.
SourceTerm make_source(const RunConfig& config, const PeriodicGrid& grid);

EvolveConfig make_evolve_config(const RunConfig& config);

struct ScenarioOutput {
  RunSummary summary;
  EvolveResult result;
};

/// Runs without touching the filesystem.
ScenarioOutput execute_scenario(const RunConfig& config);

/// Runs and writes the output directory config.output.
RunSummary run_scenario(const RunConfig& config);

void write_series_csv(const std::filesystem::path& path, const DiagnosticsSeries& series);
void write_summary(const std::filesystem::path& dir, const RunSummary& summary);

struct SweepEntry {
  std::string value;
  std::optional<RunSummary> summary;
  std::string error;
};

/// Runs one scenario per value of `dotted_key`, each in <output>/<key>=<value>,
/// in parallel up to max_threads (EXTINGUISH_THREADS when 0).
std::vector<SweepEntry> sweep(const RunConfig& base, const std::string& dotted_key,
                              const std::vector<std::string>& values, unsigned max_threads = 0);

/// Thread cap from EXTINGUISH_THREADS, else hardware concurrency (at least 1).
unsigned thread_budget();

}  // namespace extinguish
