#pragma once

// Run configuration: a line-oriented `key = value` text with [section] headers.
//
//   [run]        name, output, seed
//   [grid]       dims, n, length, max_points
//   [model]      m, a (as "re,im"), dispersion
//   [initial]    kind (gaussian | band_limited | zero), amplitude, width, kmax
//   [source]     kind (zero | separable | vanishing_profile), t0, eps_star, exponent,
//                envelope (constant | ramp | bump), amplitude, width
//   [time]       scheme (backward_euler | strang), dt, t_end, cadence,
//                extinction_threshold, stop_on_extinction, snapshot_times, max_halvings
//   [solver]     mode (splitting | picard | newton), tol, max_iter, relaxation, epsilon_reg
//   [analysis]   ell, check (none | extinction | forced | decay_exponential | decay_power |
//                vanishing | contraction | gradient | ut_bound), fit_from, transient_fraction,
//                vanishing_threshold, perturbation
//
// '#' starts a comment. Unknown sections or keys are rejected.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "extinguish/cone.hpp"
#include "extinguish/evolve.hpp"
#include "extinguish/resolvent.hpp"

namespace extinguish {

enum class InitialKind { gaussian, band_limited, zero };

enum class CheckKind {
  none,
  extinction,
  forced,
  decay_exponential,
  decay_power,
  vanishing,
  contraction,
  gradient,
  ut_bound,
};

struct RunConfig {
  std::string name = "unnamed";
  std::string output = "out";
  std::uint64_t seed = 1;

  int dims = 1;
  long long n = 256;
  double length = 40.0;
  long long max_points = kDefaultPointBudget;

  ConeParams<double> params{0.5, {0.0, 1.0}};
  bool dispersion = true;

  InitialKind initial = InitialKind::gaussian;
  double amplitude = 1.0;
  double width = 1.0;
  int kmax = 2;

  SourceKind source = SourceKind::zero;
  double source_t0 = 0.0;
  double eps_star = 1e-3;
  /// Unset: derived from (dims, ell, m).
  std::optional<double> source_exponent;
  Envelope envelope = Envelope::constant;
  double source_amplitude = 1.0;
  double source_width = 1.0;

  Scheme scheme = Scheme::backward_euler;
  double dt = 1e-3;
  double t_end = 1.0;
  int cadence = 1;
  double extinction_threshold = 1e-12;
  bool stop_on_extinction = true;
  std::vector<double> snapshot_times;
  int max_halvings = 8;

  SolveOptions solve;

  int ell = 1;
  CheckKind check = CheckKind::none;
  /// Start of the comparator or fit window; unset means after the transient fraction.
  std::optional<double> fit_from;
  double transient_fraction = 0.1;
  double vanishing_threshold = 1e-6;
  /// Relative size of the second trajectory's perturbation (contraction check).
  double perturbation = 0.1;
};

/// Parses and validates. Throws ConfigError listing every problem with line numbers.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);

/// Sets one `section.key` to a value using the same parsing and validation rules.
void apply_override(RunConfig& config, const std::string& dotted_key, const std::string& value);

/// Canonical text form; parse_config(to_text(c)) reproduces c.
std::string to_text(const RunConfig& config);

/// FNV-1a over to_text(config).
std::string config_hash(const RunConfig& config);

/// Every invariant violated by the config (empty when valid).
std::vector<std::string> validation_errors(const RunConfig& config);

std::string to_string(CheckKind kind);
std::string to_string(Scheme scheme);

}  // namespace extinguish
