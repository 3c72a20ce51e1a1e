#pragma once

// Time integration of  i u_t + Lap u + a g(u) = f,  u(0) = u0.
//
// Two schemes:
//  * backward Euler: each step is one resolvent solve with lambda = dt, b0 = 1,
//    F = -i u^n - dt f(t_{n+1});
//  * Strang splitting: half nonlinear flow, full free flow, source kick
//    -i dt f(t_n + dt/2), half nonlinear flow. Both sub-flows are exact.

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "extinguish/cone.hpp"
#include "extinguish/diagnostics.hpp"
#include "extinguish/domain.hpp"
#include "extinguish/resolvent.hpp"

namespace extinguish {

enum class SourceKind { zero, separable, vanishing_profile };

/// Temporal envelope of a separable source on [0, T0]; zero afterwards.
enum class Envelope {
  constant,  ///< 1
  ramp,      ///< 1 - t/T0
  bump,      ///< sin^2(pi t / T0)
};

struct SourceTerm {
  SourceKind kind = SourceKind::zero;
  /// Spatial profile; required for non-zero kinds.
  std::optional<Field> spatial;
  /// End of the support in time.
  double t0 = 0.0;
  /// vanishing_profile: ||f(t)||^2 = eps_star (t0 - t)_+^source_exponent.
  double eps_star = 0.0;
  double source_exponent = 0.0;
  Envelope envelope = Envelope::constant;

  static SourceTerm zero() { return {}; }
  static SourceTerm separable(Field spatial, double t0, Envelope envelope);
  static SourceTerm vanishing_profile(Field shape, double t0, double eps_star, double source_exponent);

  bool is_zero() const { return kind == SourceKind::zero; }
  /// Time after which the source vanishes identically; 0 for the zero source.
  double support_end() const { return kind == SourceKind::zero ? 0.0 : t0; }
};

/// f(t) on the grid. For vanishing_profile the shape is normalized to unit L2 norm.
Field source_eval(const SourceTerm& source, double t, const PeriodicGrid& grid);

/// Scalar time factor of a separable source (exposed for the u_t bound).
double envelope_value(const SourceTerm& source, double t);

enum class Scheme { backward_euler, strang };

struct EvolveConfig {
  ConeParams<double> params;
  Field u0;
  Scheme scheme = Scheme::backward_euler;
  double dt = 1e-3;
  double t_end = 1.0;
  SourceTerm source;
  SolveOptions solve;
  /// Record diagnostics every `cadence` steps.
  int cadence = 1;
  /// Mass below threshold * mass(0) for 3 consecutive records stops the run.
  double extinction_threshold = 1e-12;
  bool stop_on_extinction = true;
  std::vector<double> snapshot_times;
  int max_halvings = 8;
  /// Test hook: drop the Laplacian.
  bool dispersion = true;
  /// Called with (t, u) after every diagnostics record, including t = 0.
  std::function<void(double, const Field&)> on_record;
  /// Called with (t_n, dt, u^n, u^{n+1}) after every step.
  std::function<void(double, double, const Field&, const Field&)> on_step;
};

struct EvolveResult {
  DiagnosticsSeries series;
  std::vector<std::pair<double, Field>> snapshots;
  Field final_state;
  double final_time;
  int steps;
  /// Largest number of dt halvings any step needed.
  int halvings;
};

/// Exact pointwise flow of i u_t + a g(u) = 0 over time dt.
/// r(t) = (r0^{1-m} - (1-m) Im(a) t)_+^{1/(1-m)}, phase advances by (Re a / Im a) ln(r0 / r).
Field nonlinear_flow_exact(const ConeParams<double>& params, const Field& u, double dt);
Complex nonlinear_flow_exact(const ConeParams<double>& params, Complex value, double dt);

/// Free Schrodinger flow: multiplier exp(-i |k|^2 dt).
Field linear_flow_exact(const Field& u, double dt);

/// One backward Euler step; throws ConvergenceError from the resolvent.
Field step_backward_euler(const Field& u_n, double dt, const Field& f_next, const ConeParams<double>& params,
                          const SolveOptions& opts, bool dispersion = true);

Field step_strang(const Field& u_n, double t_n, double dt, const SourceTerm& source, const ConeParams<double>& params,
                  bool dispersion = true);

/// Validates the config, then integrates to t_end or until extinction is detected.
/// Throws DivergenceError if a norm exceeds 1e6 times the a priori scale ||u0|| + int ||f||.
EvolveResult evolve(const EvolveConfig& config);

/// One diagnostics record for state u at time t.
void record_diagnostics(DiagnosticsSeries& series, double t, const Field& u, const Field& f,
                        const ConeParams<double>& params);

}  // namespace extinguish
