#include "extinguish/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "extinguish/errors.hpp"

namespace extinguish {

namespace {

const Complex kI(0.0, 1.0);

void require_spatial(const SourceTerm& source, const PeriodicGrid& grid) {
  if (!source.spatial) throw DomainError("non-zero source needs a spatial profile");
  if (!(source.spatial->grid() == grid)) throw GridMismatchError("source profile lives on a different grid");
}

}  // namespace

SourceTerm SourceTerm::separable(Field spatial, double t0, Envelope envelope) {
  if (!(t0 > 0)) throw DomainError("separable source needs a positive support end T0");
  SourceTerm s;
  s.kind = SourceKind::separable;
  s.spatial = std::move(spatial);
  s.t0 = t0;
  s.envelope = envelope;
  return s;
}

SourceTerm SourceTerm::vanishing_profile(Field shape, double t0, double eps_star, double source_exponent) {
  if (!(t0 > 0)) throw DomainError("vanishing profile needs a positive T0");
  if (!(eps_star > 0)) throw DomainError("eps_star must be positive");
  if (!(source_exponent > 0)) throw DomainError("source exponent must be positive");
  const double norm = lp_norm(shape, 2.0);
  if (!(norm > 0)) throw DomainError("vanishing profile shape must be non-zero");
  shape.values() /= norm;
  SourceTerm s;
  s.kind = SourceKind::vanishing_profile;
  s.spatial = std::move(shape);
  s.t0 = t0;
  s.eps_star = eps_star;
  s.source_exponent = source_exponent;
  return s;
}

double envelope_value(const SourceTerm& source, double t) {
  switch (source.kind) {
    case SourceKind::zero:
      return 0.0;
    case SourceKind::vanishing_profile:
      if (t >= source.t0) return 0.0;
      return std::sqrt(source.eps_star) * std::pow(source.t0 - t, 0.5 * source.source_exponent);
    case SourceKind::separable:
      if (t > source.t0 || t < 0) return 0.0;
      switch (source.envelope) {
        case Envelope::constant:
          return 1.0;
        case Envelope::ramp:
          return 1.0 - t / source.t0;
        case Envelope::bump: {
          const double s = std::sin(std::numbers::pi * t / source.t0);
          return s * s;
        }
      }
  }
  return 0.0;
}

Field source_eval(const SourceTerm& source, double t, const PeriodicGrid& grid) {
  if (source.kind == SourceKind::zero) return Field(grid);
  require_spatial(source, grid);
  const double factor = envelope_value(source, t);
  if (factor == 0.0) return Field(grid);
  return Field(grid, ComplexArray(factor * source.spatial->values()));
}

Complex nonlinear_flow_exact(const ConeParams<double>& params, Complex value, double dt) {
  const double r0 = std::abs(value);
  if (r0 == 0.0) return {0.0, 0.0};
  const double q = 1.0 - params.m;
  const double head = std::pow(r0, q);
  const double s = head - q * params.a.imag() * dt;
  // A remaining lifetime under 1e-8 dt is rounding left over from earlier steps.
  if (s <= 1e-8 * q * params.a.imag() * dt) return {0.0, 0.0};
  const double log_ratio = (std::log(head) - std::log(s)) / q;  // ln(r0 / r)
  const double phase = params.a.real() / params.a.imag() * log_ratio;
  return value * std::exp(-log_ratio) * std::polar(1.0, phase);
}

Field nonlinear_flow_exact(const ConeParams<double>& params, const Field& u, double dt) {
  if (dt < 0) throw DomainError("nonlinear flow needs dt >= 0");
  Field out(u.grid());
  for (Index j = 0; j < u.size(); ++j) out.values()[j] = nonlinear_flow_exact(params, u.values()[j], dt);
  return out;
}

Field linear_flow_exact(const Field& u, double dt) {
  const ComplexArray symbol = (-kI * dt * u.grid().k_squared()).exp();
  return apply_symbol(u, symbol);
}

Field step_backward_euler(const Field& u_n, double dt, const Field& f_next, const ConeParams<double>& params,
                          const SolveOptions& opts, bool dispersion) {
  if (!(dt > 0)) throw DomainError("time step must be positive");
  require_same_grid(u_n, f_next);
  ResolventProblem problem{dt, 1.0, params, Field(u_n.grid(), ComplexArray(-kI * u_n.values() - dt * f_next.values())),
                           true, dispersion};
  return solve_resolvent(problem, opts, u_n).u;
}

Field step_strang(const Field& u_n, double t_n, double dt, const SourceTerm& source, const ConeParams<double>& params,
                  bool dispersion) {
  if (!(dt > 0)) throw DomainError("time step must be positive");
  Field u = nonlinear_flow_exact(params, u_n, 0.5 * dt);
  if (dispersion) u = linear_flow_exact(u, dt);
  if (!source.is_zero()) {
    const Field f = source_eval(source, t_n + 0.5 * dt, u.grid());
    u.values() -= kI * dt * f.values();
  }
  return nonlinear_flow_exact(params, u, 0.5 * dt);
}

void record_diagnostics(DiagnosticsSeries& series, double t, const Field& u, const Field& f,
                        const ConeParams<double>& params) {
  const auto& grid = u.grid();
  const ComplexArray hat = to_spectral(u);
  const RealArray power = hat.abs2();
  const RealArray weight = 1.0 + grid.k_squared();
  const double parseval = grid.cell_volume() / static_cast<double>(grid.size());

  series.times.push_back(t);
  series.mass.push_back(lp_integral(u, 2.0));
  series.lmp1.push_back(lp_integral(u, params.m + 1.0));
  series.h1.push_back(std::sqrt(parseval * (weight * power).sum()));
  series.h2.push_back(std::sqrt(parseval * (weight.square() * power).sum()));
  series.source_work.push_back(inner(f, u).imag());
  series.tail_mass.push_back(tail_mass_fraction(u));
}

namespace {

void validate(const EvolveConfig& config) {
  require_cone(config.params);
  if (!(config.dt > 0) || !std::isfinite(config.dt)) throw DomainError("time step must be positive");
  if (!(config.t_end > 0) || !std::isfinite(config.t_end)) throw DomainError("t_end must be positive");
  if (config.cadence < 1) throw DomainError("record cadence must be at least 1");
  if (!(config.extinction_threshold > 0)) throw DomainError("extinction threshold must be positive");
  if (config.max_halvings < 0) throw DomainError("max_halvings must be non-negative");
  if (!config.u0.all_finite()) throw DomainError("initial datum must be finite");
  if (!config.source.is_zero()) require_spatial(config.source, config.u0.grid());
}

struct BackwardEulerStepper {
  const EvolveConfig& config;
  int deepest = 0;

  Field advance(const Field& u, double t, double dt, int level) {
    const Field f_next = source_eval(config.source, t + dt, u.grid());
    try {
      return step_backward_euler(u, dt, f_next, config.params, config.solve, config.dispersion);
    } catch (const ConvergenceError&) {
      if (level >= config.max_halvings) throw;
      deepest = std::max(deepest, level + 1);
      const Field mid = advance(u, t, 0.5 * dt, level + 1);
      return advance(mid, t + 0.5 * dt, 0.5 * dt, level + 1);
    }
  }
};

bool extinct_tail(const DiagnosticsSeries& series, double threshold) {
  constexpr std::size_t kSustained = 3;
  if (series.size() < kSustained) return false;
  const double limit = threshold * series.mass.front();
  for (std::size_t i = series.size() - kSustained; i < series.size(); ++i)
    if (series.mass[i] > limit) return false;
  return true;
}

}  // namespace

EvolveResult evolve(const EvolveConfig& config) {
  validate(config);
  const auto& grid = config.u0.grid();

  EvolveResult result{{}, {}, config.u0, 0.0, 0, 0};
  Field u = config.u0;
  double t = 0.0;
  record_diagnostics(result.series, t, u, source_eval(config.source, t, grid), config.params);
  if (config.on_record) config.on_record(t, u);

  std::vector<double> pending = config.snapshot_times;
  std::sort(pending.begin(), pending.end());
  auto snapshot_due = pending.begin();
  while (snapshot_due != pending.end() && *snapshot_due <= 0.0) {
    result.snapshots.emplace_back(0.0, u);
    ++snapshot_due;
  }

  double apriori = std::sqrt(result.series.mass.front());
  BackwardEulerStepper stepper{config};
  const auto total_steps = static_cast<long long>(std::ceil(config.t_end / config.dt - 1e-9));

  for (long long n = 0; n < total_steps; ++n) {
    const double t_next = std::min(static_cast<double>(n + 1) * config.dt, config.t_end);
    const double dt = t_next - t;
    const Field previous = config.on_step ? u : Field(grid);
    if (config.scheme == Scheme::backward_euler) {
      u = stepper.advance(u, t, dt, 0);
      apriori += dt * lp_norm(source_eval(config.source, t_next, grid), 2.0);
    } else {
      u = step_strang(u, t, dt, config.source, config.params, config.dispersion);
      apriori += dt * lp_norm(source_eval(config.source, t + 0.5 * dt, grid), 2.0);
    }
    flush_tiny(u);
    if (config.on_step) config.on_step(t, dt, previous, u);
    t = t_next;
    result.steps = static_cast<int>(n + 1);

    if (!u.all_finite()) throw DivergenceError("state became non-finite at t = " + std::to_string(t));
    const double norm = lp_norm(u, 2.0);
    if (norm > 1e6 * apriori) throw DivergenceError("L2 norm exceeded 1e6 times the a priori bound");

    while (snapshot_due != pending.end() && *snapshot_due <= t + 1e-12 * config.dt) {
      result.snapshots.emplace_back(t, u);
      ++snapshot_due;
    }

    const bool last = n + 1 == total_steps;
    if ((n + 1) % config.cadence == 0 || last) {
      record_diagnostics(result.series, t, u, source_eval(config.source, t, grid), config.params);
      if (config.on_record) config.on_record(t, u);
      if (config.stop_on_extinction && t >= config.source.support_end() &&
          extinct_tail(result.series, config.extinction_threshold))
        break;
    }
  }

  result.final_state = u;
  result.final_time = t;
  result.halvings = stepper.deepest;
  return result;
}

}  // namespace extinguish
