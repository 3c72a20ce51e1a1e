#include "extinguish/scenarios.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <thread>

#include "extinguish/errors.hpp"
#include "extinguish/field_io.hpp"

namespace extinguish {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const Complex kI(0.0, 1.0);

std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double record_spacing(const RunConfig& config) { return config.dt * config.cadence; }

// Window for fits: after the transient, up to the last record still above the extinction floor.
std::pair<double, double> fit_window(const RunConfig& config, const DiagnosticsSeries& series) {
  const double t_last = series.times.back();
  const double t_lo = config.fit_from ? *config.fit_from : config.transient_fraction * t_last;
  double t_hi = t_lo;
  const double floor = config.extinction_threshold * series.mass.front();
  for (std::size_t i = 0; i < series.size(); ++i)
    if (series.mass[i] > floor) t_hi = series.times[i];
  return {t_lo, t_hi};
}

// Integral of ||f(t) - g(t)|| with the quadrature nodes the scheme itself uses.
double scheme_quadrature(const RunConfig& config, const SourceTerm& f, const SourceTerm& g, const PeriodicGrid& grid,
                         double t_until) {
  if (f.is_zero() && g.is_zero()) return 0.0;
  double total = 0.0;
  double t = 0.0;
  for (long long n = 0; t < t_until - 1e-12 * config.dt; ++n) {
    const double t_next = std::min(static_cast<double>(n + 1) * config.dt, config.t_end);
    const double dt = t_next - t;
    const double node = config.scheme == Scheme::backward_euler ? t_next : t + 0.5 * dt;
    const Field df(grid, ComplexArray(source_eval(f, node, grid).values() - source_eval(g, node, grid).values()));
    total += dt * lp_norm(df, 2.0);
    t = t_next;
  }
  return total;
}

}  // namespace

bool RunSummary::passed() const {
  return std::all_of(flags.begin(), flags.end(), [](const auto& kv) { return kv.second; });
}

unsigned thread_budget() {
  if (const char* env = std::getenv("EXTINGUISH_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

Field initial_field(const RunConfig& config, const PeriodicGrid& grid) {
  switch (config.initial) {
    case InitialKind::zero:
      return Field(grid);
    case InitialKind::band_limited:
      return band_limited_random(grid, config.seed, config.kmax, config.amplitude);
    case InitialKind::gaussian:
    default:
      return gaussian(grid, config.amplitude, config.width);
  }
}

SourceTerm make_source(const RunConfig& config, const PeriodicGrid& grid) {
  switch (config.source) {
    case SourceKind::separable:
      return SourceTerm::separable(gaussian(grid, config.source_amplitude, config.source_width), config.source_t0,
                                   config.envelope);
    case SourceKind::vanishing_profile: {
      const double exponent = config.source_exponent
                                  ? *config.source_exponent
                                  : delta_exponent(config.dims, config.ell, config.params.m).source_exponent;
      return SourceTerm::vanishing_profile(gaussian(grid, 1.0, config.source_width), config.source_t0,
                                           config.eps_star, exponent);
    }
    case SourceKind::zero:
    default:
      return SourceTerm::zero();
  }
}

EvolveConfig make_evolve_config(const RunConfig& config) {
  auto errs = validation_errors(config);
  if (!errs.empty()) throw ConfigError(std::move(errs));
  const PeriodicGrid grid = PeriodicGrid::make(config.dims, config.n, config.length, config.max_points);
  EvolveConfig ec{.params = config.params, .u0 = initial_field(config, grid)};
  ec.scheme = config.scheme;
  ec.dt = config.dt;
  ec.t_end = config.t_end;
  ec.source = make_source(config, grid);
  ec.solve = config.solve;
  ec.cadence = config.cadence;
  ec.extinction_threshold = config.extinction_threshold;
  ec.stop_on_extinction = config.stop_on_extinction;
  ec.snapshot_times = config.snapshot_times;
  ec.max_halvings = config.max_halvings;
  ec.dispersion = config.dispersion;
  return ec;
}

ScenarioOutput execute_scenario(const RunConfig& config) {
  const auto started = std::chrono::steady_clock::now();
  EvolveConfig ec = make_evolve_config(config);
  const PeriodicGrid grid = ec.u0.grid();
  RunSummary summary;
  summary.name = config.name;
  summary.config_hash = config_hash(config);

  // Checks that need more than the series hook into the stepping loop.
  std::vector<std::pair<double, Field>> recorded;
  double worst_ut = 0.0;
  if (config.check == CheckKind::contraction) {
    ec.stop_on_extinction = false;
    ec.on_record = [&recorded](double t, const Field& u) { recorded.emplace_back(t, u); };
  }
  if (config.check == CheckKind::ut_bound) {
    ec.on_step = [&worst_ut](double, double dt, const Field& prev, const Field& next) {
      const Field diff(prev.grid(), ComplexArray(next.values() - prev.values()));
      worst_ut = std::max(worst_ut, lp_norm(diff, 2.0) / dt);
    };
  }

  EvolveResult result = evolve(ec);
  const DiagnosticsSeries& series = result.series;
  summary.final_time = result.final_time;
  summary.steps = result.steps;
  summary.flags["series_well_formed"] = series.well_formed();

  const double mass0 = series.mass.front();
  summary.final_mass_ratio = mass0 > 0 ? series.mass.back() / mass0 : 0.0;
  summary.max_tail_mass = *std::max_element(series.tail_mass.begin(), series.tail_mass.end());
  for (double r : mass_balance_residual(series, config.params))
    summary.max_mass_balance_residual = std::max(summary.max_mass_balance_residual, std::abs(r));
  summary.t_extinction = detect_extinction(series, config.extinction_threshold);

  const ExtinctionExponent exponent = delta_exponent(config.dims, config.ell, config.params.m);
  summary.delta = exponent.delta;
  summary.t_star_bound = kInf;

  switch (config.check) {
    case CheckKind::none:
      break;
    case CheckKind::extinction:
    case CheckKind::forced: {
      const double from = config.fit_from ? *config.fit_from : ec.source.support_end();
      try {
        const ExtinctionFit fit =
            fit_extinction_constant(series, exponent.delta, config.params, from, config.extinction_threshold);
        summary.c_emp = fit.c_emp;
        summary.t_star_bound = fit.t_star_bound;
      } catch (const InsufficientDataError&) {
        summary.c_emp = 0.0;
      }
      summary.flags["extinct"] = summary.t_extinction.has_value();
      if (config.check == CheckKind::extinction) {
        summary.flags["t_extinction_le_t_star_bound"] =
            summary.t_extinction && *summary.t_extinction <= summary.t_star_bound;
        summary.flags["tail_mass_below_1e-10"] = summary.max_tail_mass < 1e-10;
      } else {
        summary.flags["extinct_by_t0"] =
            summary.t_extinction && *summary.t_extinction <= config.source_t0 + record_spacing(config) + 1e-12;
      }
      break;
    }
    case CheckKind::decay_exponential:
    case CheckKind::decay_power: {
      const auto [t_lo, t_hi] = fit_window(config, series);
      const bool power = config.check == CheckKind::decay_power;
      try {
        const DecayFit fit =
            fit_decay(series, power ? DecayKind::power : DecayKind::exponential, t_lo, t_hi, power ? 0.0 : 1.0);
        summary.decay_rate = fit.rate_or_exponent;
        summary.r2 = fit.r2;
      } catch (const InsufficientDataError&) {
      }
      if (!power) {
        summary.flags["exponential_fit_r2_gt_0.99"] = summary.r2 && *summary.r2 > 0.99;
      } else {
        const double gap = config.dims - 2.0 * config.ell;
        if (gap > 0) summary.predicted_exponent = 2.0 * config.ell / ((1.0 - config.params.m) * gap);
        // The mass is the square of the L2 norm, so its exponent is twice the norm's.
        summary.flags["power_exponent_within_25pct"] =
            summary.decay_rate && summary.predicted_exponent &&
            std::abs(0.5 * *summary.decay_rate - *summary.predicted_exponent) <= 0.25 * *summary.predicted_exponent;
      }
      break;
    }
    case CheckKind::vanishing:
      summary.flags["mass_below_threshold"] = summary.final_mass_ratio <= config.vanishing_threshold;
      break;
    case CheckKind::contraction: {
      // Second trajectory: perturbed datum and scaled source.
      EvolveConfig other = make_evolve_config(config);
      const double u0_norm = lp_norm(ec.u0, 2.0);
      const Field bump = band_limited_random(grid, config.seed + 1, std::min<int>(4, grid.n() / 2 - 1),
                                             config.perturbation * std::max(u0_norm, 1e-3));
      other.u0.values() += bump.values();
      if (!other.source.is_zero()) other.source.spatial->values() *= 1.0 + config.perturbation;
      other.stop_on_extinction = false;
      std::vector<std::pair<double, Field>> other_records;
      other.on_record = [&other_records](double t, const Field& v) { other_records.emplace_back(t, v); };
      evolve(other);

      const double base = lp_norm(Field(grid, ComplexArray(ec.u0.values() - other.u0.values())), 2.0);
      const double scale = u0_norm + scheme_quadrature(config, ec.source, SourceTerm::zero(), grid, config.t_end);
      double worst = 0.0;
      bool holds = recorded.size() == other_records.size();
      for (std::size_t i = 0; holds && i < recorded.size(); ++i) {
        const double t = recorded[i].first;
        const double bound = base + scheme_quadrature(config, ec.source, other.source, grid, t);
        const double gap = lp_norm(Field(grid, ComplexArray(recorded[i].second.values() - other_records[i].second.values())), 2.0);
        if (bound > 0) worst = std::max(worst, gap / bound);
        if (gap > bound + 1e-8 * std::max(scale, 1e-300)) holds = false;
      }
      summary.worst_contraction_ratio = worst;
      summary.flags["contraction_bound_holds"] = holds;
      break;
    }
    case CheckKind::gradient: {
      const double g0 = series.h1.front() * series.h1.front() - series.mass.front();
      const double scale = std::max(g0, 1e-300);
      double worst = 0.0;
      for (std::size_t i = 1; i < series.size(); ++i) {
        const double prev = series.h1[i - 1] * series.h1[i - 1] - series.mass[i - 1];
        const double cur = series.h1[i] * series.h1[i] - series.mass[i];
        worst = std::max(worst, (cur - prev) / scale);
      }
      summary.worst_gradient_increase = worst;
      summary.flags["gradient_non_increasing"] = worst <= 1e-8;
      break;
    }
    case CheckKind::ut_bound: {
      const Field f0 = source_eval(ec.source, 0.0, grid);
      ComplexArray initial = laplacian(ec.u0).values() + config.params.a * g_field(config.params.m, ec.u0).values() -
                             f0.values();
      double bound = lp_norm(Field(grid, initial), 2.0);
      if (!ec.source.is_zero()) {
        // int ||f'|| by differences on the step grid.
        const double h = config.dt;
        for (double t = 0.0; t < config.t_end; t += h) {
          const double e0 = envelope_value(ec.source, t);
          const double e1 = envelope_value(ec.source, std::min(t + h, config.t_end));
          bound += std::abs(e1 - e0) * lp_norm(*ec.source.spatial, 2.0);
        }
      }
      summary.worst_ut_ratio = bound > 0 ? worst_ut / bound : 0.0;
      summary.flags["ut_within_10pct_of_bound"] = worst_ut <= 1.1 * bound;
      break;
    }
  }

  summary.wall_clock = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return {std::move(summary), std::move(result)};
}

void write_series_csv(const std::filesystem::path& path, const DiagnosticsSeries& series) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "t,mass,lmp1,h1,h2,source_work,tail_mass\n";
  for (std::size_t i = 0; i < series.size(); ++i) {
    out << fmt17(series.times[i]) << ',' << fmt17(series.mass[i]) << ',' << fmt17(series.lmp1[i]) << ','
        << fmt17(series.h1[i]) << ',' << fmt17(series.h2[i]) << ',' << fmt17(series.source_work[i]) << ','
        << fmt17(series.tail_mass[i]) << '\n';
  }
}

namespace {

nlohmann::json optional_json(const std::optional<double>& v) {
  if (!v || !std::isfinite(*v)) return nullptr;
  return *v;
}

nlohmann::json finite_json(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

std::string optional_text(const std::optional<double>& v) { return v && std::isfinite(*v) ? fmt17(*v) : "none"; }

const char* kPlotScript = R"py(# Plots the diagnostics series of one run.
import sys
import pandas as pd
import matplotlib.pyplot as plt

path = sys.argv[1] if len(sys.argv) > 1 else "series.csv"
df = pd.read_csv(path)
fig, axes = plt.subplots(2, 2, figsize=(10, 7))
axes[0, 0].semilogy(df.t, df.mass.clip(lower=1e-300))
axes[0, 0].set_title("mass ||u||^2")
axes[0, 1].semilogy(df.t, df.lmp1.clip(lower=1e-300))
axes[0, 1].set_title("||u||_{m+1}^{m+1}")
axes[1, 0].plot(df.t, df.h1, label="H1")
axes[1, 0].plot(df.t, df.h2, label="H2")
axes[1, 0].legend()
axes[1, 0].set_title("Sobolev norms")
axes[1, 1].plot(df.t, df.source_work)
axes[1, 1].set_title("Im int f conj(u)")
for ax in axes.flat:
    ax.set_xlabel("t")
fig.tight_layout()
fig.savefig(path.rsplit(".", 1)[0] + ".png", dpi=120)
)py";

}  // namespace

void write_summary(const std::filesystem::path& dir, const RunSummary& s) {
  nlohmann::ordered_json j;
  j["name"] = s.name;
  j["config_hash"] = s.config_hash;
  j["t_extinction"] = optional_json(s.t_extinction);
  j["t_star_bound"] = finite_json(s.t_star_bound);
  j["delta"] = s.delta;
  j["c_emp"] = finite_json(s.c_emp);
  j["decay_rate"] = optional_json(s.decay_rate);
  j["r2"] = optional_json(s.r2);
  j["predicted_exponent"] = optional_json(s.predicted_exponent);
  j["final_time"] = s.final_time;
  j["steps"] = s.steps;
  j["final_mass_ratio"] = s.final_mass_ratio;
  j["max_tail_mass"] = s.max_tail_mass;
  j["max_mass_balance_residual"] = s.max_mass_balance_residual;
  j["worst_contraction_ratio"] = optional_json(s.worst_contraction_ratio);
  j["worst_gradient_increase"] = optional_json(s.worst_gradient_increase);
  j["worst_ut_ratio"] = optional_json(s.worst_ut_ratio);
  j["wall_clock"] = s.wall_clock;
  j["flags"] = s.flags;
  j["passed"] = s.passed();
  std::ofstream(dir / "summary.json") << j.dump(2) << '\n';

  std::ofstream txt(dir / "summary.txt");
  txt << "name = " << s.name << '\n'
      << "config_hash = " << s.config_hash << '\n'
      << "t_extinction = " << optional_text(s.t_extinction) << '\n'
      << "t_star_bound = " << optional_text(s.t_star_bound) << '\n'
      << "delta = " << fmt17(s.delta) << '\n'
      << "c_emp = " << optional_text(s.c_emp) << '\n'
      << "decay_rate = " << optional_text(s.decay_rate) << '\n'
      << "r2 = " << optional_text(s.r2) << '\n'
      << "final_mass_ratio = " << fmt17(s.final_mass_ratio) << '\n'
      << "max_tail_mass = " << fmt17(s.max_tail_mass) << '\n'
      << "max_mass_balance_residual = " << fmt17(s.max_mass_balance_residual) << '\n';
  for (const auto& [flag, ok] : s.flags) txt << "flag." << flag << " = " << (ok ? "pass" : "fail") << '\n';
  txt << "passed = " << (s.passed() ? "true" : "false") << '\n';
}

RunSummary run_scenario(const RunConfig& config) {
  ScenarioOutput output = execute_scenario(config);
  const std::filesystem::path dir(config.output);
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "config.ini") << to_text(config);
  write_series_csv(dir / "series.csv", output.result.series);
  write_summary(dir, output.summary);
  std::ofstream(dir / "plot_series.py") << kPlotScript;
  for (std::size_t i = 0; i < output.result.snapshots.size(); ++i)
    write_field(dir / ("snapshot_" + std::to_string(i) + ".bin"), output.result.snapshots[i].second);
  return output.summary;
}

std::vector<SweepEntry> sweep(const RunConfig& base, const std::string& dotted_key,
                              const std::vector<std::string>& values, unsigned max_threads) {
  std::vector<SweepEntry> entries(values.size());
  std::vector<RunConfig> configs;
  configs.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    entries[i].value = values[i];
    RunConfig c = base;
    apply_override(c, dotted_key, values[i]);
    c.output = (std::filesystem::path(base.output) / (dotted_key + "=" + values[i])).string();
    configs.push_back(std::move(c));
  }

  const unsigned workers = std::max(1u, std::min<unsigned>(max_threads ? max_threads : thread_budget(),
                                                           static_cast<unsigned>(values.size())));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < configs.size(); i = next++) {
      try {
        entries[i].summary = run_scenario(configs[i]);
      } catch (const std::exception& e) {
        entries[i].error = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();
  return entries;
}

}  // namespace extinguish
