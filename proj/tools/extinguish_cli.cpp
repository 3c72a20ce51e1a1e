// Command-line front end. Exit codes: 0 success, 1 config error,
// 2 assertion failure, 3 numerical divergence or non-convergence.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "extinguish/cone.hpp"
#include "extinguish/config.hpp"
#include "extinguish/diagnostics.hpp"
#include "extinguish/errors.hpp"
#include "extinguish/resolvent.hpp"
#include "extinguish/scenarios.hpp"
#include "extinguish/verify.hpp"

using namespace extinguish;

namespace {

enum Exit { kOk = 0, kConfig = 1, kAssertion = 2, kNumerical = 3 };

Complex parse_complex(const std::string& text) {
  const auto comma = text.find(',');
  try {
    if (comma == std::string::npos) return {std::stod(text), 0.0};
    return {std::stod(text.substr(0, comma)), std::stod(text.substr(comma + 1))};
  } catch (const std::exception&) {
    throw ConfigError({"cannot parse complex value '" + text + "' (expected re,im)"});
  }
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto first = item.find_first_not_of(" \t");
    const auto last = item.find_last_not_of(" \t");
    if (first != std::string::npos) out.push_back(item.substr(first, last - first + 1));
  }
  return out;
}

DiagnosticsSeries read_series_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({"cannot open " + path});
  std::string line;
  std::getline(in, line);
  if (line.rfind("t,mass,lmp1,h1,h2,source_work,tail_mass", 0) != 0) throw ConfigError({path + ": unexpected header"});
  DiagnosticsSeries s;
  int row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    std::vector<double> v;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) v.push_back(std::strtod(cell.c_str(), nullptr));
    if (v.size() != 7) throw ConfigError({path + ":" + std::to_string(row) + ": expected 7 columns"});
    s.times.push_back(v[0]);
    s.mass.push_back(v[1]);
    s.lmp1.push_back(v[2]);
    s.h1.push_back(v[3]);
    s.h2.push_back(v[4]);
    s.source_work.push_back(v[5]);
    s.tail_mass.push_back(v[6]);
  }
  return s;
}

void print_summary(const RunSummary& s) {
  std::printf("%s  hash=%s  steps=%d  t_final=%.6g  wall=%.2fs\n", s.name.c_str(), s.config_hash.c_str(), s.steps,
              s.final_time, s.wall_clock);
  if (s.t_extinction) std::printf("  t_extinction = %.6g\n", *s.t_extinction);
  if (std::isfinite(s.t_star_bound)) std::printf("  t_star_bound = %.6g  (delta %.6g, C_emp %.6g)\n", s.t_star_bound, s.delta, s.c_emp);
  if (s.decay_rate) std::printf("  decay = %.6g  r2 = %.6f\n", *s.decay_rate, s.r2.value_or(0.0));
  for (const auto& [flag, ok] : s.flags) std::printf("  %-36s %s\n", flag.c_str(), ok ? "pass" : "FAIL");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Damped NLS extinction simulator"};
  app.require_subcommand(1);

  double cone_m = 0.5;
  std::string cone_a;
  auto* check = app.add_subcommand("check-cone", "Test cone membership and print the rotation");
  check->add_option("--m", cone_m, "Exponent m in (0,1)")->required();
  check->add_option("--a", cone_a, "Coefficient as re,im")->required();

  std::string config_path;
  auto* run = app.add_subcommand("run", "Run one scenario");
  run->add_option("--config", config_path, "Scenario file")->required();

  std::string vary, values;
  auto* sweep_cmd = app.add_subcommand("sweep", "Run a scenario over several values of one key");
  sweep_cmd->add_option("--config", config_path, "Scenario file")->required();
  sweep_cmd->add_option("--vary", vary, "section.key to vary")->required();
  sweep_cmd->add_option("--values", values, "Comma-separated values")->required();

  std::string suite = "all";
  std::uint64_t seed = 1;
  long long trials = 1000;
  auto* verify = app.add_subcommand("verify", "Run property suites and print a JSON report");
  verify->add_option("--suite", suite, "cone | resolvent | evolve | diagnostics | all");
  verify->add_option("--seed", seed, "RNG seed");
  verify->add_option("--trials", trials, "Samples per property")->check(CLI::PositiveNumber);

  std::string csv_path, kind = "exp";
  double t_lo = -1.0, t_hi = -1.0;
  auto* fit = app.add_subcommand("fit", "Fit exponential or power-law decay to a series.csv");
  fit->add_option("--csv", csv_path, "series.csv path")->required();
  fit->add_option("--kind", kind, "exp | power")->check(CLI::IsMember({"exp", "power"}));
  fit->add_option("--from", t_lo, "Window start (default: first record)");
  fit->add_option("--to", t_hi, "Window end (default: last record)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kConfig;
  }

  try {
    if (*check) {
      const Complex a = parse_complex(cone_a);
      const bool inside = cone_contains(cone_m, a);
      std::printf("m = %.17g  a = %.17g%+.17gi\n", cone_m, a.real(), a.imag());
      std::printf("in_cone = %s\n", inside ? "true" : "false");
      std::printf("boundary_angle = %.17g\n", cone_boundary_angle(cone_m));
      if (inside) {
        const Rotation<double> r = rotate(ConeParams<double>{cone_m, a});
        const Complex ab = a * r.b;
        std::printf("b = %.17g%+.17gi  theta_b = %.17g\n", r.b.real(), r.b.imag(), r.theta_b);
        std::printf("ab = %.17g%+.17gi\n", ab.real(), ab.imag());
      }
      return kOk;
    }
    if (*run) {
      const RunSummary s = run_scenario(load_config(config_path));
      print_summary(s);
      return s.passed() ? kOk : kAssertion;
    }
    if (*sweep_cmd) {
      const RunConfig base = load_config(config_path);
      const auto entries = sweep(base, vary, split_list(values));
      std::optional<std::string> best;
      bool numerical = false;
      for (const auto& e : entries) {
        if (!e.summary) {
          std::printf("%s = %s: error: %s\n", vary.c_str(), e.value.c_str(), e.error.c_str());
          numerical = true;
          continue;
        }
        std::printf("%s = %s: %s\n", vary.c_str(), e.value.c_str(), e.summary->passed() ? "pass" : "fail");
        print_summary(*e.summary);
        if (e.summary->passed() && (!best || std::stod(e.value) > std::stod(*best))) best = e.value;
      }
      if (best)
        std::printf("largest passing %s = %s\n", vary.c_str(), best->c_str());
      else
        std::printf("no passing value of %s\n", vary.c_str());
      if (numerical) return kNumerical;
      return best ? kOk : kAssertion;
    }
    if (*verify) {
      const VerifyReport report = verify_suite(suite, seed, trials);
      std::cout << report.to_json() << '\n';
      return report.passed() ? kOk : kAssertion;
    }
    if (*fit) {
      const DiagnosticsSeries s = read_series_csv(csv_path);
      if (s.empty()) throw InsufficientDataError("empty series");
      const double lo = t_lo >= 0 ? t_lo : s.times.front();
      const double hi = t_hi >= 0 ? t_hi : s.times.back();
      const bool power = kind == "power";
      const DecayFit f = fit_decay(s, power ? DecayKind::power : DecayKind::exponential, lo, hi, power ? 0.0 : 1.0);
      nlohmann::ordered_json j;
      j["kind"] = kind;
      j["t_lo"] = lo;
      j["t_hi"] = hi;
      j[power ? "exponent" : "rate"] = f.rate_or_exponent;
      j["r2"] = f.r2;
      if (power) j["time_scale"] = f.time_scale;
      std::cout << j.dump(2) << '\n';
      return kOk;
    }
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error:\n%s\n", e.what());
    return kConfig;
  } catch (const InsufficientDataError& e) {
    std::fprintf(stderr, "fit error: %s\n", e.what());
    return kAssertion;
  } catch (const DomainError& e) {
    std::fprintf(stderr, "invalid input: %s\n", e.what());
    return kConfig;
  } catch (const DivergenceError& e) {
    std::fprintf(stderr, "divergence: %s\n", e.what());
    return kNumerical;
  } catch (const ConvergenceError& e) {
    std::fprintf(stderr, "non-convergence: %s\n", e.what());
    return kNumerical;
  }
  return kOk;
}
