#include "extinguish/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "extinguish/errors.hpp"

namespace extinguish {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double parse_double(const std::string& s) {
  std::size_t pos = 0;
  double v;
  try {
    v = std::stod(s, &pos);
  } catch (...) {
    throw std::invalid_argument("expected a number, got '" + s + "'");
  }
  if (trim(s.substr(pos)).size() != 0) throw std::invalid_argument("expected a number, got '" + s + "'");
  return v;
}

long long parse_int(const std::string& s) {
  long long v = 0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end) throw std::invalid_argument("expected an integer, got '" + s + "'");
  return v;
}

bool parse_bool(const std::string& s) {
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw std::invalid_argument("expected true or false, got '" + s + "'");
}

Complex parse_complex(const std::string& s) {
  const auto comma = s.find(',');
  if (comma == std::string::npos) return {parse_double(trim(s)), 0.0};
  return {parse_double(trim(s.substr(0, comma))), parse_double(trim(s.substr(comma + 1)))};
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const std::string t = trim(item);
    if (!t.empty()) out.push_back(parse_double(t));
  }
  return out;
}

template <typename Enum>
Enum parse_enum(const std::string& s, const std::map<std::string, Enum>& names) {
  if (auto it = names.find(s); it != names.end()) return it->second;
  std::string allowed;
  for (const auto& [k, v] : names) allowed += (allowed.empty() ? "" : " | ") + k;
  throw std::invalid_argument("expected one of " + allowed + ", got '" + s + "'");
}

template <typename Enum>
std::string enum_name(Enum value, const std::map<std::string, Enum>& names) {
  for (const auto& [k, v] : names)
    if (v == value) return k;
  return "?";
}

const std::map<std::string, InitialKind> kInitialNames{
    {"gaussian", InitialKind::gaussian}, {"band_limited", InitialKind::band_limited}, {"zero", InitialKind::zero}};
const std::map<std::string, SourceKind> kSourceNames{{"zero", SourceKind::zero},
                                                     {"separable", SourceKind::separable},
                                                     {"vanishing_profile", SourceKind::vanishing_profile}};
const std::map<std::string, Envelope> kEnvelopeNames{
    {"constant", Envelope::constant}, {"ramp", Envelope::ramp}, {"bump", Envelope::bump}};
const std::map<std::string, Scheme> kSchemeNames{{"backward_euler", Scheme::backward_euler},
                                                 {"strang", Scheme::strang}};
const std::map<std::string, SolveMode> kModeNames{
    {"splitting", SolveMode::splitting}, {"picard", SolveMode::picard}, {"newton", SolveMode::newton}};
const std::map<std::string, CheckKind> kCheckNames{{"none", CheckKind::none},
                                                   {"extinction", CheckKind::extinction},
                                                   {"forced", CheckKind::forced},
                                                   {"decay_exponential", CheckKind::decay_exponential},
                                                   {"decay_power", CheckKind::decay_power},
                                                   {"vanishing", CheckKind::vanishing},
                                                   {"contraction", CheckKind::contraction},
                                                   {"gradient", CheckKind::gradient},
                                                   {"ut_bound", CheckKind::ut_bound}};

struct KeySpec {
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

// Ordered registry: the iteration order defines the canonical text layout.
const std::vector<std::pair<std::string, KeySpec>>& registry() {
  static const std::vector<std::pair<std::string, KeySpec>> keys = [] {
    std::vector<std::pair<std::string, KeySpec>> k;
    auto add = [&k](std::string name, KeySpec spec) { k.emplace_back(std::move(name), std::move(spec)); };

    add("run.name", {[](RunConfig& c, const std::string& v) { c.name = v; }, [](const RunConfig& c) { return c.name; }});
    add("run.output",
        {[](RunConfig& c, const std::string& v) { c.output = v; }, [](const RunConfig& c) { return c.output; }});
    add("run.seed", {[](RunConfig& c, const std::string& v) { c.seed = static_cast<std::uint64_t>(parse_int(v)); },
                     [](const RunConfig& c) { return std::to_string(c.seed); }});

    add("grid.dims", {[](RunConfig& c, const std::string& v) { c.dims = static_cast<int>(parse_int(v)); },
                      [](const RunConfig& c) { return std::to_string(c.dims); }});
    add("grid.n", {[](RunConfig& c, const std::string& v) { c.n = parse_int(v); },
                   [](const RunConfig& c) { return std::to_string(c.n); }});
    add("grid.length", {[](RunConfig& c, const std::string& v) { c.length = parse_double(v); },
                        [](const RunConfig& c) { return fmt(c.length); }});
    add("grid.max_points", {[](RunConfig& c, const std::string& v) { c.max_points = parse_int(v); },
                            [](const RunConfig& c) { return std::to_string(c.max_points); }});

    add("model.m", {[](RunConfig& c, const std::string& v) { c.params.m = parse_double(v); },
                    [](const RunConfig& c) { return fmt(c.params.m); }});
    add("model.a", {[](RunConfig& c, const std::string& v) { c.params.a = parse_complex(v); },
                    [](const RunConfig& c) { return fmt(c.params.a.real()) + "," + fmt(c.params.a.imag()); }});
    add("model.dispersion", {[](RunConfig& c, const std::string& v) { c.dispersion = parse_bool(v); },
                             [](const RunConfig& c) { return std::string(c.dispersion ? "true" : "false"); }});

    add("initial.kind", {[](RunConfig& c, const std::string& v) { c.initial = parse_enum(v, kInitialNames); },
                         [](const RunConfig& c) { return enum_name(c.initial, kInitialNames); }});
    add("initial.amplitude", {[](RunConfig& c, const std::string& v) { c.amplitude = parse_double(v); },
                              [](const RunConfig& c) { return fmt(c.amplitude); }});
    add("initial.width", {[](RunConfig& c, const std::string& v) { c.width = parse_double(v); },
                          [](const RunConfig& c) { return fmt(c.width); }});
    add("initial.kmax", {[](RunConfig& c, const std::string& v) { c.kmax = static_cast<int>(parse_int(v)); },
                         [](const RunConfig& c) { return std::to_string(c.kmax); }});

    add("source.kind", {[](RunConfig& c, const std::string& v) { c.source = parse_enum(v, kSourceNames); },
                        [](const RunConfig& c) { return enum_name(c.source, kSourceNames); }});
    add("source.t0", {[](RunConfig& c, const std::string& v) { c.source_t0 = parse_double(v); },
                      [](const RunConfig& c) { return fmt(c.source_t0); }});
    add("source.eps_star", {[](RunConfig& c, const std::string& v) { c.eps_star = parse_double(v); },
                            [](const RunConfig& c) { return fmt(c.eps_star); }});
    add("source.exponent",
        {[](RunConfig& c, const std::string& v) {
           if (v == "auto")
             c.source_exponent.reset();
           else
             c.source_exponent = parse_double(v);
         },
         [](const RunConfig& c) { return c.source_exponent ? fmt(*c.source_exponent) : std::string("auto"); }});
    add("source.envelope", {[](RunConfig& c, const std::string& v) { c.envelope = parse_enum(v, kEnvelopeNames); },
                            [](const RunConfig& c) { return enum_name(c.envelope, kEnvelopeNames); }});
    add("source.amplitude", {[](RunConfig& c, const std::string& v) { c.source_amplitude = parse_double(v); },
                             [](const RunConfig& c) { return fmt(c.source_amplitude); }});
    add("source.width", {[](RunConfig& c, const std::string& v) { c.source_width = parse_double(v); },
                         [](const RunConfig& c) { return fmt(c.source_width); }});

    add("time.scheme", {[](RunConfig& c, const std::string& v) { c.scheme = parse_enum(v, kSchemeNames); },
                        [](const RunConfig& c) { return enum_name(c.scheme, kSchemeNames); }});
    add("time.dt", {[](RunConfig& c, const std::string& v) { c.dt = parse_double(v); },
                    [](const RunConfig& c) { return fmt(c.dt); }});
    add("time.t_end", {[](RunConfig& c, const std::string& v) { c.t_end = parse_double(v); },
                       [](const RunConfig& c) { return fmt(c.t_end); }});
    add("time.cadence", {[](RunConfig& c, const std::string& v) { c.cadence = static_cast<int>(parse_int(v)); },
                         [](const RunConfig& c) { return std::to_string(c.cadence); }});
    add("time.extinction_threshold",
        {[](RunConfig& c, const std::string& v) { c.extinction_threshold = parse_double(v); },
         [](const RunConfig& c) { return fmt(c.extinction_threshold); }});
    add("time.stop_on_extinction",
        {[](RunConfig& c, const std::string& v) { c.stop_on_extinction = parse_bool(v); },
         [](const RunConfig& c) { return std::string(c.stop_on_extinction ? "true" : "false"); }});
    add("time.snapshot_times", {[](RunConfig& c, const std::string& v) { c.snapshot_times = parse_list(v); },
                                [](const RunConfig& c) {
                                  std::string out;
                                  for (double t : c.snapshot_times) out += (out.empty() ? "" : ",") + fmt(t);
                                  return out;
                                }});
    add("time.max_halvings",
        {[](RunConfig& c, const std::string& v) { c.max_halvings = static_cast<int>(parse_int(v)); },
         [](const RunConfig& c) { return std::to_string(c.max_halvings); }});

    add("solver.mode", {[](RunConfig& c, const std::string& v) { c.solve.mode = parse_enum(v, kModeNames); },
                        [](const RunConfig& c) { return enum_name(c.solve.mode, kModeNames); }});
    add("solver.tol", {[](RunConfig& c, const std::string& v) { c.solve.tol = parse_double(v); },
                       [](const RunConfig& c) { return fmt(c.solve.tol); }});
    add("solver.max_iter",
        {[](RunConfig& c, const std::string& v) { c.solve.max_iter = static_cast<int>(parse_int(v)); },
         [](const RunConfig& c) { return std::to_string(c.solve.max_iter); }});
    add("solver.relaxation", {[](RunConfig& c, const std::string& v) { c.solve.relaxation = parse_double(v); },
                              [](const RunConfig& c) { return fmt(c.solve.relaxation); }});
    add("solver.epsilon_reg", {[](RunConfig& c, const std::string& v) { c.solve.epsilon_reg = parse_double(v); },
                               [](const RunConfig& c) { return fmt(c.solve.epsilon_reg); }});

    add("analysis.ell", {[](RunConfig& c, const std::string& v) { c.ell = static_cast<int>(parse_int(v)); },
                         [](const RunConfig& c) { return std::to_string(c.ell); }});
    add("analysis.check", {[](RunConfig& c, const std::string& v) { c.check = parse_enum(v, kCheckNames); },
                           [](const RunConfig& c) { return enum_name(c.check, kCheckNames); }});
    add("analysis.fit_from",
        {[](RunConfig& c, const std::string& v) {
           if (v == "auto")
             c.fit_from.reset();
           else
             c.fit_from = parse_double(v);
         },
         [](const RunConfig& c) { return c.fit_from ? fmt(*c.fit_from) : std::string("auto"); }});
    add("analysis.transient_fraction",
        {[](RunConfig& c, const std::string& v) { c.transient_fraction = parse_double(v); },
         [](const RunConfig& c) { return fmt(c.transient_fraction); }});
    add("analysis.vanishing_threshold",
        {[](RunConfig& c, const std::string& v) { c.vanishing_threshold = parse_double(v); },
         [](const RunConfig& c) { return fmt(c.vanishing_threshold); }});
    add("analysis.perturbation", {[](RunConfig& c, const std::string& v) { c.perturbation = parse_double(v); },
                                  [](const RunConfig& c) { return fmt(c.perturbation); }});
    return k;
  }();
  return keys;
}

const KeySpec* find_key(const std::string& dotted) {
  for (const auto& [name, spec] : registry())
    if (name == dotted) return &spec;
  return nullptr;
}

bool is_power_of_two(long long n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

std::vector<std::string> validation_errors(const RunConfig& c) {
  std::vector<std::string> errs;
  if (c.dims < 1 || c.dims > kMaxDims) errs.push_back("grid.dims: must be in 1..5");
  if (c.n < 4 || !is_power_of_two(c.n)) errs.push_back("grid.n: must be a power of two >= 4");
  if (!(c.length > 0)) errs.push_back("grid.length: must be positive");
  if (c.dims >= 1 && c.dims <= kMaxDims && c.n >= 4 && c.max_points > 0) {
    double points = std::pow(static_cast<double>(c.n), c.dims);
    if (points > static_cast<double>(c.max_points))
      errs.push_back("grid: n^dims = " + fmt(points) + " exceeds grid.max_points");
  }

  const bool m_ok = c.params.m > 0 && c.params.m < 1;
  if (!m_ok) errs.push_back("model.m: must lie in (0,1)");
  if (!std::isfinite(c.params.a.real()) || !std::isfinite(c.params.a.imag())) {
    errs.push_back("model.a: must be finite");
  } else if (m_ok && !cone_contains(c.params)) {
    errs.push_back(
        "model.a: outside the admissible cone; need Im(a) > 0 and 2 sqrt(m) Im(a) >= (1-m)|Re(a)|, "
        "strict when Re(a) >= 0");
  }

  if (c.initial == InitialKind::band_limited && (c.kmax < 0 || c.kmax >= c.n / 2))
    errs.push_back("initial.kmax: must lie in [0, n/2)");
  if (c.initial == InitialKind::gaussian && !(c.width > 0)) errs.push_back("initial.width: must be positive");
  if (!(c.amplitude >= 0)) errs.push_back("initial.amplitude: must be non-negative");

  if (c.source != SourceKind::zero) {
    if (!(c.source_t0 > 0)) errs.push_back("source.t0: must be positive for a non-zero source");
    if (!(c.source_width > 0)) errs.push_back("source.width: must be positive");
  }
  if (c.source == SourceKind::vanishing_profile) {
    if (!(c.eps_star > 0)) errs.push_back("source.eps_star: must be positive");
    if (c.source_exponent && !(*c.source_exponent > 0)) errs.push_back("source.exponent: must be positive");
  }

  if (!(c.dt > 0)) errs.push_back("time.dt: must be positive");
  if (!(c.t_end > 0)) errs.push_back("time.t_end: must be positive");
  if (c.cadence < 1) errs.push_back("time.cadence: must be >= 1");
  if (!(c.extinction_threshold > 0)) errs.push_back("time.extinction_threshold: must be positive");
  if (c.max_halvings < 0) errs.push_back("time.max_halvings: must be >= 0");

  if (!(c.solve.tol > 0)) errs.push_back("solver.tol: must be positive");
  if (c.solve.max_iter < 1) errs.push_back("solver.max_iter: must be >= 1");
  if (!(c.solve.relaxation > 0 && c.solve.relaxation <= 1)) errs.push_back("solver.relaxation: must lie in (0,1]");
  if (!(c.solve.epsilon_reg >= 0)) errs.push_back("solver.epsilon_reg: must be >= 0");

  if (c.ell != 1 && c.ell != 2) errs.push_back("analysis.ell: must be 1 or 2");
  if (!(c.transient_fraction >= 0 && c.transient_fraction < 1))
    errs.push_back("analysis.transient_fraction: must lie in [0,1)");
  if (!(c.vanishing_threshold > 0)) errs.push_back("analysis.vanishing_threshold: must be positive");
  if (!(c.perturbation > 0)) errs.push_back("analysis.perturbation: must be positive");
  return errs;
}

RunConfig parse_config(std::string_view text) {
  RunConfig config;
  std::vector<std::string> errors;
  std::set<std::string> seen;
  std::string section;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(line_no) + ": ";
    if (line.front() == '[') {
      if (line.back() != ']') {
        errors.push_back(where + "unterminated section header");
        continue;
      }
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      errors.push_back(where + "expected 'key = value'");
      continue;
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (section.empty()) {
      errors.push_back(where + "key '" + key + "' appears before any [section]");
      continue;
    }
    const std::string dotted = section + "." + key;
    const KeySpec* spec = find_key(dotted);
    if (!spec) {
      errors.push_back(where + "unknown key '" + dotted + "'");
      continue;
    }
    if (!seen.insert(dotted).second) {
      errors.push_back(where + "duplicate key '" + dotted + "'");
      continue;
    }
    try {
      spec->set(config, value);
    } catch (const std::exception& e) {
      errors.push_back(where + dotted + ": " + e.what());
    }
  }
  if (errors.empty()) {
    for (auto& e : validation_errors(config)) errors.push_back(std::move(e));
  }
  if (!errors.empty()) throw ConfigError(std::move(errors));
  return config;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({"cannot open config file '" + path + "'"});
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

void apply_override(RunConfig& config, const std::string& dotted_key, const std::string& value) {
  const KeySpec* spec = find_key(dotted_key);
  if (!spec) throw ConfigError({"unknown key '" + dotted_key + "'"});
  try {
    spec->set(config, trim(value));
  } catch (const std::exception& e) {
    throw ConfigError({dotted_key + ": " + e.what()});
  }
  auto errs = validation_errors(config);
  if (!errs.empty()) throw ConfigError(std::move(errs));
}

std::string to_text(const RunConfig& config) {
  std::string out;
  std::string section;
  for (const auto& [name, spec] : registry()) {
    const auto dot = name.find('.');
    const std::string sec = name.substr(0, dot);
    if (sec != section) {
      if (!out.empty()) out += '\n';
      out += "[" + sec + "]\n";
      section = sec;
    }
    out += name.substr(dot + 1) + " = " + spec.get(config) + "\n";
  }
  return out;
}

std::string config_hash(const RunConfig& config) {
  std::uint64_t hash = 1469598103934665603ULL;
  for (unsigned char ch : to_text(config)) {
    hash ^= ch;
    hash *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

std::string to_string(CheckKind kind) { return enum_name(kind, kCheckNames); }
std::string to_string(Scheme scheme) { return enum_name(scheme, kSchemeNames); }

}  // namespace extinguish
