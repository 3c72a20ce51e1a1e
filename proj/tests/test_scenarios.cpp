#include <doctest.h>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "extinguish/config.hpp"
#include "extinguish/errors.hpp"
#include "extinguish/scenarios.hpp"

using namespace extinguish;
namespace fs = std::filesystem;

namespace {

const fs::path kWork = fs::temp_directory_path() / "extinguish_test_scenarios";

std::string tiny_text(const std::string& name) {
  return "[run]\nname = " + name + "\noutput = " + (kWork / name).string() +
         "\n[grid]\nn = 64\nlength = 20\n[model]\nm = 0.5\na = 0,1\n"
         "[time]\ndt = 1e-2\nt_end = 0.3\n[analysis]\ncheck = none\n";
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path write_file(const std::string& name, const std::string& text) {
  fs::create_directories(kWork);
  const fs::path p = kWork / name;
  std::ofstream(p) << text;
  return p;
}

int cli(const std::string& args) {
  const std::string cmd = std::string(EXTINGUISH_CLI) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("run_scenario writes the documented artifacts") {
  const RunConfig c = parse_config(tiny_text("tiny"));
  const RunSummary s = run_scenario(c);
  const fs::path dir = kWork / "tiny";
  REQUIRE(fs::exists(dir / "series.csv"));
  CHECK(fs::exists(dir / "plot_series.py"));
  CHECK(s.steps == 30);
  CHECK(s.flags.at("series_well_formed"));

  std::ifstream csv(dir / "series.csv");
  std::string header, row;
  std::getline(csv, header);
  CHECK(header == "t,mass,lmp1,h1,h2,source_work,tail_mass");
  int rows = 0;
  while (std::getline(csv, row)) ++rows;
  CHECK(rows == 31);

  const auto j = nlohmann::json::parse(slurp(dir / "summary.json"));
  for (const char* key : {"config_hash", "t_extinction", "t_star_bound", "delta", "c_emp", "decay_rate", "r2", "flags"})
    CHECK(j.contains(key));
  CHECK(j["config_hash"] == config_hash(c));
}

TEST_CASE("identical config reproduces series bitwise") {
  const RunConfig c = parse_config(tiny_text("repeat"));
  run_scenario(c);
  const std::string first = slurp(kWork / "repeat" / "series.csv");
  run_scenario(c);
  CHECK(slurp(kWork / "repeat" / "series.csv") == first);
}

TEST_CASE("catalog scenarios parse") {
  for (const auto& entry : fs::directory_iterator(EXTINGUISH_SCENARIO_DIR)) {
    if (entry.path().extension() != ".ini") continue;
    CAPTURE(entry.path().string());
    CHECK_NOTHROW(load_config(entry.path().string()));
  }
}

TEST_CASE("sweep writes one directory per value") {
  const RunConfig c = parse_config(tiny_text("sweep"));
  // Values are validated before any run starts.
  CHECK_THROWS_AS(sweep(c, "time.dt", {"1e-2", "bad"}, 2), ConfigError);
  const auto entries = sweep(c, "time.dt", {"1e-2", "2e-2"}, 2);
  REQUIRE(entries.size() == 2);
  CHECK(entries[0].summary);
  CHECK(entries[1].summary);
  CHECK(fs::exists(kWork / "sweep" / "time.dt=1e-2" / "series.csv"));
  CHECK(fs::exists(kWork / "sweep" / "time.dt=2e-2" / "series.csv"));
}

TEST_CASE("CLI exit codes") {
  const fs::path good = write_file("good.ini", tiny_text("cli"));
  CHECK(cli("run --config " + good.string()) == 0);
  CHECK(cli("check-cone --m 0.5 --a 0,1") == 0);
  CHECK(cli("fit --csv " + (kWork / "cli" / "series.csv").string() + " --kind exp") == 0);

  const fs::path bad = write_file("bad.ini", "[model]\nm = 1.5\n");
  CHECK(cli("run --config " + bad.string()) == 1);
  CHECK(cli("run --config /nonexistent.ini") == 1);
  CHECK(cli("check-cone --m 1.5 --a 0,1") == 1);
  CHECK(cli("no-such-command") == 1);

  // An extinction check that cannot hold within t_end fails its assertion.
  std::string text = tiny_text("cli_fail");
  text.replace(text.find("check = none"), 12, "check = extinction");
  CHECK(cli("run --config " + write_file("fail.ini", text).string()) == 2);

  // Picard with a long step diverges or stalls.
  std::string stiff = tiny_text("cli_stiff");
  stiff.replace(stiff.find("dt = 1e-2"), 9, "dt = 5");
  stiff.replace(stiff.find("t_end = 0.3"), 11, "t_end = 10");
  stiff += "[solver]\nmode = picard\nmax_iter = 5\ntol = 1e-14\n";
  std::string stiff_time = stiff;
  stiff_time.insert(stiff_time.find("[analysis]"), "max_halvings = 0\n");
  CHECK(cli("run --config " + write_file("stiff.ini", stiff_time).string()) == 3);
}
