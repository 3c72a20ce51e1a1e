#include <doctest.h>

#include <string>

#include "extinguish/config.hpp"
#include "extinguish/errors.hpp"

using namespace extinguish;

namespace {

const char* kMinimal = R"(
[run]
name = tiny

[model]
m = 0.5
a = 0,1
)";

std::string first_error(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.violations().front();
  }
  return {};
}

}  // namespace

TEST_CASE("minimal config fills defaults") {
  const RunConfig c = parse_config(kMinimal);
  CHECK(c.name == "tiny");
  CHECK(c.dims == 1);
  CHECK(c.n == 256);
  CHECK(c.length == 40.0);
  CHECK(c.params.m == 0.5);
  CHECK(c.params.a == Complex(0.0, 1.0));
  CHECK(c.scheme == Scheme::backward_euler);
  CHECK(c.dt == 1e-3);
  CHECK(c.check == CheckKind::none);
  CHECK(c.solve.mode == SolveMode::splitting);
}

TEST_CASE("validation errors name the violated invariant") {
  CHECK(first_error("[model]\nm = 1.5\n").find("(0,1)") != std::string::npos);
  const std::string cone = first_error("[model]\na = 1\n");
  CHECK(cone.find("cone") != std::string::npos);
  CHECK(cone.find("2 sqrt(m) Im(a) >= (1-m)|Re(a)|") != std::string::npos);
  CHECK(first_error("[grid]\nn = 100\n").find("power of two") != std::string::npos);
}

TEST_CASE("parse errors carry line numbers and every violation") {
  const std::string text = "[grid]\nn = 64\nbogus = 1\nn = 32\n[time]\ndt = abc\n";
  try {
    parse_config(text);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    REQUIRE(e.violations().size() == 3);
    CHECK(e.violations()[0].rfind("line 3: unknown key 'grid.bogus'", 0) == 0);
    CHECK(e.violations()[1].rfind("line 4: duplicate key 'grid.n'", 0) == 0);
    CHECK(e.violations()[2].rfind("line 6: time.dt", 0) == 0);
  }
  CHECK(first_error("n = 4\n").find("before any [section]") != std::string::npos);
  CHECK(first_error("[grid\n").find("unterminated") != std::string::npos);
}

TEST_CASE("text round trip and overrides") {
  RunConfig c = parse_config(kMinimal);
  c.snapshot_times = {0.5, 1.25};
  c.source_exponent = 6.0;
  c.params.a = {-0.25, 1.5};
  const RunConfig back = parse_config(to_text(c));
  CHECK(to_text(back) == to_text(c));
  CHECK(config_hash(back) == config_hash(c));
  CHECK(config_hash(c).size() == 16);

  apply_override(c, "time.dt", "2e-3");
  CHECK(c.dt == 2e-3);
  CHECK(config_hash(c) != config_hash(back));
  CHECK_THROWS_AS(apply_override(c, "time.nope", "1"), ConfigError);
  CHECK_THROWS_AS(apply_override(c, "model.m", "2"), ConfigError);
}

TEST_CASE("comments and whitespace") {
  const RunConfig c = parse_config("# leading comment\n[grid]\n  n   =   32   # trailing\n\n");
  CHECK(c.n == 32);
}
