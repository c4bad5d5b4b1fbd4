#include <string>

#include "doctest.h"
#include "spoofwatch/config.hpp"
#include "spoofwatch/error.hpp"

using namespace spoofwatch;

namespace {

ErrorCode code_of(const std::string& text) {
  try {
    Config::parse(text);
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("config parsing") {
  const Config c = Config::parse(R"(
# top level
instrument = "ABC # not a comment"
tick_size = 0.01   # trailing

[sim]
horizon = 20_000
episode_starts = [3000, 9000, 15_000]
fixed = true
rates = [0.5, 1, 2e-1]
)");
  CHECK(c.get_string("instrument", "") == "ABC # not a comment");
  CHECK(c.get_double("tick_size", 0) == 0.01);
  CHECK(c.get_int("sim.horizon", 0) == 20000);
  CHECK(c.get_double("sim.horizon", 0) == 20000.0);
  CHECK(c.get_ints("sim.episode_starts", {}) == std::vector<std::int64_t>{3000, 9000, 15000});
  CHECK(c.get_doubles("sim.rates", {}) == std::vector<double>{0.5, 1.0, 0.2});
  CHECK(c.get_bool("sim.fixed", false));
  CHECK(c.get_u64("sim.seed", 9) == 9);
  CHECK_FALSE(c.has("horizon"));
  CHECK(c.keys().size() == 6);
}

TEST_CASE("config overrides") {
  Config c = Config::parse("[monitor]\nwindow = 100\n");
  c.set("monitor.window", "250");
  c.set("paths.events", "run/events.csv");
  c.set("sim.episode_starts", "[1, 2]");
  CHECK(c.get_int("monitor.window", 0) == 250);
  CHECK(c.get_string("paths.events", "") == "run/events.csv");
  CHECK(c.get_ints("sim.episode_starts", {}) == std::vector<std::int64_t>{1, 2});
  CHECK_THROWS_AS(c.set("a.b", "[1, [2]]"), Error);
}

TEST_CASE("config errors") {
  CHECK(code_of("x = 1\nx = 2\n") == ErrorCode::ConfigError);
  CHECK(code_of("[sec\nx = 1\n") == ErrorCode::ConfigError);
  CHECK(code_of("x = \"open\n") == ErrorCode::ConfigError);
  CHECK(code_of("x = [1, [2]]\n") == ErrorCode::ConfigError);
  CHECK(code_of("just words\n") == ErrorCode::ConfigError);
  try {
    Config::parse("a = 1\n\nb = [1,\n");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
  const Config c = Config::parse("s = \"text\"\nn = -3\n");
  CHECK_THROWS_AS(c.get_double("s", 0), Error);
  CHECK_THROWS_AS(c.get_u64("n", 0), Error);
  CHECK_THROWS_AS(c.get_ints("n", {}), Error);
  CHECK_THROWS_AS(Config::load("/nonexistent/run.toml"), Error);
}
