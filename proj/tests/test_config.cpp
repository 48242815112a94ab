#include <initializer_list>
#include <cstdio>
#include <fstream>

#include "doctest.h"
#include "geoctrl/config.hpp"
#include "geoctrl/errors.hpp"

using namespace geoctrl;

namespace {

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& text) : path("config_test_tmp.json") {
    std::ofstream out(path);
    out << text;
  }
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("defaults survive an empty config") {
  TempFile f("{}");
  const Config cfg = load_config(f.path, {});
  CHECK(cfg.scenario == "polar_gap");
  CHECK(cfg.seed == 42);
  CHECK(cfg.flows.n_trajectories == 12);
  CHECK(cfg.trapping.horizon == 1000.0);
  CHECK(cfg.gcc.T == 3.5);
  CHECK(cfg.escape.n_samples == 10000);
  CHECK(cfg.decay.n == 64);
  CHECK(cfg.decay.expect == "none");
}

TEST_CASE("file values override defaults") {
  TempFile f(R"({
    "scenario": "minkowski_free",
    "seed": 7,
    "flows": {"n_trajectories": 3, "s_hi": 25.0},
    "decay": {"n": 32, "expect": "damped", "sponge": false}
  })");
  const Config cfg = load_config(f.path, {});
  CHECK(cfg.scenario == "minkowski_free");
  CHECK(cfg.seed == 7);
  CHECK(cfg.flows.n_trajectories == 3);
  CHECK(cfg.flows.s_hi == 25.0);
  CHECK(cfg.flows.s_lo == -10.0);  // untouched default
  CHECK(cfg.decay.n == 32);
  CHECK(cfg.decay.expect == "damped");
  CHECK_FALSE(cfg.decay.sponge);
}

TEST_CASE("command line overrides outrank the file") {
  TempFile f(R"({"seed": 7, "gcc": {"threshold": 0.5}})");
  const Config cfg = load_config(
      f.path, {"seed=11", "gcc.threshold=0.25", "scenario=band_bump",
               "decay.sponge=false", "escape.x_max=9.5"});
  CHECK(cfg.seed == 11);
  CHECK(cfg.gcc.threshold == 0.25);
  CHECK(cfg.scenario == "band_bump");
  CHECK_FALSE(cfg.decay.sponge);
  CHECK(cfg.escape.x_max == 9.5);
}

TEST_CASE("unknown fields are reported by path") {
  TempFile f(R"({"flows": {"wrong_name": 1}})");
  CHECK_THROWS_AS(load_config(f.path, {}), ConfigError);
  TempFile g("{}");
  CHECK_THROWS_AS(load_config(g.path, {"trapping.bogus=3"}), ConfigError);
}

TEST_CASE("type mismatches are rejected") {
  TempFile f(R"({"flows": {"n_trajectories": "many"}})");
  CHECK_THROWS_AS(load_config(f.path, {}), ConfigError);
  TempFile g("{}");
  CHECK_THROWS_AS(load_config(g.path, {"seed=notanumber"}), ConfigError);
}

TEST_CASE("validation rejects out-of-range settings") {
  TempFile f("{}");
  CHECK_THROWS_AS(load_config(f.path, {"flows.tol=-1.0"}), ConfigError);
  CHECK_THROWS_AS(load_config(f.path, {"flows.branch=sideways"}), ConfigError);
  CHECK_THROWS_AS(load_config(f.path, {"decay.expect=maybe"}), ConfigError);
  CHECK_THROWS_AS(load_config(f.path, {"decay.n=4"}), ConfigError);
}

TEST_CASE("missing file is a config error") {
  CHECK_THROWS_AS(load_config("definitely_not_here.json", {}), ConfigError);
}

TEST_CASE("malformed override syntax is rejected") {
  TempFile f("{}");
  CHECK_THROWS_AS(load_config(f.path, {"no_equals_sign"}), ConfigError);
}
