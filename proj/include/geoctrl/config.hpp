#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace geoctrl {

struct FlowsConfig {
  int n_trajectories = 12;
  double s_lo = -10.0;
  double s_hi = 10.0;
  double tol = 1e-9;
  std::string branch = "plus";  // plus | minus | full_p
  double drift_tol = 1e-6;      // verdict bound on tau and p drift
};

struct TrappingConfig {
  int n_seeds = 64;
  double horizon = 1000.0;
  int n_trapped_samples = 32;
  double s_max = 60.0;
};

struct GccConfig {
  int n_samples = 32;
  double T = 3.5;
  double threshold = 0.01;
  double s_max_equiv = 60.0;
};

struct EscapeConfig {
  int n_cover = 32;
  int n_samples = 10000;
  double x_max = 0.0;  // 0 selects 2 R0
  double xi_hi = 10.0;
};

struct DecayConfig {
  double L = 8.0;
  int n = 64;
  double cfl = 0.4;
  bool sponge = true;
  double T = 0.0;  // 0 selects 8x the crossing-time estimate
  int n_report = 32;
  std::string expect = "none";  // none | damped | undamped
  double ring_radius = 0.0;     // 0 selects the unstable orbit radius
  double ring_width = 0.5;
  int ring_mode = 6;
};

struct Config {
  std::string scenario = "polar_gap";
  std::string output_dir = ".";
  std::uint64_t seed = 42;
  FlowsConfig flows;
  TrappingConfig trapping;
  GccConfig gcc;
  EscapeConfig escape;
  DecayConfig decay;
};

// Reads a JSON config file (empty path keeps the defaults) and then applies
// key=value overrides with dotted paths, e.g. escape.n_samples=2000.
// Unknown fields, malformed values, and type mismatches raise ConfigError
// naming the offending field.
Config load_config(const std::string& path,
                   const std::vector<std::string>& overrides);

}  // namespace geoctrl
