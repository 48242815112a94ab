#include "geoctrl/scenario.hpp"

#include "geoctrl/errors.hpp"

namespace geoctrl {

namespace {

Scenario photon_base(const std::string& name) {
  Scenario sc;
  sc.name = name;
  sc.metric = photon_sphere_metric();
  // measured for the polar_gap profile: the two-sided trapped average over
  // T2 = 3.5 stays above 2 * 0.16322 on a 4096-sample sweep
  sc.consts.Cbar2 = 0.16322;
  sc.consts.T2 = 3.5;
  sc.consts.eps = 0.3;
  sc.consts.eps1 = 0.3;
  return sc;
}

}  // namespace

Scenario make_scenario(const std::string& name) {
  if (name == "polar_gap") {
    Scenario sc = photon_base(name);
    sc.damping = polar_gap_damping();
    return sc;
  }
  if (name == "band_bump") {
    Scenario sc = photon_base(name);
    sc.damping = band_bump_damping();
    return sc;
  }
  if (name == "far_shell") {
    Scenario sc = photon_base(name);
    sc.damping = far_shell_damping();
    return sc;
  }
  if (name == "time_ramp") {
    Scenario sc = photon_base(name);
    sc.damping = time_ramp_damping();
    return sc;
  }
  if (name == "minkowski_free") {
    Scenario sc;
    sc.name = name;
    sc.metric = minkowski_metric();
    sc.damping = zero_damping();
    sc.consts.T2 = 3.5;
    sc.consts.Cbar2 = 0.0;
    sc.consts.eps = 0.3;
    sc.consts.eps1 = 0.3;
    return sc;
  }
  if (name == "minkowski_ball") {
    Scenario sc;
    sc.name = name;
    sc.metric = minkowski_metric();
    sc.damping = ball_bump_damping(1.0, 2.0);
    sc.consts.T2 = 3.5;
    sc.consts.Cbar2 = 0.0;
    sc.consts.eps = 0.3;
    sc.consts.eps1 = 0.3;
    return sc;
  }
  throw ConfigError("unknown scenario '" + name + "'");
}

std::vector<std::string> scenario_names() {
  return {"polar_gap",  "band_bump",      "far_shell",
          "time_ramp",  "minkowski_free", "minkowski_ball"};
}

}  // namespace geoctrl
