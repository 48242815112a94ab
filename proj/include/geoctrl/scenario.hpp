#pragma once

#include <string>
#include <vector>

#include "geoctrl/annuli.hpp"
#include "geoctrl/damping.hpp"
#include "geoctrl/escape.hpp"
#include "geoctrl/metrics.hpp"

namespace geoctrl {

// A named metric/damping pairing together with the control constants that
// were measured for it offline.  Cbar2 is half the estimated two-sided
// damping average over trapped trajectories of length T2; eps and eps1 are
// the profile margins used by the local escape pieces.
struct Scenario {
  std::string name;
  SpacetimeMetric metric;
  DampingProfile damping;
  EscapeConstants consts;
  AnnulusDecomposition decomp;
  int n_trapped_samples = 32;
  double s_max_trapped = 60.0;
};

// Built-in scenarios:
//   polar_gap      photon-sphere model, angularly thinned band damping
//   band_bump      photon-sphere model, full band damping
//   far_shell      photon-sphere model, damping disjoint from the band
//   time_ramp      photon-sphere model, a(t) = max(t, 0)
//   minkowski_free flat model, no damping
//   minkowski_ball flat model, damped ball of radius 2
Scenario make_scenario(const std::string& name);

std::vector<std::string> scenario_names();

}  // namespace geoctrl
