#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "geoctrl/flow.hpp"
#include "geoctrl/metrics.hpp"

namespace geoctrl {

enum class TrapVerdict { trapped, escaping };

// "escaping" carries a certificate (|x_s| reached max{R, |x0|} beyond the AF
// radius); "trapped" only means the horizon was exhausted first.
struct TrapClass {
  TrapVerdict forward = TrapVerdict::trapped;
  TrapVerdict backward = TrapVerdict::trapped;
  double horizon_used = 0.0;
  double escape_radius = 0.0;
};

TrapClass classify(const SpacetimeMetric& m, const PhasePoint& w0, Branch br,
                   double R, double s_max, double tol = 1e-9);

// Conserved-quantity test for isotropic photon-sphere models: with
// u(r) = r / c(r), the quantity u(r) sin(angle(x, xi)) is constant along null
// geodesics, and a point is trapped exactly when r <= r_unstable and that
// quantity exceeds u(r_unstable).
bool photon_sphere_trapped(const SpacetimeMetric& m, const Vec3& x, const Vec3& xi);

// Plus-characteristic, Phi-normalized (tau = 1) samples of the trapped set,
// drawn as perturbations of the circular-orbit manifold and filtered by
// classify in both time directions.
std::vector<PhasePoint> sample_trapped_set(const SpacetimeMetric& m, int n,
                                           double s_max, std::uint64_t seed = 42);

void write_phase_points_csv(const std::vector<PhasePoint>& pts,
                            const std::string& path);

}  // namespace geoctrl
