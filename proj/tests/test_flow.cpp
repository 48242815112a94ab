#include <initializer_list>
#include <cmath>
#include <random>

#include "doctest.h"
#include "geoctrl/flow.hpp"
#include "geoctrl/halfwave.hpp"
#include "geoctrl/metrics.hpp"

using namespace geoctrl;

TEST_CASE("flat space characteristics are straight lines") {
  const SpacetimeMetric m = minkowski_metric();
  const Vec3 x0(0.0, 1.0, -2.0);
  const Vec3 xi0(1.0, 0.0, 0.0);

  // full p with tau = 1, |xi| = 1: dt/ds = -2, dx/ds = 2 xi
  const PhasePoint w{0.0, x0, 1.0, xi0};
  const Trajectory traj = integrate_flow(m, w, FlowBranch::full_p, {-3.0, 3.0});
  for (double s : {-2.4, -0.7, 0.0, 1.3, 2.9}) {
    const PhasePoint p = traj.at(s);
    CHECK(p.t == doctest::Approx(-2.0 * s).epsilon(1e-9));
    CHECK((p.x - (x0 + 2.0 * s * xi0)).norm() <= 1e-9);
    CHECK(p.tau == doctest::Approx(1.0).epsilon(1e-12));
    CHECK((p.xi - xi0).norm() <= 1e-12);
  }

  // half-wave: unit time speed, spatial drift against the fiber direction
  const Vec3 xi1(0.0, 3.0, 4.0);
  const PhasePoint wh{0.0, x0, 5.0, xi1};
  const Trajectory th = integrate_flow(m, wh, FlowBranch::plus, {0.0, 4.0});
  const Vec3 dir = xi1.normalized();
  for (double s : {0.5, 2.0, 3.7}) {
    const PhasePoint p = th.at(s);
    CHECK(p.t == doctest::Approx(s).epsilon(1e-10));
    CHECK((p.x - (x0 - s * dir)).norm() <= 1e-9);
  }
}

TEST_CASE("tau and the symbol are conserved along long arcs") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (const SpacetimeMetric& m : {photon_sphere_metric(), drag_metric()}) {
    for (int i = 0; i < 6; ++i) {
      const Vec3 x0(3.0 * u(rng), 3.0 * u(rng), 3.0 * u(rng));
      Vec3 dir(u(rng), u(rng), u(rng));
      if (dir.norm() < 0.1) dir = Vec3(1.0, 0.0, 0.0);
      const PhasePoint w = project_to_char(m, 0.0, x0, dir.normalized(), Branch::plus);
      const Trajectory traj = integrate_flow(m, w, FlowBranch::full_p, {0.0, 100.0});
      const double scale = w.tau * w.tau + w.xi.squaredNorm();
      for (const auto& [s, p] : traj.nodes) {
        CHECK(std::abs(p.tau - w.tau) <= 1e-7);
        CHECK(std::abs(principal_symbol(m, p)) <= 1e-7 * scale);
      }
    }
  }
}

TEST_CASE("fiber scaling symmetry of the half-wave flow") {
  const SpacetimeMetric photon = photon_sphere_metric();
  const SpacetimeMetric drag = drag_metric();
  for (double lam : {0.5, 2.0, 5.0}) {
    CHECK(scaling_check(photon, {0.0, Vec3(2.7, 0.0, 0.0), 1.0, Vec3(0.0, 0.4, 0.0)},
                        Branch::plus, lam, {-5.0, 5.0}) <= 1e-6);
    CHECK(scaling_check(drag, {0.0, Vec3(1.0, -0.5, 0.3), 1.0, Vec3(0.6, 0.1, -0.2)},
                        Branch::plus, lam, {-5.0, 5.0}) <= 1e-6);
  }
}

TEST_CASE("full flow reparameterizes onto the half-wave flow") {
  const SpacetimeMetric m = photon_sphere_metric();
  // near-circular orbit seed inside the trapped band
  const Vec3 x_trap(m.r_unstable, 0.0, 0.0);
  const Vec3 dir_trap(0.0, 1.0, 0.0);
  const PhasePoint w_trap = project_to_char(m, 0.0, x_trap, dir_trap, Branch::plus);
  CHECK(reparam_match(m, w_trap, {0.0, 8.0}) <= 1e-5);

  // radially escaping seed
  const PhasePoint w_esc =
      project_to_char(m, 0.0, Vec3(4.0, 1.0, 0.0), Vec3(0.9, 0.2, 0.1), Branch::plus);
  CHECK(reparam_match(m, w_esc, {0.0, 8.0}) <= 1e-5);
}

TEST_CASE("radial convexity along flat and asymptotically flat arcs") {
  const SpacetimeMetric flat = minkowski_metric();
  const PhasePoint w{0.0, Vec3(1.0, 2.0, 0.0), 1.0, Vec3(0.0, 0.7, 0.7)};
  const Trajectory tf = integrate_flow(flat, w, FlowBranch::plus, {0.0, 20.0});
  const auto flat_vals = radial_convexity(flat, tf, 0.0);
  REQUIRE(!flat_vals.empty());
  for (const auto& [s, v] : flat_vals) CHECK(v == doctest::Approx(2.0).epsilon(1e-8));

  const SpacetimeMetric m = photon_sphere_metric();
  const PhasePoint wp =
      project_to_char(m, 0.0, Vec3(6.5, 0.0, 0.0), Vec3(1.0, 0.3, 0.0), Branch::plus);
  const Trajectory tp = integrate_flow(m, wp, FlowBranch::plus, {0.0, 40.0});
  const auto vals = radial_convexity(m, tp, m.R0);
  REQUIRE(!vals.empty());
  for (const auto& [s, v] : vals) CHECK(v >= 0.1);
}

TEST_CASE("trajectory endpoints and node bookkeeping") {
  const SpacetimeMetric m = drag_metric();
  const PhasePoint w =
      project_to_char(m, 0.0, Vec3(0.5, 0.5, 0.0), Vec3(0.2, -0.4, 1.0), Branch::plus);
  const Trajectory traj = integrate_flow(m, w, FlowBranch::plus, {-2.0, 3.0});
  CHECK(traj.span.lo == -2.0);
  CHECK(traj.span.hi == 3.0);
  const PhasePoint a = traj.at(0.0);
  CHECK((a.x - w.x).norm() <= 1e-12);
  CHECK(a.tau == doctest::Approx(w.tau).epsilon(1e-12));
  REQUIRE(!traj.nodes.empty());
  CHECK(traj.nodes.front().first <= -2.0 + 1e-12);
  CHECK(traj.nodes.back().first >= 3.0 - 1e-12);
  // nodes are consistent with dense evaluation
  for (const auto& [s, p] : traj.nodes) {
    const PhasePoint q = traj.at(s);
    CHECK((q.x - p.x).norm() <= 1e-10);
    CHECK(std::abs(q.t - p.t) <= 1e-10);
  }
}
