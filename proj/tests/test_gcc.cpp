#include <initializer_list>
#include <cmath>

#include "doctest.h"
#include "geoctrl/damping.hpp"
#include "geoctrl/errors.hpp"
#include "geoctrl/flow.hpp"
#include "geoctrl/gcc.hpp"
#include "geoctrl/halfwave.hpp"
#include "geoctrl/metrics.hpp"
#include "geoctrl/trapping.hpp"

using namespace geoctrl;

namespace {

const SpacetimeMetric& photon() {
  static const SpacetimeMetric m = photon_sphere_metric();
  return m;
}

const std::vector<PhasePoint>& trapped32() {
  static const auto pts = sample_trapped_set(photon(), 32, 60.0, 42);
  return pts;
}

}  // namespace

TEST_CASE("damping that covers the trapped band passes") {
  const GccReport rep = tgcc_check(photon(), band_bump_damping(), trapped32(), 3.5, 0.01);
  CHECK(rep.passed);
  CHECK(rep.Cbar_est >= 0.01);
  CHECK(rep.Cbar2 == doctest::Approx(0.5 * rep.Cbar_est));
  CHECK(rep.averages.size() == trapped32().size());
}

TEST_CASE("damping disjoint from the trapped set fails with zero average") {
  const GccReport rep = tgcc_check(photon(), far_shell_damping(), trapped32(), 3.5, 0.01);
  CHECK_FALSE(rep.passed);
  CHECK(rep.Cbar_est <= 1e-12);
}

TEST_CASE("the polar gap scenario clears its pinned constant") {
  const GccReport rep = tgcc_check(photon(), polar_gap_damping(), trapped32(), 3.5, 0.01);
  CHECK(rep.passed);
  // 0.16322 is the frozen two-sided constant used by the escape construction
  CHECK(rep.Cbar2 >= 0.16322 - 1e-9);
}

TEST_CASE("averages of constant damping are exact") {
  const auto& w = trapped32().front();
  const Trajectory traj = integrate_flow(photon(), w, FlowBranch::plus, {-6.0, 6.0});
  const DampingProfile a = constant_damping(0.37);
  for (double T : {1.0, 4.0}) {
    CHECK(damping_average(traj, a, T, AverageSide::two_sided) ==
          doctest::Approx(0.37).epsilon(1e-9));
    CHECK(damping_average(traj, a, T, AverageSide::forward) ==
          doctest::Approx(0.37).epsilon(1e-9));
    CHECK(damping_average(traj, a, T, AverageSide::backward) ==
          doctest::Approx(0.37).epsilon(1e-9));
  }
}

TEST_CASE("averaging beyond the integrated span is refused") {
  const auto& w = trapped32().front();
  const Trajectory traj = integrate_flow(photon(), w, FlowBranch::plus, {-1.0, 1.0});
  CHECK_THROWS_AS(damping_average(traj, constant_damping(1.0), 2.0, AverageSide::two_sided),
                  SpanTooShort);
}

TEST_CASE("first control time of a linear ramp") {
  // a(t) = max(t, 0) along a unit-time-speed trajectory gives running average
  // T/2, which first reaches Cbar2 = 1 at T = 2, where a = 2
  const SpacetimeMetric m = minkowski_metric();
  const PhasePoint w{0.0, Vec3(50.0, 0.0, 0.0), 1.0, Vec3(1.0, 0.0, 0.0)};
  const Trajectory traj = integrate_flow(m, w, FlowBranch::plus, {0.0, 10.0});
  const auto [T_omega, a_at] =
      first_control_time(traj, time_ramp_damping(), 1.0, AverageSide::forward);
  CHECK(T_omega == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(a_at == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("no control time when the average stays below target") {
  const SpacetimeMetric m = minkowski_metric();
  const PhasePoint w{0.0, Vec3(50.0, 0.0, 0.0), 1.0, Vec3(1.0, 0.0, 0.0)};
  const Trajectory traj = integrate_flow(m, w, FlowBranch::plus, {0.0, 5.0});
  CHECK_THROWS_AS(first_control_time(traj, zero_damping(), 0.5, AverageSide::forward),
                  NoControl);
}

TEST_CASE("stationary equivalence of the time-dependent criterion") {
  const auto band = stationary_gcc_equiv(photon(), band_bump_damping(), trapped32(), 30.0);
  CHECK(band.first == band.second);
  CHECK(band.first);
  const auto shell = stationary_gcc_equiv(photon(), far_shell_damping(), trapped32(), 30.0);
  CHECK(shell.first == shell.second);
  CHECK_FALSE(shell.first);
}

TEST_CASE("rescaled damping and metric flow correspondence") {
  const double kappa = 2.0;
  const auto [a2, m2] = kappa_rescale(band_bump_damping(), photon(), kappa);
  CHECK(a2.kappa == kappa);

  const Vec3 x0(2.9, 0.4, 0.0);
  const Vec3 xi0(0.1, 0.9, 0.2);
  const PhasePoint w = project_to_char(photon(), 0.0, x0, xi0, Branch::plus);
  const Trajectory orig = integrate_flow(photon(), w, FlowBranch::plus, {0.0, 3.0}, 1e-11);

  const PhasePoint w2{0.0, x0 / kappa, w.tau, w.xi};
  CHECK(b_pm(m2, w2.x, w2.xi, Branch::plus) ==
        doctest::Approx(w.tau).epsilon(1e-12));
  const Trajectory resc = integrate_flow(m2, w2, FlowBranch::plus, {0.0, 3.0}, 1e-11);

  // the rescaled flow covers the shrunk path at kappa times the rate:
  // resc(s / kappa) = (t/kappa, x/kappa, tau, xi) of orig(s)
  for (double s : {0.8, 1.7, 2.6}) {
    const PhasePoint p = orig.at(s);
    const PhasePoint q = resc.at(s / kappa);
    CHECK((q.x - p.x / kappa).norm() <= 1e-7);
    CHECK((q.xi - p.xi).norm() <= 1e-7);
    CHECK(q.t == doctest::Approx(p.t / kappa).epsilon(1e-7));
    // the rescaled damping sees the original value at the matched point
    CHECK(a2.a(q.t, q.x) == doctest::Approx(band_bump_damping().a(p.t, p.x)).epsilon(1e-7));
  }
}
