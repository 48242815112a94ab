#include <initializer_list>
#include <cmath>

#include "doctest.h"
#include "geoctrl/errors.hpp"
#include "geoctrl/metrics.hpp"

using namespace geoctrl;

TEST_CASE("minkowski jet is exact") {
  const SpacetimeMetric m = minkowski_metric();
  const MetricJet J = m.jet(Vec3(0.3, -1.2, 2.0));
  CHECK(J.g(0, 0) == -1.0);
  for (int i = 1; i < 4; ++i) {
    CHECK(J.g(0, i) == 0.0);
    for (int j = 1; j < 4; ++j) CHECK(J.g(i, j) == (i == j ? 1.0 : 0.0));
  }
  for (const auto& D : J.dg) CHECK(D.norm() == 0.0);
  const MetricSecond S = m.second(Vec3(1.0, 0.0, -4.0));
  for (const auto& D : S) CHECK(D.norm() == 0.0);
  CHECK(max_wave_speed(m, Vec3(5.0, 0.0, 0.0)) == doctest::Approx(1.0));
}

TEST_CASE("photon sphere model matches its stored band data") {
  const SpacetimeMetric m = photon_sphere_metric();
  REQUIRE(m.has_photon_sphere);
  REQUIRE(bool(m.isotropic_c));

  CHECK(m.r_unstable == doctest::Approx(2.685493494844).epsilon(1e-9));
  CHECK(m.r_stable == doctest::Approx(2.285865229064).epsilon(1e-9));
  CHECK(m.u_min == doctest::Approx(1.906495299311).epsilon(1e-9));
  CHECK(m.u_max == doctest::Approx(1.942792730747).epsilon(1e-9));
  CHECK(m.band_lo == doctest::Approx(2.069113874762).epsilon(1e-9));

  auto u = [&](double r) { return r / m.isotropic_c(r); };
  CHECK(u(m.r_unstable) == doctest::Approx(m.u_min).epsilon(1e-10));
  CHECK(u(m.r_stable) == doctest::Approx(m.u_max).epsilon(1e-10));
  CHECK(u(m.band_lo) == doctest::Approx(m.u_min).epsilon(1e-8));
  CHECK(m.band_lo < m.r_stable);
  CHECK(m.r_stable < m.r_unstable);

  // critical radii solve r c'(r) = c(r): check via a centered difference
  for (double r : {m.r_unstable, m.r_stable}) {
    const double h = 1e-6;
    const double cp = (m.isotropic_c(r + h) - m.isotropic_c(r - h)) / (2.0 * h);
    CHECK(r * cp == doctest::Approx(m.isotropic_c(r)).epsilon(1e-5));
  }
}

TEST_CASE("photon sphere conformal factor spot values") {
  const SpacetimeMetric m = photon_sphere_metric();
  CHECK(m.isotropic_c(2.5) == doctest::Approx(1.300186520599202).epsilon(1e-12));

  // c'(2.5) recovered from the jet: d/dx1 g^{11} = 2 c c' at x = (2.5, 0, 0)
  const Vec3 x(2.5, 0.0, 0.0);
  const MetricJet J = m.jet(x);
  const double c = m.isotropic_c(2.5);
  CHECK(J.g(1, 1) == doctest::Approx(c * c).epsilon(1e-12));
  CHECK(J.g(0, 0) == doctest::Approx(-1.0));
  CHECK(J.g(0, 1) == 0.0);
  const double cp = J.dg[0](1, 1) / (2.0 * c);
  CHECK(cp == doctest::Approx(0.612625552243270).epsilon(1e-11));
  // transverse derivative of g^{11} vanishes only through the radial chain rule
  CHECK(J.dg[1](1, 1) == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("metric jets agree with finite differences of the components") {
  for (const SpacetimeMetric& m :
       {photon_sphere_metric(), drag_metric(), bump_test_metric()}) {
    const Vec3 x(1.1, -0.7, 2.3);
    const MetricJet J = m.jet(x);
    const double h = 1e-6;
    for (int k = 0; k < 3; ++k) {
      Vec3 xp = x, xm = x;
      xp[k] += h;
      xm[k] -= h;
      const Mat4 fd = (m.jet(xp).g - m.jet(xm).g) / (2.0 * h);
      CHECK((J.dg[k] - fd).norm() <= 1e-6);
    }
    // second derivatives against differences of first derivatives
    const MetricSecond S = m.second(x);
    for (int k = 0; k < 3; ++k)
      for (int l = k; l < 3; ++l) {
        Vec3 xp = x, xm = x;
        xp[l] += h;
        xm[l] -= h;
        const Mat4 fd = (m.jet(xp).dg[k] - m.jet(xm).dg[k]) / (2.0 * h);
        CHECK((S[second_index(k, l)] - fd).norm() <= 1e-5);
      }
  }
}

TEST_CASE("drag metric mixes time and angle the way it claims") {
  const SpacetimeMetric m = drag_metric(0.08, 2.0);
  const Vec3 x(0.7, -0.4, 0.3);
  const MetricJet J = m.jet(x);
  const double f = 0.08 * std::exp(-x.squaredNorm() / 4.0);
  CHECK(J.g(0, 1) == doctest::Approx(-f * x[1]).epsilon(1e-13));
  CHECK(J.g(0, 2) == doctest::Approx(f * x[0]).epsilon(1e-13));
  CHECK(J.g(0, 3) == doctest::Approx(0.0));
  CHECK(J.g(1, 0) == J.g(0, 1));
  CHECK(J.g(1, 1) == 1.0);
  CHECK(J.g(0, 0) == -1.0);
}

TEST_CASE("bump test metric is flat beyond its support") {
  const SpacetimeMetric m = bump_test_metric();
  for (double r : {4.0, 5.5, 9.0}) {
    const MetricJet J = m.jet(Vec3(r, 0.0, 0.0));
    CHECK(J.g(1, 1) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(J.dg[0].norm() <= 1e-14);
  }
  const MetricJet J = m.jet(Vec3(0.5, 0.0, 0.0));
  CHECK(J.g(1, 1) == doctest::Approx(1.69).epsilon(1e-12));  // c = 1.3 inside
}

TEST_CASE("wave speed picks up the conformal factor") {
  const SpacetimeMetric m = photon_sphere_metric();
  CHECK(max_wave_speed(m, Vec3(3.0, 0.0, 0.0)) ==
        doctest::Approx(m.isotropic_c(3.0)).epsilon(1e-12));
  CHECK(max_wave_speed(m, Vec3(0.0, 0.0, 100.0)) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("degenerate metrics are rejected") {
  for (const SpacetimeMetric& m :
       {minkowski_metric(), photon_sphere_metric(), drag_metric(), bump_test_metric()}) {
    CHECK_NOTHROW(check_metric_at(m, Vec3(0.1, -2.0, 1.5)));
    CHECK_NOTHROW(check_metric_at(m, Vec3(20.0, 0.0, 0.0)));
  }
  SpacetimeMetric bad = minkowski_metric();
  bad.jet = [](const Vec3&) {
    MetricJet J;
    J.g = Mat4::Identity();
    J.g(0, 0) = -1.0;
    J.g(1, 1) = -1.0;  // spatial block loses definiteness
    return J;
  };
  CHECK_THROWS_AS(check_metric_at(bad, Vec3::Zero()), DegenerateMetric);
  SpacetimeMetric bad2 = minkowski_metric();
  bad2.jet = [](const Vec3&) {
    MetricJet J;
    J.g = Mat4::Identity();  // g^{00} > 0
    return J;
  };
  CHECK_THROWS_AS(check_metric_at(bad2, Vec3::Zero()), DegenerateMetric);
}
