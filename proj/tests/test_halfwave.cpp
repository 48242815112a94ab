#include <initializer_list>
#include <cmath>
#include <random>

#include "doctest.h"
#include "geoctrl/errors.hpp"
#include "geoctrl/halfwave.hpp"
#include "geoctrl/metrics.hpp"

using namespace geoctrl;

namespace {

Vec3 rand_vec(std::mt19937_64& rng, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  return Vec3(u(rng), u(rng), u(rng));
}

}  // namespace

TEST_CASE("tau roots factor the principal symbol") {
  std::mt19937_64 rng(2024);
  for (const SpacetimeMetric& m :
       {minkowski_metric(), photon_sphere_metric(), drag_metric(), bump_test_metric()}) {
    for (int i = 0; i < 2000; ++i) {
      const Vec3 x = rand_vec(rng, 8.0);
      Vec3 xi = rand_vec(rng, 3.0);
      if (xi.norm() < 1e-3) xi = Vec3(1.0, 0.0, 0.0);
      const double bp = b_pm(m, x, xi, Branch::plus);
      const double bm = b_pm(m, x, xi, Branch::minus);
      CHECK(bp > 0.0);
      CHECK(bm < 0.0);
      const double g00 = m.jet(x).g(0, 0);
      std::uniform_real_distribution<double> ut(-4.0, 4.0);
      const double tau = ut(rng);
      const PhasePoint w{0.0, x, tau, xi};
      const double p = principal_symbol(m, w);
      const double factored = g00 * (tau - bp) * (tau - bm);
      CHECK(std::abs(p - factored) <= 1e-10 * (tau * tau + xi.squaredNorm()));
    }
  }
}

TEST_CASE("frame drag spot values") {
  const SpacetimeMetric m = drag_metric();
  const Vec3 x(0.7, -0.4, 0.3);
  const Vec3 xi(0.2, 0.5, -0.8);
  CHECK(b_pm(m, x, xi, Branch::plus) ==
        doctest::Approx(0.99337876599821127686).epsilon(1e-13));
  CHECK(b_pm(m, x, xi, Branch::minus) ==
        doctest::Approx(-0.93619879126918503152).epsilon(1e-13));

  const SymbolJet J = b_jet(m, x, xi, Branch::plus);
  CHECK(J.b == doctest::Approx(0.99337876599821127686).epsilon(1e-13));
  const Vec3 bx_ref(0.0239262874929184233, -0.00780428261571588056,
                    -0.0044155809536287219);
  const Vec3 bxi_ref(0.234682707912223721, 0.566169183949728039,
                     -0.829197040551128141);
  CHECK((J.bx - bx_ref).norm() <= 1e-12);
  CHECK((J.bxi - bxi_ref).norm() <= 1e-12);

  CHECK(b_pm(m, Vec3(2.0, 1.0, -0.5), Vec3(-0.3, 0.4, 0.1), Branch::plus) ==
        doctest::Approx(0.53413661340798793924).epsilon(1e-13));
}

TEST_CASE("photon sphere spot value") {
  const SpacetimeMetric m = photon_sphere_metric();
  CHECK(b_pm(m, Vec3(1.5, -1.0, 2.0), Vec3(0.3, 0.7, -0.2), Branch::plus) ==
        doctest::Approx(1.112042343769734).epsilon(1e-12));
}

TEST_CASE("mirror symmetry and homogeneity of the roots") {
  std::mt19937_64 rng(7);
  const SpacetimeMetric m = drag_metric();
  for (int i = 0; i < 200; ++i) {
    const Vec3 x = rand_vec(rng, 5.0);
    Vec3 xi = rand_vec(rng, 2.0);
    if (xi.norm() < 1e-3) continue;
    const double bp = b_pm(m, x, xi, Branch::plus);
    CHECK(b_pm(m, x, -xi, Branch::minus) == doctest::Approx(-bp).epsilon(1e-14));
    for (double lam : {0.5, 2.0, 5.0}) {
      CHECK(b_pm(m, x, lam * xi, Branch::plus) ==
            doctest::Approx(lam * bp).epsilon(1e-13));
    }
  }
}

TEST_CASE("symbol gradients match finite differences") {
  std::mt19937_64 rng(11);
  for (const SpacetimeMetric& m : {photon_sphere_metric(), drag_metric()}) {
    for (int i = 0; i < 40; ++i) {
      const Vec3 x = rand_vec(rng, 4.0);
      Vec3 xi = rand_vec(rng, 2.0);
      if (xi.norm() < 0.1) xi = Vec3(0.0, 1.0, 0.4);
      const SymbolJet J = b_jet(m, x, xi, Branch::plus);
      const double h = 1e-6;
      for (int k = 0; k < 3; ++k) {
        Vec3 xp = x, xm = x;
        xp[k] += h;
        xm[k] -= h;
        const double fd =
            (b_pm(m, xp, xi, Branch::plus) - b_pm(m, xm, xi, Branch::plus)) /
            (2.0 * h);
        CHECK(J.bx[k] == doctest::Approx(fd).epsilon(1e-5));
        Vec3 qp = xi, qm = xi;
        qp[k] += h;
        qm[k] -= h;
        const double fdx =
            (b_pm(m, x, qp, Branch::plus) - b_pm(m, x, qm, Branch::plus)) /
            (2.0 * h);
        CHECK(J.bxi[k] == doctest::Approx(fdx).epsilon(1e-5));
      }
    }
  }
}

TEST_CASE("symbol hessian is symmetric and matches jet differences") {
  const SpacetimeMetric m = drag_metric();
  const Vec3 x(1.2, -0.3, 0.8);
  const Vec3 xi(0.4, -0.9, 0.5);
  const Mat6 H = b_hessian(m, x, xi, Branch::plus);
  CHECK((H - H.transpose()).norm() <= 1e-10 * (1.0 + H.norm()));

  const double h = 1e-6;
  for (int col = 0; col < 6; ++col) {
    Vec3 xp = x, xm = x, qp = xi, qm = xi;
    if (col < 3) {
      xp[col] += h;
      xm[col] -= h;
    } else {
      qp[col - 3] += h;
      qm[col - 3] -= h;
    }
    const SymbolJet Jp = b_jet(m, xp, qp, Branch::plus);
    const SymbolJet Jm = b_jet(m, xm, qm, Branch::plus);
    for (int row = 0; row < 3; ++row) {
      CHECK(H(row, col) ==
            doctest::Approx((Jp.bx[row] - Jm.bx[row]) / (2.0 * h)).epsilon(2e-4));
      CHECK(H(row + 3, col) ==
            doctest::Approx((Jp.bxi[row] - Jm.bxi[row]) / (2.0 * h)).epsilon(2e-4));
    }
  }
}

TEST_CASE("characteristic helpers") {
  const SpacetimeMetric m = photon_sphere_metric();
  const Vec3 x(2.0, 1.0, -0.5);
  const Vec3 xi(0.3, -0.8, 0.4);

  const PhasePoint on_char = project_to_char(m, 1.5, x, xi, Branch::plus);
  CHECK(on_char.tau == doctest::Approx(b_pm(m, x, xi, Branch::plus)).epsilon(1e-14));
  CHECK(std::abs(principal_symbol(m, on_char)) <= 1e-12 * xi.squaredNorm());
  CHECK(char_branch(m, on_char) == CharBranch::plus);

  const PhasePoint off{0.0, x, 10.0 * xi.norm(), xi};
  CHECK(char_branch(m, off) == CharBranch::none);

  const PhasePoint minus_char = project_to_char(m, 0.0, x, xi, Branch::minus);
  CHECK(char_branch(m, minus_char) == CharBranch::minus);

  const PhasePoint scaled = phi_rescale(m, on_char, Branch::plus);
  CHECK(scaled.tau == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(b_pm(m, scaled.x, scaled.xi, Branch::plus) ==
        doctest::Approx(1.0).epsilon(1e-13));
  CHECK(scaled.t == on_char.t);
  CHECK((scaled.x - on_char.x).norm() == 0.0);
}

TEST_CASE("degenerate spatial blocks are refused") {
  SpacetimeMetric bad = minkowski_metric();
  bad.jet = [](const Vec3&) {
    MetricJet J;
    J.g = Mat4::Identity();
    J.g(0, 0) = -1.0;
    J.g(1, 1) = -1.0;
    return J;
  };
  CHECK_THROWS_AS(b_pm(bad, Vec3::Zero(), Vec3(1.0, 0.0, 0.0), Branch::plus),
                  DegenerateMetric);
}
