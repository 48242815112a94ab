#include "geoctrl/metrics.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "geoctrl/cutoffs.hpp"
#include "geoctrl/errors.hpp"

namespace geoctrl {
namespace {

// radial profile with value and two derivatives
struct RadialC {
  std::function<double(double)> c, dc, d2c;
};

// g^{00} = -1, g^{ij} = c(r)^2 delta.  Derivatives of c^2 are taken along
// x/r; the origin is left with zero derivative to avoid 0/0 (no sampling
// path evaluates derivatives exactly at r = 0).
SpacetimeMetric make_isotropic(std::string name, RadialC prof, double R0) {
  SpacetimeMetric m;
  m.name = std::move(name);
  m.R0 = R0;
  m.timelike_bound = 1.0;
  m.isotropic_c = prof.c;
  auto c = prof.c;
  auto dc = prof.dc;
  auto d2c = prof.d2c;
  m.jet = [c, dc](const Vec3& x) {
    MetricJet J;
    J.g(0, 0) = -1.0;
    const double r = x.norm();
    const double cv = c(r);
    J.g.block<3, 3>(1, 1) = cv * cv * Mat3::Identity();
    if (r > 1e-12) {
      const double s1 = 2.0 * cv * dc(r);
      const Vec3 xh = x / r;
      for (int k = 0; k < 3; ++k)
        J.dg[k].block<3, 3>(1, 1) = s1 * xh[k] * Mat3::Identity();
    }
    return J;
  };
  m.second = [c, dc, d2c](const Vec3& x) {
    MetricSecond S = {Mat4::Zero(), Mat4::Zero(), Mat4::Zero(),
                      Mat4::Zero(), Mat4::Zero(), Mat4::Zero()};
    const double r = x.norm();
    if (r <= 1e-12) return S;
    const double cv = c(r), d1 = dc(r), d2 = d2c(r);
    const double s1 = 2.0 * cv * d1;             // (c^2)'
    const double s2 = 2.0 * d1 * d1 + 2.0 * cv * d2;  // (c^2)''
    const Vec3 xh = x / r;
    for (int k = 0; k < 3; ++k)
      for (int l = k; l < 3; ++l) {
        const double del = (k == l) ? 1.0 : 0.0;
        const double m_kl = s2 * xh[k] * xh[l] + (s1 / r) * (del - xh[k] * xh[l]);
        S[second_index(k, l)].block<3, 3>(1, 1) = m_kl * Mat3::Identity();
      }
    return S;
  };
  return m;
}

double bisect(const std::function<double(double)>& f, double lo, double hi) {
  double flo = f(lo);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((flo < 0) == (fm < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

SpacetimeMetric minkowski_metric() {
  RadialC prof{[](double) { return 1.0; }, [](double) { return 0.0; },
               [](double) { return 0.0; }};
  return make_isotropic("minkowski", prof, 1.0);
}

SpacetimeMetric photon_sphere_metric(double A, double r_c, double w) {
  RadialC prof;
  prof.c = [A, r_c, w](double r) {
    const double u = (r - r_c) / w;
    return 1.0 + A * std::exp(-u * u);
  };
  prof.dc = [A, r_c, w](double r) {
    const double u = (r - r_c) / w;
    return A * std::exp(-u * u) * (-2.0 * u / w);
  };
  prof.d2c = [A, r_c, w](double r) {
    const double u = (r - r_c) / w;
    return A * std::exp(-u * u) * (4.0 * u * u - 2.0) / (w * w);
  };
  SpacetimeMetric m = make_isotropic("photon_sphere", prof, 6.1);

  // roots of r c'(r) = c(r); between them r/c(r) turns from a local max to a
  // local min, which brackets the trapped band of null geodesics
  auto F = [&prof](double r) { return r * prof.dc(r) - prof.c(r); };
  const int n = 4000;
  double roots[2] = {0, 0};
  int found = 0;
  double prev = F(0.05);
  for (int i = 1; i <= n && found < 2; ++i) {
    const double r = 0.05 + (r_c - 0.05) * double(i) / n;
    const double cur = F(r);
    if ((prev < 0) != (cur < 0)) {
      const double a = 0.05 + (r_c - 0.05) * double(i - 1) / n;
      roots[found++] = bisect(F, a, r);
    }
    prev = cur;
  }
  if (found == 2) {
    m.has_photon_sphere = true;
    m.r_stable = roots[0];
    m.r_unstable = roots[1];
    auto u_of = [&prof](double r) { return r / prof.c(r); };
    m.u_max = u_of(m.r_stable);
    m.u_min = u_of(m.r_unstable);
    m.band_lo = bisect([&](double r) { return u_of(r) - m.u_min; }, 0.3, m.r_stable);
  }
  return m;
}

SpacetimeMetric drag_metric(double eps, double w) {
  SpacetimeMetric m;
  m.name = "drag";
  m.R0 = 4.0;
  m.timelike_bound = 1.0;
  m.isotropic_c = [](double) { return 1.0; };
  const double w2 = w * w;
  // v(x) = (-x2, x1, 0); Dv[j][k] = d v_j / d x_k
  static const double Dv[3][3] = {{0, -1, 0}, {1, 0, 0}, {0, 0, 0}};
  m.jet = [eps, w2](const Vec3& x) {
    MetricJet J;
    J.g(0, 0) = -1.0;
    J.g.block<3, 3>(1, 1) = Mat3::Identity();
    const double phi = eps * std::exp(-x.squaredNorm() / w2);
    const Vec3 v(-x[1], x[0], 0.0);
    for (int j = 0; j < 3; ++j) {
      J.g(0, 1 + j) = phi * v[j];
      J.g(1 + j, 0) = phi * v[j];
    }
    for (int k = 0; k < 3; ++k) {
      const double dphi = phi * (-2.0 * x[k] / w2);
      for (int j = 0; j < 3; ++j) {
        const double d = dphi * v[j] + phi * Dv[j][k];
        J.dg[k](0, 1 + j) = d;
        J.dg[k](1 + j, 0) = d;
      }
    }
    return J;
  };
  m.second = [eps, w2](const Vec3& x) {
    MetricSecond S = {Mat4::Zero(), Mat4::Zero(), Mat4::Zero(),
                      Mat4::Zero(), Mat4::Zero(), Mat4::Zero()};
    const double phi = eps * std::exp(-x.squaredNorm() / w2);
    const Vec3 v(-x[1], x[0], 0.0);
    for (int k = 0; k < 3; ++k)
      for (int l = k; l < 3; ++l) {
        const double del = (k == l) ? 1.0 : 0.0;
        const double pkl = phi * (4.0 * x[k] * x[l] / (w2 * w2) - 2.0 * del / w2);
        const double pk = phi * (-2.0 * x[k] / w2);
        const double pl = phi * (-2.0 * x[l] / w2);
        for (int j = 0; j < 3; ++j) {
          const double d = pkl * v[j] + pk * Dv[j][l] + pl * Dv[j][k];
          S[second_index(k, l)](0, 1 + j) = d;
          S[second_index(k, l)](1 + j, 0) = d;
        }
      }
    return S;
  };
  return m;
}

SpacetimeMetric bump_test_metric() {
  RadialC prof;
  prof.c = [](double r) { return 1.0 + 0.3 * chi_lt(r, 2.0, 0); };
  prof.dc = [](double r) { return 0.3 * chi_lt(r, 2.0, 1); };
  prof.d2c = [](double r) { return 0.3 * chi_lt(r, 2.0, 2); };
  return make_isotropic("bump_test", prof, 4.5);
}

double max_wave_speed(const SpacetimeMetric& m, const Vec3& x) {
  const Mat3 gs = m.jet(x).g.block<3, 3>(1, 1);
  Eigen::SelfAdjointEigenSolver<Mat3> es(gs, Eigen::EigenvaluesOnly);
  return std::sqrt(es.eigenvalues().maxCoeff());
}

void check_metric_at(const SpacetimeMetric& m, const Vec3& x) {
  const MetricJet J = m.jet(x);
  if (!J.g.allFinite()) throw NonFiniteSample("metric not finite at sample");
  if (J.g(0, 0) >= 0.0)
    throw DegenerateMetric("g^{00} >= 0 at sample");
  Eigen::LLT<Mat3> llt(J.g.block<3, 3>(1, 1));
  if (llt.info() != Eigen::Success)
    throw DegenerateMetric("spatial block not positive definite");
}

}  // namespace geoctrl
