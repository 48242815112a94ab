#include "geoctrl/damping.hpp"

#include <cmath>

#include "geoctrl/cutoffs.hpp"

namespace geoctrl {

DampingProfile zero_damping() {
  DampingProfile d;
  d.name = "zero";
  d.a = [](double, const Vec3&) { return 0.0; };
  d.da = [](double, const Vec3&) { return Vec4::Zero().eval(); };
  return d;
}

DampingProfile constant_damping(double a0) {
  DampingProfile d;
  d.name = "constant";
  d.a = [a0](double, const Vec3&) { return a0; };
  d.da = [](double, const Vec3&) { return Vec4::Zero().eval(); };
  return d;
}

namespace {
double band_plateau(double r, int order) {
  return plateau(r, 0.9, 1.7, 3.1, 3.9, order);
}
}  // namespace

DampingProfile polar_gap_damping(double amp) {
  DampingProfile d;
  d.name = "polar_gap";
  d.a = [amp](double, const Vec3& x) {
    const double r = x.norm();
    if (r <= 0.9) return 0.0;
    const double rho2 = x[0] * x[0] + x[1] * x[1];
    return amp * band_plateau(r, 0) * (0.1 + 0.9 * rho2 / (r * r));
  };
  d.da = [amp](double, const Vec3& x) {
    Vec4 g = Vec4::Zero();
    const double r = x.norm();
    if (r <= 0.9) return g;
    const double r2 = r * r;
    const double rho2 = x[0] * x[0] + x[1] * x[1];
    const double P = band_plateau(r, 0);
    const double dP = band_plateau(r, 1);
    const double Q = 0.1 + 0.9 * rho2 / r2;
    const Vec3 xh = x / r;
    Vec3 dQ(2.0 * x[0] / r2, 2.0 * x[1] / r2, 0.0);
    dQ -= (2.0 * rho2 / (r2 * r2)) * x;
    dQ *= 0.9;
    g.tail<3>() = amp * (dP * Q * xh + P * dQ);
    return g;
  };
  return d;
}

DampingProfile band_bump_damping(double amp) {
  DampingProfile d;
  d.name = "band_bump";
  d.a = [amp](double, const Vec3& x) { return amp * band_plateau(x.norm(), 0); };
  d.da = [amp](double, const Vec3& x) {
    Vec4 g = Vec4::Zero();
    const double r = x.norm();
    if (r > 1e-12) g.tail<3>() = amp * band_plateau(r, 1) * (x / r);
    return g;
  };
  return d;
}

DampingProfile far_shell_damping(double amp) {
  DampingProfile d;
  d.name = "far_shell";
  d.a = [amp](double, const Vec3& x) {
    return amp * plateau(x.norm(), 8.0, 9.0, 10.0, 11.0, 0);
  };
  d.da = [amp](double, const Vec3& x) {
    Vec4 g = Vec4::Zero();
    const double r = x.norm();
    if (r > 1e-12)
      g.tail<3>() = amp * plateau(r, 8.0, 9.0, 10.0, 11.0, 1) * (x / r);
    return g;
  };
  return d;
}

DampingProfile time_ramp_damping() {
  DampingProfile d;
  d.name = "time_ramp";
  d.time_dependent = true;
  d.a = [](double t, const Vec3&) { return t > 0.0 ? t : 0.0; };
  d.da = [](double t, const Vec3&) {
    Vec4 g = Vec4::Zero();
    g[0] = t > 0.0 ? 1.0 : 0.0;
    return g;
  };
  return d;
}

DampingProfile cone_damping(double slope, const Vec3& x0) {
  DampingProfile d;
  d.name = "cone";
  d.a = [slope, x0](double, const Vec3& x) {
    return slope * std::sqrt(0.04 + (x - x0).squaredNorm());
  };
  d.da = [slope, x0](double, const Vec3& x) {
    Vec4 g = Vec4::Zero();
    const Vec3 y = x - x0;
    g.tail<3>() = slope * y / std::sqrt(0.04 + y.squaredNorm());
    return g;
  };
  return d;
}

DampingProfile inv_square_damping() {
  DampingProfile d;
  d.name = "inv_square";
  d.a = [](double, const Vec3& x) { return 1.0 / (1.0 + x.squaredNorm()); };
  d.da = [](double, const Vec3& x) {
    Vec4 g = Vec4::Zero();
    const double s = 1.0 + x.squaredNorm();
    g.tail<3>() = -2.0 * x / (s * s);
    return g;
  };
  return d;
}

DampingProfile ball_bump_damping(double a0, double R) {
  DampingProfile d;
  d.name = "ball_bump";
  d.a = [a0, R](double, const Vec3& x) { return a0 * chi_lt(x.norm(), R, 0); };
  d.da = [a0, R](double, const Vec3& x) {
    Vec4 g = Vec4::Zero();
    const double r = x.norm();
    if (r > 1e-12) g.tail<3>() = a0 * chi_lt(r, R, 1) * (x / r);
    return g;
  };
  return d;
}

DampingProfile with_kappa(const DampingProfile& d, double kappa) {
  DampingProfile out;
  out.name = d.name;
  out.kappa = d.kappa * kappa;
  out.time_dependent = d.time_dependent;
  auto a = d.a;
  auto da = d.da;
  out.a = [a, kappa](double t, const Vec3& x) { return kappa * a(t, x); };
  out.da = [da, kappa](double t, const Vec3& x) {
    return (kappa * da(t, x)).eval();
  };
  return out;
}

}  // namespace geoctrl
