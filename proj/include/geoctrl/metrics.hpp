#pragma once

#include <array>
#include <functional>
#include <string>

#include "geoctrl/types.hpp"

namespace geoctrl {

// Inverse-metric components g^{alpha beta} at a spatial point together with
// their first spatial derivatives.  Index 0 is time; dg[k] = d/dx_k of g.
struct MetricJet {
  Mat4 g = Mat4::Zero();
  std::array<Mat4, 3> dg = {Mat4::Zero(), Mat4::Zero(), Mat4::Zero()};
};

// Second spatial derivatives in upper-triangular order
// (xx, xy, xz, yy, yz, zz).
using MetricSecond = std::array<Mat4, 6>;

inline int second_index(int k, int l) {
  if (k > l) std::swap(k, l);
  static const int base[3] = {0, 3, 5};
  return base[k] + (l - k);
}

// Stationary inverse metric with analytic derivative closures.  Components
// depend on x only; g^{00} < 0 and the spatial block is positive definite on
// the sampling domains of every built-in model.
struct SpacetimeMetric {
  std::string name;
  double R0 = 2.0;              // radius beyond which the model is AF-small
  double timelike_bound = 1.0;  // C with g^{00} <= -1/C
  std::function<MetricJet(const Vec3&)> jet;
  std::function<MetricSecond(const Vec3&)> second;

  // conformal factor for models of the form g^{ij} = c(r)^2 delta^{ij}
  std::function<double(double)> isotropic_c;

  // photon-sphere data for models with a trapped set (see trapping/escape)
  bool has_photon_sphere = false;
  double r_unstable = 0.0;  // root of r c'(r) = c(r) where r/c has a local min
  double r_stable = 0.0;    // root where r/c has a local max
  double u_min = 0.0;       // (r/c)(r_unstable)
  double u_max = 0.0;       // (r/c)(r_stable)
  double band_lo = 0.0;     // inner radius of the trapped band
};

SpacetimeMetric minkowski_metric();

// g^{00} = -1, g^{0j} = 0, g^{ij} = c(r)^2 delta with
// c(r) = 1 + A exp(-(r - r_c)^2 / w^2).  The default amplitude produces two
// roots of r c'(r) = c(r) and hence a genuine trapped band.
SpacetimeMetric photon_sphere_metric(double A = 0.5, double r_c = 3.0, double w = 0.7);

// Stationary frame-drag model: g^{00} = -1, g^{ij} = delta,
// g^{0j}(x) = eps * exp(-|x|^2 / w^2) * (-x2, x1, 0).
SpacetimeMetric drag_metric(double eps = 0.08, double w = 2.0);

// Compactly supported spatial bump: c = 1 + 0.3 chi_{<2}(r), so c - 1
// vanishes for r >= 4.
SpacetimeMetric bump_test_metric();

// Largest wave speed sqrt(lambda_max(g^{ij})) at x.
double max_wave_speed(const SpacetimeMetric& m, const Vec3& x);

// Throws DegenerateMetric unless g^{00}(x) < 0 and the spatial block is
// positive definite.
void check_metric_at(const SpacetimeMetric& m, const Vec3& x);

}  // namespace geoctrl
