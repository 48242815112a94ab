#pragma once

#include <functional>
#include <string>

#include "geoctrl/types.hpp"

namespace geoctrl {

// Nonnegative damping coefficient a(t,x) with its space-time gradient
// (dt, dx1, dx2, dx3).  kappa is the rescaling parameter carried along by
// the control-condition machinery; the raw profile always has kappa = 1.
struct DampingProfile {
  std::string name;
  double kappa = 1.0;
  bool time_dependent = false;
  std::function<double(double, const Vec3&)> a;
  std::function<Vec4(double, const Vec3&)> da;
};

DampingProfile zero_damping();
DampingProfile constant_damping(double a0);

// a(x) = amp * P(r) * (0.1 + 0.9 (x1^2+x2^2)/r^2) with P a radial plateau on
// [0.9, 3.9] that is 1 on [1.7, 3.1].  Covers the trapped band of the
// photon-sphere model but is weak near the poles.
DampingProfile polar_gap_damping(double amp = 0.6);

// a(x) = amp * P(r), the same radial plateau without angular modulation.
DampingProfile band_bump_damping(double amp = 0.6);

// a(x) = amp * plateau(r; 8, 9, 10, 11): a shell disjoint from the trapped
// band, so trapped trajectories never meet it.
DampingProfile far_shell_damping(double amp = 0.6);

// a(t,x) = max(t, 0), spatially constant.
DampingProfile time_ramp_damping();

// a(x) = slope * sqrt(0.04 + |x - x0|^2).
DampingProfile cone_damping(double slope, const Vec3& x0);

// a(x) = <x>^{-2}.
DampingProfile inv_square_damping();

// a(x) = a0 * chi_{<R}(|x|).
DampingProfile ball_bump_damping(double a0, double R);

DampingProfile with_kappa(const DampingProfile& d, double kappa);

}  // namespace geoctrl
