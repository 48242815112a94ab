#pragma once

#include <cmath>

namespace geoctrl {

/*
 * Smooth transition profiles built from the normalized bump integral
 *
 *   S(u) = (1/I0) * \int_{-1}^{u} exp(-1/(1-s^2)) ds,   I0 = \int_{-1}^{1} exp(-1/(1-s^2)) ds,
 *
 * so S is C^infinity, S == 0 for u <= -1, S == 1 for u >= 1, and S is strictly
 * increasing in between.  Values of S come from a precomputed cubic Hermite
 * table (the integrand supplies exact knot derivatives); S' and S'' are
 * evaluated in closed form.
 */
double bump_step(double u);
double bump_step_d1(double u);
double bump_step_d2(double u);

// Normalization constant I0 above.
double bump_step_norm();

// 0 for r <= lo, 1 for r >= hi, monotone smooth in between.
double step_up(double r, double lo, double hi, int order = 0);

// 1 on [b,c], 0 outside (a,d); requires a < b <= c < d.
double plateau(double r, double a, double b, double c, double d, int order = 0);

// chi_{<R}: 1 for |r| <= R, 0 for |r| >= 2R.  chi_{>R} = 1 - chi_{<R} exactly.
double chi_lt(double r, double R, int order = 0);
double chi_gt(double r, double R, int order = 0);

struct SmoothCutoff {
  enum class Kind { radial_lt, radial_gt, annular, interval };
  Kind kind = Kind::radial_lt;
  double R = 1.0;
  // interval knots: 0 outside (a,d), 1 on [b,c]
  double a = 0.0, b = 0.0, c = 0.0, d = 0.0;

  static SmoothCutoff less_than(double R) { return {Kind::radial_lt, R, 0, 0, 0, 0}; }
  static SmoothCutoff greater_than(double R) { return {Kind::radial_gt, R, 0, 0, 0, 0}; }
  static SmoothCutoff annulus_at(double R) { return {Kind::annular, R, 0, 0, 0, 0}; }
  static SmoothCutoff interval(double a, double b, double c, double d) {
    return {Kind::interval, 0.0, a, b, c, d};
  }
};

double cutoff_eval(const SmoothCutoff& c, double r);
double cutoff_deriv(const SmoothCutoff& c, double r, int order);

}  // namespace geoctrl
