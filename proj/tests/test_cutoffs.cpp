#include <initializer_list>
#include <cmath>

#include "doctest.h"
#include "geoctrl/cutoffs.hpp"

using namespace geoctrl;

namespace {

// central differences against the closed-form derivatives
double fd1(double (*f)(double, double, double, int), double r, double a, double b,
           double h) {
  return (f(r + h, a, b, 0) - f(r - h, a, b, 0)) / (2.0 * h);
}

}  // namespace

TEST_CASE("bump step hits its endpoints and midpoint") {
  CHECK(bump_step(-1.0) == 0.0);
  CHECK(bump_step(-2.5) == 0.0);
  CHECK(bump_step(1.0) == 1.0);
  CHECK(bump_step(3.0) == 1.0);
  CHECK(bump_step(0.0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(bump_step_d1(-1.0) == 0.0);
  CHECK(bump_step_d1(1.0) == 0.0);
  CHECK(bump_step_d2(-1.0) == 0.0);
  CHECK(bump_step_d2(1.0) == 0.0);
}

TEST_CASE("bump normalization constant") {
  CHECK(bump_step_norm() == doctest::Approx(0.44399381616807943782).epsilon(1e-11));
}

TEST_CASE("bump step is monotone and symmetric") {
  double prev = 0.0;
  for (int i = 0; i <= 200; ++i) {
    const double u = -1.0 + 2.0 * i / 200.0;
    const double v = bump_step(u);
    CHECK(v >= prev - 1e-15);
    CHECK(bump_step(-u) == doctest::Approx(1.0 - v).epsilon(1e-12));
    prev = v;
  }
}

TEST_CASE("bump step derivatives agree with finite differences") {
  for (double u : {-0.8, -0.3, 0.0, 0.4, 0.9}) {
    const double h = 1e-5;
    const double d1 = (bump_step(u + h) - bump_step(u - h)) / (2.0 * h);
    const double d2 =
        (bump_step(u + h) - 2.0 * bump_step(u) + bump_step(u - h)) / (h * h);
    CHECK(bump_step_d1(u) == doctest::Approx(d1).epsilon(1e-7));
    CHECK(bump_step_d2(u) == doctest::Approx(d2).epsilon(1e-5));
  }
}

TEST_CASE("radial cutoff sample values") {
  CHECK(chi_lt(1.25, 1.0) == doctest::Approx(0.87703271672267092191).epsilon(1e-10));
  CHECK(chi_lt(1.5, 1.0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(chi_lt(1.75, 1.0) == doctest::Approx(0.12296728327732907809).epsilon(1e-10));
  CHECK(chi_lt(1.25, 1.0, 1) ==
        doctest::Approx(-1.1873910334640280728).epsilon(1e-9));
  CHECK(chi_lt(1.5, 1.0, 1) ==
        doctest::Approx(-1.6571376797382103033).epsilon(1e-9));
  CHECK(chi_lt(1.25, 1.0, 2) ==
        doctest::Approx(-4.2218347856498775922).epsilon(1e-8));
}

TEST_CASE("chi_lt and chi_gt are complementary with the right supports") {
  for (double r : {0.0, 0.5, 1.0, 1.3, 1.8, 2.0, 5.0}) {
    CHECK(chi_lt(r, 1.0) + chi_gt(r, 1.0) ==
          doctest::Approx(1.0).epsilon(1e-12));  // both ramp on [R, 2R]
  }
  CHECK(chi_lt(1.0, 1.0) == 1.0);
  CHECK(chi_lt(2.0, 1.0) == 0.0);
  CHECK(chi_gt(1.0, 1.0) == 0.0);
  CHECK(chi_gt(2.0, 1.0) == 1.0);
  CHECK(chi_lt(3.0, 3.0) == 1.0);
  CHECK(chi_lt(6.0, 3.0) == 0.0);
}

TEST_CASE("step_up edges, monotonicity, derivative orders") {
  CHECK(step_up(0.2, 0.2, 0.9) == 0.0);
  CHECK(step_up(0.9, 0.2, 0.9) == 1.0);
  CHECK(step_up(0.0, 0.2, 0.9) == 0.0);
  CHECK(step_up(2.0, 0.2, 0.9) == 1.0);
  double prev = -1.0;
  for (int i = 0; i <= 50; ++i) {
    const double r = 0.2 + 0.7 * i / 50.0;
    const double v = step_up(r, 0.2, 0.9);
    CHECK(v >= prev - 1e-15);
    prev = v;
  }
  const double h = 1e-5;
  CHECK(step_up(0.5, 0.2, 0.9, 1) ==
        doctest::Approx(fd1(step_up, 0.5, 0.2, 0.9, h)).epsilon(1e-6));
  const double d2 = (step_up(0.5 + h, 0.2, 0.9) - 2 * step_up(0.5, 0.2, 0.9) +
                     step_up(0.5 - h, 0.2, 0.9)) /
                    (h * h);
  CHECK(step_up(0.5, 0.2, 0.9, 2) == doctest::Approx(d2).epsilon(1e-4));
}

TEST_CASE("plateau is one on the flat top and zero outside") {
  CHECK(plateau(1.0, 1.0, 2.0, 3.0, 4.0) == 0.0);
  CHECK(plateau(0.0, 1.0, 2.0, 3.0, 4.0) == 0.0);
  CHECK(plateau(2.0, 1.0, 2.0, 3.0, 4.0) == 1.0);
  CHECK(plateau(2.5, 1.0, 2.0, 3.0, 4.0) == 1.0);
  CHECK(plateau(3.0, 1.0, 2.0, 3.0, 4.0) == 1.0);
  CHECK(plateau(4.0, 1.0, 2.0, 3.0, 4.0) == 0.0);
  CHECK(plateau(5.0, 1.0, 2.0, 3.0, 4.0) == 0.0);
  CHECK(plateau(1.5, 1.0, 2.0, 3.0, 4.0) ==
        doctest::Approx(step_up(1.5, 1.0, 2.0)).epsilon(1e-12));
  CHECK(plateau(3.5, 1.0, 2.0, 3.0, 4.0) ==
        doctest::Approx(1.0 - step_up(3.5, 3.0, 4.0)).epsilon(1e-12));
  // derivative vanishes on the top, matches finite differences on the ramps
  CHECK(plateau(2.5, 1.0, 2.0, 3.0, 4.0, 1) == 0.0);
  const double h = 1e-5;
  const double d1 =
      (plateau(1.4 + h, 1.0, 2.0, 3.0, 4.0) - plateau(1.4 - h, 1.0, 2.0, 3.0, 4.0)) /
      (2.0 * h);
  CHECK(plateau(1.4, 1.0, 2.0, 3.0, 4.0, 1) == doctest::Approx(d1).epsilon(1e-6));
}

TEST_CASE("smooth cutoff wrapper matches the free functions") {
  const SmoothCutoff lt = SmoothCutoff::less_than(2.0);
  for (double r : {0.5, 2.2, 3.0, 3.7, 4.5}) {
    CHECK(cutoff_eval(lt, r) == doctest::Approx(chi_lt(r, 2.0)).epsilon(1e-14));
    CHECK(cutoff_deriv(lt, r, 1) == doctest::Approx(chi_lt(r, 2.0, 1)).epsilon(1e-14));
  }
  const SmoothCutoff gt = SmoothCutoff::greater_than(2.0);
  for (double r : {0.5, 2.2, 3.0, 3.7, 4.5}) {
    CHECK(cutoff_eval(gt, r) == doctest::Approx(chi_gt(r, 2.0)).epsilon(1e-14));
  }
  const SmoothCutoff iv = SmoothCutoff::interval(-1.0, 0.0, 1.0, 3.0);
  for (double r : {-2.0, -0.5, 0.5, 2.5, 4.0}) {
    CHECK(cutoff_eval(iv, r) ==
          doctest::Approx(plateau(r, -1.0, 0.0, 1.0, 3.0)).epsilon(1e-14));
    CHECK(cutoff_deriv(iv, r, 1) ==
          doctest::Approx(plateau(r, -1.0, 0.0, 1.0, 3.0, 1)).epsilon(1e-14));
  }
  const SmoothCutoff an = SmoothCutoff::annulus_at(4.0);
  CHECK(cutoff_eval(an, 1.9) == 0.0);   // below R/2
  CHECK(cutoff_eval(an, 3.0) == 1.0);   // inside the flat top
  CHECK(cutoff_eval(an, 4.1) == 0.0);   // beyond R
  CHECK(cutoff_eval(an, -3.0) == 1.0);  // even in r
}
