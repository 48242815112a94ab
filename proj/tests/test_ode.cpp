#include <cmath>

#include "doctest.h"
#include "geoctrl/errors.hpp"
#include "geoctrl/ode.hpp"

using namespace geoctrl;

using Vec1 = Eigen::Matrix<double, 1, 1>;
using Vec2 = Eigen::Matrix<double, 2, 1>;

TEST_CASE("exponential growth to machine-near accuracy") {
  auto rhs = [](double, const Vec1& y) { return y; };
  Vec1 y0;
  y0 << 1.0;
  OdeOptions opt;
  opt.rtol = 1e-12;
  opt.atol = 1e-12;
  const auto sol = integrate_dopri5<1>(rhs, y0, 0.0, 1.0, opt);
  CHECK(sol.last()[0] == doctest::Approx(std::exp(1.0)).epsilon(1e-10));
  CHECK(sol.eval(0.5)[0] == doctest::Approx(std::exp(0.5)).epsilon(1e-9));
  CHECK(sol.eval(0.0)[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_FALSE(sol.stopped_early);
}

TEST_CASE("backward integration") {
  auto rhs = [](double, const Vec1& y) { return y; };
  Vec1 y0;
  y0 << 1.0;
  const auto sol = integrate_dopri5<1>(rhs, y0, 1.0, 0.0);
  CHECK(sol.last()[0] == doctest::Approx(std::exp(-1.0)).epsilon(1e-8));
  CHECK(sol.eval(0.25)[0] == doctest::Approx(std::exp(-0.75)).epsilon(1e-7));
}

TEST_CASE("harmonic oscillator over many periods") {
  auto rhs = [](double, const Vec2& y) { return Vec2(y[1], -y[0]); };
  Vec2 y0(1.0, 0.0);
  OdeOptions opt;
  opt.rtol = 1e-11;
  opt.atol = 1e-11;
  const double T = 20.0 * M_PI;
  const auto sol = integrate_dopri5<2>(rhs, y0, 0.0, T, opt);
  CHECK(sol.last()[0] == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(std::abs(sol.last()[1]) <= 1e-6);
  // dense output in the interior
  CHECK(sol.eval(M_PI / 2)[0] == doctest::Approx(0.0).epsilon(1e-7));
  CHECK(sol.eval(M_PI)[0] == doctest::Approx(-1.0).epsilon(1e-7));
}

TEST_CASE("stop predicate halts after the triggering step") {
  auto rhs = [](double, const Vec1&) { return Vec1::Ones().eval(); };
  Vec1 y0 = Vec1::Zero();
  const auto sol = integrate_dopri5<1>(
      rhs, y0, 0.0, 10.0, {}, [](double, const Vec1& y) { return y[0] >= 0.5; });
  CHECK(sol.stopped_early);
  CHECK(sol.s_end < 10.0);
  CHECK(sol.last()[0] >= 0.5);
  CHECK(sol.last()[0] <= 1.5);  // generous: one accepted step past the trigger
}

TEST_CASE("step budget exhaustion raises") {
  auto rhs = [](double, const Vec1& y) { return y; };
  Vec1 y0 = Vec1::Ones();
  OdeOptions opt;
  opt.max_steps = 3;
  opt.h_init = 1e-6;
  CHECK_THROWS_AS(integrate_dopri5<1>(rhs, y0, 0.0, 1.0, opt), StepFailure);
}

TEST_CASE("zero span is rejected") {
  auto rhs = [](double, const Vec1& y) { return y; };
  Vec1 y0 = Vec1::Ones();
  CHECK_THROWS_AS(integrate_dopri5<1>(rhs, y0, 2.0, 2.0), SpanTooShort);
}

TEST_CASE("dense output stays inside step brackets") {
  auto rhs = [](double s, const Vec1&) { return Vec1(std::cos(s)); };
  Vec1 y0 = Vec1::Zero();
  const auto sol = integrate_dopri5<1>(rhs, y0, 0.0, 6.0);
  for (int i = 0; i <= 60; ++i) {
    const double s = 6.0 * i / 60.0;
    CHECK(sol.eval(s)[0] == doctest::Approx(std::sin(s)).epsilon(1e-7));
  }
}
