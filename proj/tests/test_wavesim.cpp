#include <cmath>
#include <cstdio>
#include <random>
#include <vector>

#include "doctest.h"
#include "geoctrl/damping.hpp"
#include "geoctrl/metrics.hpp"
#include "geoctrl/wavesim.hpp"

using namespace geoctrl;

namespace {

double project_mode(const WaveSolver& s, const std::vector<double>& level) {
  // inner product with the cos(2 x1) shape; the grid is cell-centered so the
  // discrete mode is orthogonal to the shape's complement
  double num = 0.0, den = 0.0;
  const SpatialGrid& g = s.grid;
  for (int k = 0; k < g.n; ++k)
    for (int j = 0; j < g.n; ++j)
      for (int i = 0; i < g.n; ++i) {
        const double phi = std::cos(2.0 * g.center(i, j, k)[0]);
        num += level[g.index(i, j, k)] * phi;
        den += phi * phi;
      }
  return num / den;
}

double discrete_mode_frequency(int n) {
  WaveSpec spec;
  spec.L = M_PI;
  spec.n = n;
  spec.cfl = 0.4;
  spec.bc = WaveBc::periodic;
  WaveSolver s = make_wave_solver(minkowski_metric(), zero_damping(), spec);
  set_initial_data(
      s, [](const Vec3& x) { return std::cos(2.0 * x[0]); },
      [](const Vec3&) { return 0.0; });
  step(s);
  const double A0 = project_mode(s, s.u_prev);
  const double A1 = project_mode(s, s.u_curr);
  step(s);
  const double A2 = project_mode(s, s.u_curr);
  // three consecutive amplitudes of a scheme eigenmode satisfy
  // A2 + A0 = 2 cos(w dt) A1 exactly
  return std::acos((A0 + A2) / (2.0 * A1)) / s.dt;
}

}  // namespace

TEST_CASE("discrete dispersion of the k = 2 mode") {
  CHECK(discrete_mode_frequency(48) ==
        doctest::Approx(1.9952004798907980222).epsilon(1e-9));
  CHECK(discrete_mode_frequency(96) ==
        doctest::Approx(1.9988004560742099308).epsilon(1e-9));
}

TEST_CASE("face energy is invariant without damping") {
  WaveSpec spec;
  spec.L = 2.0;
  spec.n = 20;
  spec.bc = WaveBc::periodic;
  WaveSolver s = make_wave_solver(minkowski_metric(), zero_damping(), spec);
  set_initial_data(
      s,
      [](const Vec3& x) {
        return std::sin(M_PI * x[0] / 2.0) * std::cos(M_PI * x[1] / 2.0);
      },
      [](const Vec3& x) { return 0.3 * std::cos(M_PI * x[2] / 2.0); });
  const double F0 = face_energy(s);
  REQUIRE(F0 > 0.0);
  double max_drift = 0.0;
  for (int it = 0; it < 1000; ++it) {
    step(s);
    max_drift = std::max(max_drift, std::abs(face_energy(s) - F0));
  }
  CHECK(max_drift <= 1e-9 * F0);

  // the centered-difference energy is not exactly conserved but stays within
  // its second-order wobble band
  const double E0 = energy(s);
  CHECK(E0 == doctest::Approx(F0).epsilon(0.05));
}

TEST_CASE("energy is a quadratic form that vanishes on zero data") {
  WaveSpec spec;
  spec.L = 2.0;
  spec.n = 12;
  WaveSolver s = make_wave_solver(minkowski_metric(), zero_damping(), spec);
  set_initial_data(s, [](const Vec3&) { return 0.0; }, [](const Vec3&) { return 0.0; });
  CHECK(energy(s) == 0.0);
  CHECK(face_energy(s) == 0.0);
  step(s);
  CHECK(energy(s) == 0.0);

  WaveSolver a = make_wave_solver(photon_sphere_metric(), zero_damping(), spec);
  set_initial_data(
      a, [](const Vec3& x) { return std::exp(-x.squaredNorm()); },
      [](const Vec3& x) { return x[0] * std::exp(-x.squaredNorm()); });
  WaveSolver b = a;
  for (auto& v : b.u_prev) v *= 2.0;
  for (auto& v : b.u_curr) v *= 2.0;
  CHECK(energy(b) == doctest::Approx(4.0 * energy(a)).epsilon(1e-12));
  CHECK(face_energy(b) == doctest::Approx(4.0 * face_energy(a)).epsilon(1e-12));
}

TEST_CASE("signals do not outrun the stencil cone") {
  WaveSpec spec;
  spec.L = 4.0;
  spec.n = 32;
  spec.bc = WaveBc::dirichlet;
  WaveSolver s = make_wave_solver(minkowski_metric(), zero_damping(), spec);
  const SpatialGrid g = s.grid;
  // one-cell source at the center cell
  const int c = g.n / 2;
  set_initial_data(
      s,
      [&](const Vec3& x) {
        return (x - g.center(c, c, c)).norm() < 0.5 * g.h() ? 1.0 : 0.0;
      },
      [](const Vec3&) { return 0.0; });
  const int steps = 6;
  for (int it = 0; it < steps; ++it) step(s);
  // the seed widened the support by one cell, each step by one more
  const int reach = steps + 1;
  for (int k = 0; k < g.n; ++k)
    for (int j = 0; j < g.n; ++j)
      for (int i = 0; i < g.n; ++i) {
        const int dist = std::abs(i - c) + std::abs(j - c) + std::abs(k - c);
        if (dist > reach) CHECK(s.u_curr[g.index(i, j, k)] == 0.0);
      }
}

TEST_CASE("uniform mode with constant damping follows the scalar ODE") {
  auto run_err = [](int n) {
    WaveSpec spec;
    spec.L = 1.0;
    spec.n = n;
    spec.bc = WaveBc::periodic;
    const double a0 = 0.5;
    WaveSolver s = make_wave_solver(minkowski_metric(), constant_damping(a0), spec);
    set_initial_data(s, [](const Vec3&) { return 1.0; }, [](const Vec3&) { return 1.0; });
    const double T = 2.0;
    while (s.t < T - 1e-12) step(s);
    const double exact = 1.0 + (1.0 - std::exp(-a0 * s.t)) / a0;
    return std::abs(s.u_curr.front() - exact);
  };
  const double e8 = run_err(8);
  const double e16 = run_err(16);
  CHECK(e8 <= 2e-2);
  CHECK(e16 <= e8 / 3.0);
}

TEST_CASE("recorded runs audit their own dissipation") {
  WaveSpec spec;
  spec.L = 3.0;
  spec.n = 24;
  spec.bc = WaveBc::dirichlet;
  const WaveRun run = run_recorded(
      minkowski_metric(), ball_bump_damping(0.8, 1.0), spec,
      [](const Vec3& x) { return std::exp(-2.0 * x.squaredNorm()); },
      [](const Vec3&) { return 0.0; }, 2.0);
  REQUIRE(run.E0 > 0.0);
  REQUIRE(run.levels.size() >= 4);
  const auto res = dissipation_residual(run);
  REQUIRE(!res.empty());
  // the face-form identity is exact, so only roundoff remains
  for (const auto& [t, r] : res) CHECK(std::abs(r) <= 1e-8);
  CHECK(backward_energy_bound(run, 2.0));
}

TEST_CASE("streaming audit closes the energy identity") {
  WaveSpec spec;
  spec.L = 3.0;
  spec.n = 32;
  spec.bc = WaveBc::dirichlet;
  const EnergyAudit audit = energy_audit(
      minkowski_metric(), ball_bump_damping(0.8, 1.0), spec,
      [](const Vec3& x) { return std::exp(-2.0 * x.squaredNorm()); },
      [](const Vec3&) { return 0.0; }, 2.0);
  REQUIRE(audit.E_begin > 0.0);
  CHECK(audit.dissipated > 0.0);
  CHECK(audit.E_end < audit.E_begin);
  CHECK(audit.defect <= 0.05 * audit.E_begin);
  CHECK(audit.steps > 10);
}

TEST_CASE("sponge absorbs an outgoing pulse") {
  WaveSpec spec;
  spec.L = 4.0;
  spec.n = 32;
  spec.bc = WaveBc::dirichlet;
  spec.sponge = true;
  WaveSolver s = make_wave_solver(minkowski_metric(), zero_damping(), spec);
  set_initial_data(
      s, [](const Vec3& x) { return std::exp(-4.0 * x.squaredNorm()); },
      [](const Vec3&) { return 0.0; });
  const double E0 = face_energy(s);
  while (s.t < 7.0) step(s);
  CHECK(face_energy(s) <= 0.5 * E0);
}

TEST_CASE("checkpoints round-trip the solver state") {
  WaveSpec spec;
  spec.L = 2.0;
  spec.n = 12;
  WaveSolver s = make_wave_solver(photon_sphere_metric(), band_bump_damping(), spec);
  set_initial_data(
      s, [](const Vec3& x) { return std::sin(x[0]) * std::cos(x[1]); },
      [](const Vec3& x) { return x[2]; });
  for (int i = 0; i < 7; ++i) step(s);

  const std::string path = "wavesim_checkpoint_test.bin";
  save_checkpoint(s, path);
  WaveSolver r = make_wave_solver(photon_sphere_metric(), band_bump_damping(), spec);
  load_checkpoint(r, path);
  std::remove(path.c_str());

  CHECK(r.t == s.t);
  CHECK(r.steps_done == s.steps_done);
  REQUIRE(r.u_curr.size() == s.u_curr.size());
  for (std::size_t i = 0; i < s.u_curr.size(); ++i) {
    CHECK(r.u_curr[i] == s.u_curr[i]);
    CHECK(r.u_prev[i] == s.u_prev[i]);
  }
  // stepping both afterwards stays in lockstep
  step(s);
  step(r);
  for (std::size_t i = 0; i < s.u_curr.size(); ++i) CHECK(r.u_curr[i] == s.u_curr[i]);
}

TEST_CASE("ring data drives a decay report with sane bookkeeping") {
  RingData rd;
  rd.radius = 2.0;
  rd.width = 0.5;
  rd.mode = 4;
  rd.omega = 2.0;
  const auto [u0, v0] = ring_initial_data(rd);
  CHECK(std::abs(u0(Vec3(6.0, 6.0, 6.0))) <= 1e-12);
  CHECK(std::abs(u0(Vec3(2.0, 0.0, 0.0))) > 1e-3);

  WaveSpec spec;
  spec.L = 4.0;
  spec.n = 24;
  spec.bc = WaveBc::dirichlet;
  spec.sponge = true;
  const DecayReport rep = decay_experiment(minkowski_metric(), constant_damping(0.1),
                                           spec, u0, v0, 4.0, 8);
  REQUIRE(rep.times.size() == rep.le1_ratio.size());
  REQUIRE(rep.times.size() == rep.energy.size());
  CHECK(rep.E0 > 0.0);
  CHECK(rep.crossing_time > 0.0);
  for (std::size_t i = 1; i < rep.le1_ratio.size(); ++i)
    CHECK(rep.le1_ratio[i] >= rep.le1_ratio[i - 1] - 1e-12);
  CHECK(rep.le1_ratio.back() > 0.0);
  REQUIRE(!rep.partials.empty());
}
