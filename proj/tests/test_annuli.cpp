#include <cmath>
#include <vector>

#include "doctest.h"
#include "geoctrl/annuli.hpp"
#include "geoctrl/damping.hpp"
#include "geoctrl/metrics.hpp"

using namespace geoctrl;

namespace {

// reference per-annulus values for a(x) = <x>^{-2} on flat space,
// from dense radial sampling (the integrand is radial)
const std::vector<double> kInvSquareRaws = {
    1.999999999999891,   1.999999999990755,   1.366025403784439,
    0.7341229182759271,  0.3730391854123054,  0.1872556204896196,
    0.0937194749676542,  0.04687118506987531, 0.02343702315556562,
    0.01171869039512785, 0.005859367549412298};

const std::vector<double> kInvSquareMajorants = {
    1.999999999999891,   1.999999999990755,   1.6817928304996548,
    1.4142135623665579,  1.1892071149972239,  0.99999999999537748,
    0.84089641524982739, 0.70710678118327897, 0.59460355749861193,
    0.49999999999768874, 0.42044820762491369};

}  // namespace

TEST_CASE("annulus radial bounds") {
  auto [lo0, hi0] = annulus_r_bounds(0);
  CHECK(lo0 == 0.0);
  CHECK(hi0 == doctest::Approx(std::sqrt(3.0)).epsilon(1e-14));
  auto [lo1, hi1] = annulus_r_bounds(1);
  CHECK(lo1 == 0.0);  // <x> >= 1 always, so the lower cut is vacuous
  CHECK(hi1 == doctest::Approx(std::sqrt(15.0)).epsilon(1e-14));
  auto [lo3, hi3] = annulus_r_bounds(3);
  CHECK(lo3 == doctest::Approx(std::sqrt(15.0)).epsilon(1e-14));
  CHECK(hi3 == doctest::Approx(std::sqrt(255.0)).epsilon(1e-14));
}

TEST_CASE("per-annulus estimates for the inverse-square damping") {
  const AnnulusDecomposition decomp;
  const auto raws =
      af_annulus_raws(minkowski_metric(), inv_square_damping(), decomp, 160);
  REQUIRE(raws.size() == kInvSquareRaws.size());
  for (std::size_t j = 0; j < raws.size(); ++j)
    CHECK(raws[j] == doctest::Approx(kInvSquareRaws[j]).epsilon(5e-3));
}

TEST_CASE("AF norm total for the inverse-square damping") {
  const AnnulusDecomposition decomp;
  const double total =
      af_norm(minkowski_metric(), inv_square_damping(), decomp, 160);
  CHECK(total == doctest::Approx(6.842048869090572).epsilon(5e-3));
}

TEST_CASE("flat metric with zero damping has zero AF norm") {
  const AnnulusDecomposition decomp;
  const auto raws = af_annulus_raws(minkowski_metric(), zero_damping(), decomp, 32);
  for (double r : raws) CHECK(r == 0.0);
}

TEST_CASE("slowly varying majorant of the reference sequence") {
  const auto cj = majorize_slowly_varying(kInvSquareRaws, 0.25, 0.05);
  REQUIRE(cj.size() == kInvSquareMajorants.size());
  for (std::size_t j = 0; j < cj.size(); ++j)
    CHECK(cj[j] == doctest::Approx(kInvSquareMajorants[j]).epsilon(1e-12));
}

TEST_CASE("majorant dominates, varies slowly, and respects the floor") {
  const double delta = 0.25;
  const double floor = 0.05;
  const std::vector<double> raw = {0.0, 3.0, 0.0, 0.0, 1e-9, 0.0, 0.2, 0.0};
  const auto cj = majorize_slowly_varying(raw, delta, floor);
  const double ratio = std::pow(2.0, delta);
  for (std::size_t j = 0; j < raw.size(); ++j) {
    CHECK(cj[j] >= raw[j]);
    CHECK(cj[j] >= floor * std::pow(2.0, -delta * double(j)) - 1e-15);
    if (j > 0) {
      CHECK(cj[j] <= cj[j - 1] * ratio * (1.0 + 1e-12));
      CHECK(cj[j] >= cj[j - 1] / ratio * (1.0 - 1e-12));
    }
  }
  // all-zero input collapses to the floor
  const auto base = majorize_slowly_varying(std::vector<double>(5, 0.0), delta, floor);
  for (std::size_t j = 0; j < base.size(); ++j)
    CHECK(base[j] == doctest::Approx(floor * std::pow(2.0, -delta * double(j))));
}

TEST_CASE("cj_sequence ties the pieces together") {
  AnnulusDecomposition decomp;
  const auto cj =
      cj_sequence(photon_sphere_metric(), band_bump_damping(), decomp, 64);
  REQUIRE((int)cj.size() == decomp.J_max + 1);
  const double ratio = std::pow(2.0, decomp.delta);
  for (std::size_t j = 1; j < cj.size(); ++j) {
    CHECK(cj[j] <= cj[j - 1] * ratio * (1.0 + 1e-12));
    CHECK(cj[j] >= cj[j - 1] / ratio * (1.0 - 1e-12));
  }
  CHECK(cj.front() > 0.0);
}
