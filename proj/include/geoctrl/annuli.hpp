#pragma once

#include <utility>
#include <vector>

#include "geoctrl/damping.hpp"
#include "geoctrl/metrics.hpp"

namespace geoctrl {

// Overlapping dyadic annuli A_j = { 2^{j-1} <= <x> <= 2^{j+1} } for
// j = 0..J_max, with the slowly-varying parameter delta and the smallness
// floor used when majorizing per-annulus norms.
struct AnnulusDecomposition {
  int J_max = 10;
  double delta = 0.25;
  double c_floor = 0.05;
  std::vector<double> c_seq;  // populated by cj_sequence
};

// radii r with <x> in [2^{j-1}, 2^{j+1}] (clamped below at 0)
std::pair<double, double> annulus_r_bounds(int j);

// Per-annulus weighted sup estimates on a deterministic lattice
// (radial grid including endpoints crossed with a Fibonacci sphere):
//   raw_j = sum over metric orders k=0..2 of max <x>^k |d^k(g-m)|
//         + sum over damping orders b=0..1 of max <x>^{1+b} |d^b a|,
// with Frobenius norms over components (off-diagonal second derivatives
// counted twice).  Damping is evaluated at t = 0.  r_min restricts the
// lattice to r >= r_min; annuli that miss that region contribute 0.
std::vector<double> af_annulus_raws(const SpacetimeMetric& metric,
                                    const DampingProfile& damping,
                                    const AnnulusDecomposition& decomp,
                                    int samples_per_annulus,
                                    double r_min = 0.0);

double af_norm(const SpacetimeMetric& metric, const DampingProfile& damping,
               const AnnulusDecomposition& decomp, int samples_per_annulus);

// Smallest slowly-varying majorant of the raw sequence that also dominates
// the floor c_floor * 2^{-delta j}:
//   c_j = max( max_k raw_k 2^{-delta |k-j|}, c_floor 2^{-delta j} ).
std::vector<double> majorize_slowly_varying(const std::vector<double>& raw,
                                            double delta, double c_floor);

std::vector<double> cj_sequence(const SpacetimeMetric& metric,
                                const DampingProfile& damping,
                                const AnnulusDecomposition& decomp,
                                int samples_per_annulus);

}  // namespace geoctrl
