#pragma once

#include <utility>
#include <vector>

#include "geoctrl/damping.hpp"
#include "geoctrl/flow.hpp"
#include "geoctrl/metrics.hpp"

namespace geoctrl {

enum class AverageSide { two_sided, forward, backward };

struct GccReport {
  std::vector<double> averages;  // one two-sided average per sample
  double Cbar_est = 0.0;         // infimum; +inf when there are no samples
  double T_used = 0.0;
  double threshold = 0.0;
  bool passed = false;
  double Cbar2 = 0.0;  // one-sided working constant, half the infimum
};

// (1/2T) int_{-T}^{T} a(t_s, x_s) ds (or the one-sided variants) along a
// dense trajectory, by adaptive quadrature.
double damping_average(const Trajectory& traj, const DampingProfile& damping,
                       double T, AverageSide side);

GccReport tgcc_check(const SpacetimeMetric& m, const DampingProfile& damping,
                     const std::vector<PhasePoint>& trapped_samples, double T,
                     double threshold);

// Smallest T with (1/T) int_0^T a(gamma(s)) ds = Cbar2 (marching bracket,
// then bisection), together with a(gamma(T)).  side selects the forward or
// backward one-sided average.
std::pair<double, double> first_control_time(const Trajectory& traj,
                                             const DampingProfile& damping,
                                             double Cbar2,
                                             AverageSide side = AverageSide::forward);

// a~(t,x) = a(kt, kx), g~(x) = g(kx); the flows satisfy
// phi_{ks}(k w0) = k phi~_s(w0) componentwise (w = (t, x, tau, xi)).
std::pair<DampingProfile, SpacetimeMetric> kappa_rescale(
    const DampingProfile& damping, const SpacetimeMetric& m, double kappa);

// For t-independent damping, control along trapped trajectories is
// equivalent to every trajectory meeting {a > 0}.  Returns
// (tgcc_pass, hit_pass), which agree on the built-in scenarios.
std::pair<bool, bool> stationary_gcc_equiv(const SpacetimeMetric& m,
                                           const DampingProfile& damping,
                                           const std::vector<PhasePoint>& samples,
                                           double s_max);

}  // namespace geoctrl
