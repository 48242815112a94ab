#pragma once

#include <string>
#include <utility>
#include <vector>

#include "geoctrl/halfwave.hpp"
#include "geoctrl/metrics.hpp"
#include "geoctrl/ode.hpp"
#include "geoctrl/types.hpp"

namespace geoctrl {

enum class FlowBranch { full_p, plus, minus };

struct Span {
  double lo = 0.0, hi = 0.0;
};

// Hamilton vector fields as packed 8-state derivatives.
// Full p:     dt/ds = 2 g^{00} tau + 2 g^{0j} xi_j,  dx/ds = dp/dxi,
//             dtau/ds = 0,  dxi/ds = -dp/dx.
// Half-wave:  dt/ds = 1,  dx/ds = -grad_xi b,  dtau/ds = 0,
//             dxi/ds = +grad_x b.
Vec8 full_p_rhs(const SpacetimeMetric& m, const Vec8& y);
Vec8 halfwave_rhs(const SpacetimeMetric& m, const Vec8& y, Branch br);

// Bicharacteristic through w0 at s = 0, integrated over both sides of the
// span as needed, with dense output.
struct Trajectory {
  FlowBranch branch = FlowBranch::full_p;
  double tol = 1e-9;
  PhasePoint w0;
  Span span;
  OdeSolution<8> fwd, bwd;  // either may be empty
  std::vector<std::pair<double, PhasePoint>> nodes;

  PhasePoint at(double s) const;
};

Trajectory integrate_flow(const SpacetimeMetric& m, const PhasePoint& w0,
                          FlowBranch branch, Span s_span, double tol = 1e-9);

void write_trajectory_csv(const Trajectory& traj, const std::string& path);

// Integrates the full-p flow, the p+ flow, and the reparameterization ODE
// ds/dr = 1 / (g^{00} p^-) from a plus-characteristic seed; returns the
// maximum 8-state distance between phi_{s(r)} and phi^+_r over the span.
double reparam_match(const SpacetimeMetric& m, const PhasePoint& w0, Span r_span,
                     double tol = 1e-9);

// Fiber-scaling residual for the half-wave flows:
//   max over s of |t - t^l| + |x - x^l| + |l tau - tau^l| + |l xi - xi^l|
// between the flows from w0 and from (t, x, l tau, l xi).
double scaling_check(const SpacetimeMetric& m, const PhasePoint& w0, Branch br,
                     double lambda, Span s_span, double tol = 1e-9);

// d^2/ds^2 |x_s|^2 evaluated analytically at trajectory nodes with |x| > R0
std::vector<std::pair<double, double>> radial_convexity(
    const SpacetimeMetric& m, const Trajectory& traj, double R0);

}  // namespace geoctrl
