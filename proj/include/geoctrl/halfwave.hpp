#pragma once

#include "geoctrl/metrics.hpp"
#include "geoctrl/types.hpp"

namespace geoctrl {

// b and its first derivatives in x and xi
struct SymbolJet {
  double b = 0.0;
  Vec3 bx = Vec3::Zero();
  Vec3 bxi = Vec3::Zero();
};

// p(t,x,tau,xi) = g^{00} tau^2 + 2 tau g^{0j} xi_j + g^{ij} xi_i xi_j
double principal_symbol(const SpacetimeMetric& m, const PhasePoint& w);

// Roots in tau of p = 0 at fixed (x, xi):
//   b_pm = u +- sqrt(u^2 + v),  u = g^{0j} xi_j / (-g^{00}),
//                               v = g^{ij} xi_i xi_j / (-g^{00}),
// so b+ > 0 > b- for xi != 0 and b is 1-homogeneous in xi.  Computed from
// this closed form, never by root-finding on p.
double b_pm(const SpacetimeMetric& m, const Vec3& x, const Vec3& xi, Branch br);

// value plus analytic gradients via the metric derivative closures
SymbolJet b_jet(const SpacetimeMetric& m, const Vec3& x, const Vec3& xi, Branch br);

// full 6x6 second derivative of b over (x, xi), ordered (x1,x2,x3,xi1,xi2,xi3)
Mat6 b_hessian(const SpacetimeMetric& m, const Vec3& x, const Vec3& xi, Branch br);

enum class CharBranch { plus, minus, none };

// plus if |tau - b+| <= tol |xi|, minus if |tau - b-| <= tol |xi|
CharBranch char_branch(const SpacetimeMetric& m, const PhasePoint& w,
                       double tol = 1e-8);

// Phi_pm(t,x,tau,xi) = (t, x, tau/b_pm(x,xi), xi/b_pm(x,xi)); maps Char(P_pm)
// into the tau = 1 slice.
PhasePoint phi_rescale(const SpacetimeMetric& m, const PhasePoint& w, Branch br);

// point on Char(P_pm) with the given base coordinates: tau = b_pm(x, xi)
PhasePoint project_to_char(const SpacetimeMetric& m, double t, const Vec3& x,
                           const Vec3& xi, Branch br);

}  // namespace geoctrl
