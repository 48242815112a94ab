#include "geoctrl/halfwave.hpp"

#include <cmath>

#include "geoctrl/errors.hpp"

namespace geoctrl {
namespace {

// pieces of p at fixed x: P = g^{00}, S = g^{0j} xi_j, Q = g^{ij} xi_i xi_j
struct SymbolPieces {
  double P, S, Q;
  Vec3 Sx, Sxi, Qx, Qxi, Px;
  Mat3 g0j_dx;  // (k,j) -> d_k g^{0j}, kept for Hessian assembly
  Mat3 gs;      // spatial block
};

SymbolPieces pieces(const MetricJet& J, const Vec3& xi) {
  SymbolPieces s;
  s.P = J.g(0, 0);
  s.gs = J.g.block<3, 3>(1, 1);
  const Vec3 g0 = J.g.block<1, 3>(0, 1).transpose();
  s.S = g0.dot(xi);
  s.Q = xi.dot(s.gs * xi);
  s.Sxi = g0;
  s.Qxi = 2.0 * s.gs * xi;
  for (int k = 0; k < 3; ++k) {
    const Vec3 dg0 = J.dg[k].block<1, 3>(0, 1).transpose();
    s.Px[k] = J.dg[k](0, 0);
    s.Sx[k] = dg0.dot(xi);
    s.Qx[k] = xi.dot(J.dg[k].block<3, 3>(1, 1) * xi);
    s.g0j_dx.row(k) = dg0.transpose();
  }
  return s;
}

// u = -S/P, v = -Q/P, b = u + sign * sqrt(u^2 + v)
struct UV {
  double u, v, w;
};

UV uvw(const SymbolPieces& s, double xi_norm) {
  UV r;
  r.u = -s.S / s.P;
  r.v = -s.Q / s.P;
  const double disc = r.u * r.u + r.v;
  if (!(disc > 0.0) && xi_norm > 0.0)
    throw DegenerateMetric("half-wave discriminant not positive");
  r.w = std::sqrt(std::max(disc, 0.0));
  return r;
}

}  // namespace

double principal_symbol(const SpacetimeMetric& m, const PhasePoint& w) {
  const MetricJet J = m.jet(w.x);
  const SymbolPieces s = pieces(J, w.xi);
  return s.P * w.tau * w.tau + 2.0 * w.tau * s.S + s.Q;
}

double b_pm(const SpacetimeMetric& m, const Vec3& x, const Vec3& xi, Branch br) {
  const SymbolPieces s = pieces(m.jet(x), xi);
  const UV r = uvw(s, xi.norm());
  return r.u + branch_sign(br) * r.w;
}

SymbolJet b_jet(const SpacetimeMetric& m, const Vec3& x, const Vec3& xi, Branch br) {
  const SymbolPieces s = pieces(m.jet(x), xi);
  const UV r = uvw(s, xi.norm());
  const double sg = branch_sign(br);

  // grad u = -grad S / P + S grad P / P^2 and likewise for v; grad_xi P = 0
  const double P2 = s.P * s.P;
  const Vec3 ux = -s.Sx / s.P + s.S * s.Px / P2;
  const Vec3 uxi = -s.Sxi / s.P;
  const Vec3 vx = -s.Qx / s.P + s.Q * s.Px / P2;
  const Vec3 vxi = -s.Qxi / s.P;

  SymbolJet out;
  out.b = r.u + sg * r.w;
  if (r.w <= 0.0) throw ZeroDivisor("b gradient at xi = 0");
  out.bx = ux + sg * (r.u * ux + 0.5 * vx) / r.w;
  out.bxi = uxi + sg * (r.u * uxi + 0.5 * vxi) / r.w;
  return out;
}

Mat6 b_hessian(const SpacetimeMetric& m, const Vec3& x, const Vec3& xi, Branch br) {
  const MetricJet J = m.jet(x);
  const MetricSecond D2 = m.second(x);
  const SymbolPieces s = pieces(J, xi);
  const UV r = uvw(s, xi.norm());
  const double sg = branch_sign(br);
  if (r.w <= 0.0) throw ZeroDivisor("b Hessian at xi = 0");

  auto grad6 = [](const Vec3& gx, const Vec3& gxi) {
    Vec6 g;
    g << gx, gxi;
    return g;
  };

  // first derivatives of S, Q, P over (x, xi)
  const Vec6 dS = grad6(s.Sx, s.Sxi);
  const Vec6 dQ = grad6(s.Qx, s.Qxi);
  const Vec6 dP = grad6(s.Px, Vec3::Zero());

  // second derivatives
  Mat6 HS = Mat6::Zero(), HQ = Mat6::Zero(), HP = Mat6::Zero();
  for (int k = 0; k < 3; ++k)
    for (int l = 0; l < 3; ++l) {
      const Mat4& D = D2[second_index(k, l)];
      HP(k, l) = D(0, 0);
      HS(k, l) = D.block<1, 3>(0, 1) * xi;
      HQ(k, l) = xi.dot(D.block<3, 3>(1, 1) * xi);
    }
  for (int k = 0; k < 3; ++k) {
    for (int i = 0; i < 3; ++i) {
      HS(k, 3 + i) = s.g0j_dx(k, i);
      HS(3 + i, k) = s.g0j_dx(k, i);
      const double q_mixed = 2.0 * (J.dg[k].block<3, 3>(1, 1) * xi)(i);
      HQ(k, 3 + i) = q_mixed;
      HQ(3 + i, k) = q_mixed;
    }
  }
  HQ.block<3, 3>(3, 3) = 2.0 * s.gs;

  const double P2 = s.P * s.P, P3 = P2 * s.P;
  auto hess_ratio = [&](double F, const Vec6& dF, const Mat6& HF) {
    // Hessian of -F/P
    return (-HF / s.P + (dF * dP.transpose() + dP * dF.transpose()) / P2 +
            F * HP / P2 - 2.0 * F * dP * dP.transpose() / P3)
        .eval();
  };
  const Mat6 Hu = hess_ratio(s.S, dS, HS);
  const Mat6 Hv = hess_ratio(s.Q, dQ, HQ);
  const Vec6 du = -dS / s.P + s.S * dP / P2;
  const Vec6 dv = -dQ / s.P + s.Q * dP / P2;
  const Vec6 dw = (r.u * du + 0.5 * dv) / r.w;
  const Mat6 Hw =
      (du * du.transpose() + r.u * Hu + 0.5 * Hv) / r.w - dw * dw.transpose() / r.w;
  return Hu + sg * Hw;
}

CharBranch char_branch(const SpacetimeMetric& m, const PhasePoint& w, double tol) {
  const double scale = tol * w.xi.norm();
  const SymbolPieces s = pieces(m.jet(w.x), w.xi);
  const UV r = uvw(s, w.xi.norm());
  if (std::abs(w.tau - (r.u + r.w)) <= scale) return CharBranch::plus;
  if (std::abs(w.tau - (r.u - r.w)) <= scale) return CharBranch::minus;
  return CharBranch::none;
}

PhasePoint phi_rescale(const SpacetimeMetric& m, const PhasePoint& w, Branch br) {
  const double b = b_pm(m, w.x, w.xi, br);
  if (b == 0.0) throw ZeroDivisor("Phi rescale with b = 0");
  PhasePoint out = w;
  out.tau = w.tau / b;
  out.xi = w.xi / b;
  return out;
}

PhasePoint project_to_char(const SpacetimeMetric& m, double t, const Vec3& x,
                           const Vec3& xi, Branch br) {
  PhasePoint w;
  w.t = t;
  w.x = x;
  w.xi = xi;
  w.tau = b_pm(m, x, xi, br);
  return w;
}

}  // namespace geoctrl
