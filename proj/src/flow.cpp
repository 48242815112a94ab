#include "geoctrl/flow.hpp"

#include <cmath>
#include <cstdio>

#include "geoctrl/errors.hpp"

namespace geoctrl {

Vec8 full_p_rhs(const SpacetimeMetric& m, const Vec8& y) {
  const Vec3 x = y.segment<3>(1);
  const double tau = y(4);
  const Vec3 xi = y.segment<3>(5);
  const MetricJet J = m.jet(x);
  const Vec3 g0 = J.g.block<1, 3>(0, 1).transpose();
  const Mat3 gs = J.g.block<3, 3>(1, 1);
  Vec8 dy;
  dy(0) = 2.0 * J.g(0, 0) * tau + 2.0 * g0.dot(xi);
  dy.segment<3>(1) = 2.0 * tau * g0 + 2.0 * gs * xi;
  dy(4) = 0.0;
  for (int k = 0; k < 3; ++k) {
    const Vec3 dg0 = J.dg[k].block<1, 3>(0, 1).transpose();
    const double dp_dxk = J.dg[k](0, 0) * tau * tau + 2.0 * tau * dg0.dot(xi) +
                          xi.dot(J.dg[k].block<3, 3>(1, 1) * xi);
    dy(5 + k) = -dp_dxk;
  }
  return dy;
}

Vec8 halfwave_rhs(const SpacetimeMetric& m, const Vec8& y, Branch br) {
  const SymbolJet j = b_jet(m, y.segment<3>(1), y.segment<3>(5), br);
  Vec8 dy;
  dy(0) = 1.0;
  dy.segment<3>(1) = -j.bxi;
  dy(4) = 0.0;
  dy.segment<3>(5) = j.bx;
  return dy;
}

namespace {

std::function<Vec8(double, const Vec8&)> make_rhs(const SpacetimeMetric& m,
                                                  FlowBranch branch) {
  switch (branch) {
    case FlowBranch::full_p:
      return [&m](double, const Vec8& y) { return full_p_rhs(m, y); };
    case FlowBranch::plus:
      return [&m](double, const Vec8& y) { return halfwave_rhs(m, y, Branch::plus); };
    default:
      return [&m](double, const Vec8& y) { return halfwave_rhs(m, y, Branch::minus); };
  }
}

std::function<bool(double, const Vec8&)> make_guard(double xi0_norm) {
  return [xi0_norm](double, const Vec8& y) {
    const double n = y.segment<3>(5).norm();
    if (n < 1e-8 * xi0_norm || n > 1e8 * xi0_norm)
      throw BlowUp("fiber norm left the admissible range");
    return false;
  };
}

}  // namespace

PhasePoint Trajectory::at(double s) const {
  if (s < 0.0) {
    if (bwd.steps.empty()) {
      if (s == 0.0 || !fwd.steps.empty()) return PhasePoint::unpack(fwd.eval(s));
      throw SpanTooShort("trajectory has no backward part");
    }
    return PhasePoint::unpack(bwd.eval(s));
  }
  if (fwd.steps.empty()) {
    if (s == 0.0 && !bwd.steps.empty()) return PhasePoint::unpack(bwd.eval(s));
    throw SpanTooShort("trajectory has no forward part");
  }
  return PhasePoint::unpack(fwd.eval(s));
}

Trajectory integrate_flow(const SpacetimeMetric& m, const PhasePoint& w0,
                          FlowBranch branch, Span s_span, double tol) {
  if (w0.xi.norm() == 0.0) throw BlowUp("flow seed has xi = 0");
  Trajectory traj;
  traj.branch = branch;
  traj.tol = tol;
  traj.w0 = w0;
  traj.span = s_span;

  auto rhs = make_rhs(m, branch);
  auto guard = make_guard(w0.xi.norm());
  OdeOptions opt;
  opt.rtol = tol;
  opt.atol = tol;

  const double lo = std::min(s_span.lo, 0.0);
  const double hi = std::max(s_span.hi, 0.0);
  const Vec8 y0 = w0.pack();
  if (lo < 0.0) traj.bwd = integrate_dopri5<8>(rhs, y0, 0.0, lo, opt, guard);
  if (hi > 0.0) traj.fwd = integrate_dopri5<8>(rhs, y0, 0.0, hi, opt, guard);

  for (auto it = traj.bwd.steps.rbegin(); it != traj.bwd.steps.rend(); ++it) {
    const double s = it->s0 + it->h;
    traj.nodes.emplace_back(s, PhasePoint::unpack(it->eval(s)));
  }
  traj.nodes.emplace_back(0.0, w0);
  for (const auto& st : traj.fwd.steps) {
    const double s = st.s0 + st.h;
    traj.nodes.emplace_back(s, PhasePoint::unpack(st.eval(s)));
  }
  return traj;
}

void write_trajectory_csv(const Trajectory& traj, const std::string& path) {
  std::FILE* fp = std::fopen(path.c_str(), "w");
  if (!fp) throw ConfigError("cannot open trajectory CSV for writing: " + path);
  std::fprintf(fp, "s,t,x1,x2,x3,tau,xi1,xi2,xi3\n");
  for (const auto& [s, w] : traj.nodes)
    std::fprintf(fp, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", s,
                 w.t, w.x(0), w.x(1), w.x(2), w.tau, w.xi(0), w.xi(1), w.xi(2));
  std::fclose(fp);
}

double reparam_match(const SpacetimeMetric& m, const PhasePoint& w0, Span r_span,
                     double tol) {
  if (r_span.lo == r_span.hi) return 0.0;
  if (char_branch(m, w0, 1e-6) != CharBranch::plus)
    throw ConfigError("reparam_match needs a plus-characteristic seed");

  using Vec9 = Eigen::Matrix<double, 9, 1>;
  auto rhs = [&m](double, const Vec9& y) {
    Vec9 dy;
    dy.head<8>() = halfwave_rhs(m, y.head<8>(), Branch::plus);
    const Vec3 x = y.segment<3>(1);
    const double tau = y(4);
    const Vec3 xi = y.segment<3>(5);
    const double p_minus = tau - b_pm(m, x, xi, Branch::minus);
    const double g00 = m.jet(x).g(0, 0);
    dy(8) = 1.0 / (g00 * p_minus);
    return dy;
  };
  OdeOptions opt;
  opt.rtol = tol;
  opt.atol = tol;
  Vec9 y0;
  y0.head<8>() = w0.pack();
  y0(8) = 0.0;

  OdeSolution<9> neg, pos;
  if (r_span.lo < 0.0) neg = integrate_dopri5<9>(rhs, y0, 0.0, r_span.lo, opt);
  if (r_span.hi > 0.0) pos = integrate_dopri5<9>(rhs, y0, 0.0, r_span.hi, opt);
  auto eval9 = [&](double r) {
    return r < 0.0 ? neg.eval(r) : (r > 0.0 ? pos.eval(r) : y0);
  };

  // the s(r) range covered by the r span (ds/dr has one sign, but take
  // min/max over endpoints anyway)
  double s_lo = 0.0, s_hi = 0.0;
  for (double r : {r_span.lo, r_span.hi}) {
    const double s = eval9(r)(8);
    s_lo = std::min(s_lo, s);
    s_hi = std::max(s_hi, s);
  }
  Trajectory full = integrate_flow(m, w0, FlowBranch::full_p, {s_lo, s_hi}, tol);

  double worst = 0.0;
  const int n = 200;
  for (int i = 0; i <= n; ++i) {
    const double r = r_span.lo + (r_span.hi - r_span.lo) * i / n;
    const Vec9 y = eval9(r);
    const Vec8 via_full = full.at(y(8)).pack();
    worst = std::max(worst, (y.head<8>() - via_full).norm());
  }
  return worst;
}

double scaling_check(const SpacetimeMetric& m, const PhasePoint& w0, Branch br,
                     double lambda, Span s_span, double tol) {
  const FlowBranch fb = br == Branch::plus ? FlowBranch::plus : FlowBranch::minus;
  PhasePoint w0l = w0;
  w0l.tau *= lambda;
  w0l.xi *= lambda;
  const Trajectory base = integrate_flow(m, w0, fb, s_span, tol);
  const Trajectory scaled = integrate_flow(m, w0l, fb, s_span, tol);
  double worst = 0.0;
  const int n = 200;
  for (int i = 0; i <= n; ++i) {
    const double s = s_span.lo + (s_span.hi - s_span.lo) * i / n;
    const PhasePoint a = base.at(s);
    const PhasePoint b = scaled.at(s);
    const double res = std::abs(a.t - b.t) + (a.x - b.x).norm() +
                       std::abs(lambda * a.tau - b.tau) +
                       (lambda * a.xi - b.xi).norm();
    worst = std::max(worst, res);
  }
  return worst;
}

std::vector<std::pair<double, double>> radial_convexity(const SpacetimeMetric& m,
                                                        const Trajectory& traj,
                                                        double R0) {
  if (traj.branch == FlowBranch::full_p)
    throw ConfigError("radial convexity is defined for half-wave trajectories");
  const Branch br = traj.branch == FlowBranch::plus ? Branch::plus : Branch::minus;
  std::vector<std::pair<double, double>> out;
  for (const auto& [s, w] : traj.nodes) {
    if (w.x.norm() <= R0) continue;
    const SymbolJet j = b_jet(m, w.x, w.xi, br);
    const Mat6 H = b_hessian(m, w.x, w.xi, br);
    const Mat3 B_xix = H.block<3, 3>(3, 0);
    const Mat3 B_xixi = H.block<3, 3>(3, 3);
    // x'' = B_xix grad_xi b - B_xixi grad_x b, from differentiating
    // x' = -grad_xi b along the flow
    const Vec3 acc = B_xix * j.bxi - B_xixi * j.bx;
    const double val = 2.0 * j.bxi.squaredNorm() + 2.0 * w.x.dot(acc);
    out.emplace_back(s, val);
  }
  return out;
}

}  // namespace geoctrl
