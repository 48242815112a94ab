#include "geoctrl/gcc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "geoctrl/errors.hpp"
#include "geoctrl/quadrature.hpp"

namespace geoctrl {

namespace {

double sup_along(const Trajectory& traj, const DampingProfile& damping, double lo,
                 double hi) {
  double m = 0.0;
  for (int i = 0; i <= 100; ++i) {
    const PhasePoint w = traj.at(lo + (hi - lo) * i / 100.0);
    m = std::max(m, std::abs(damping.a(w.t, w.x)));
  }
  return m;
}

double integral_along(const Trajectory& traj, const DampingProfile& damping,
                      double lo, double hi) {
  if (lo == hi) return 0.0;
  auto f = [&](double s) {
    const PhasePoint w = traj.at(s);
    return damping.a(w.t, w.x);
  };
  const double tol = 1e-8 * std::max(sup_along(traj, damping, lo, hi), 1e-8);
  return adaptive_quadrature(f, lo, hi, tol);
}

void require_span(const Trajectory& traj, double lo, double hi) {
  const double have_lo = std::min(traj.span.lo, 0.0);
  const double have_hi = std::max(traj.span.hi, 0.0);
  if (lo < have_lo - 1e-12 || hi > have_hi + 1e-12)
    throw SpanTooShort("trajectory does not cover the averaging interval");
}

}  // namespace

double damping_average(const Trajectory& traj, const DampingProfile& damping,
                       double T, AverageSide side) {
  switch (side) {
    case AverageSide::two_sided:
      require_span(traj, -T, T);
      return integral_along(traj, damping, -T, T) / (2.0 * T);
    case AverageSide::forward:
      require_span(traj, 0.0, T);
      return integral_along(traj, damping, 0.0, T) / T;
    default:
      require_span(traj, -T, 0.0);
      return integral_along(traj, damping, -T, 0.0) / T;
  }
}

GccReport tgcc_check(const SpacetimeMetric& m, const DampingProfile& damping,
                     const std::vector<PhasePoint>& trapped_samples, double T,
                     double threshold) {
  GccReport rep;
  rep.T_used = T;
  rep.threshold = threshold;
  rep.Cbar_est = std::numeric_limits<double>::infinity();
  for (const auto& w : trapped_samples) {
    const Trajectory traj = integrate_flow(m, w, FlowBranch::plus, {-T, T});
    const double avg = damping_average(traj, damping, T, AverageSide::two_sided);
    rep.averages.push_back(avg);
    rep.Cbar_est = std::min(rep.Cbar_est, avg);
  }
  rep.passed = rep.Cbar_est >= threshold;
  rep.Cbar2 = std::isfinite(rep.Cbar_est) ? 0.5 * rep.Cbar_est : rep.Cbar_est;
  return rep;
}

std::pair<double, double> first_control_time(const Trajectory& traj,
                                             const DampingProfile& damping,
                                             double Cbar2, AverageSide side) {
  const double sign = side == AverageSide::backward ? -1.0 : 1.0;
  const double span =
      sign > 0 ? std::max(traj.span.hi, 0.0) : -std::min(traj.span.lo, 0.0);
  if (span <= 0.0) throw SpanTooShort("no span on the requested side");

  // cumulative integral marches in small brackets; F(T) = integral over
  // [0, sign T] minus Cbar2 T changes sign at the first control time
  const double step = std::max(span / 2000.0, 1e-4);
  double T_prev = 0.0, acc_prev = 0.0;
  double T_hit = -1.0, acc_hit_base = 0.0;
  for (double T = step; T_prev < span; T += step) {
    T = std::min(T, span);
    const double acc = acc_prev + (sign > 0
                                       ? integral_along(traj, damping, T_prev, T)
                                       : integral_along(traj, damping, -T, -T_prev));
    if (acc - Cbar2 * T >= 0.0) {
      T_hit = T;
      acc_hit_base = acc_prev;
      break;
    }
    T_prev = T;
    acc_prev = acc;
    if (T >= span) break;
  }
  if (T_hit < 0.0) throw NoControl("running average never reaches the target");

  auto F = [&](double T) {
    const double acc = acc_hit_base + (sign > 0
                                           ? integral_along(traj, damping, T_prev, T)
                                           : integral_along(traj, damping, -T, -T_prev));
    return acc - Cbar2 * T;
  };
  // F(0) = 0 is a spurious root; nudge the lower bracket off zero
  double lo = T_prev > 0.0 ? T_prev : std::min(1e-9, 0.5 * T_hit);
  double hi = T_hit;
  double flo = F(lo);
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = F(mid);
    if ((flo < 0) == (fm < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  const double T_omega = 0.5 * (lo + hi);
  const PhasePoint w = traj.at(sign * T_omega);
  return {T_omega, damping.a(w.t, w.x)};
}

std::pair<DampingProfile, SpacetimeMetric> kappa_rescale(
    const DampingProfile& damping, const SpacetimeMetric& m, double kappa) {
  DampingProfile d;
  d.name = damping.name + "_rescaled";
  d.kappa = kappa;
  d.time_dependent = damping.time_dependent;
  auto a = damping.a;
  auto da = damping.da;
  d.a = [a, kappa](double t, const Vec3& x) { return a(kappa * t, kappa * x); };
  d.da = [da, kappa](double t, const Vec3& x) {
    return (kappa * da(kappa * t, kappa * x)).eval();
  };

  SpacetimeMetric g;
  g.name = m.name + "_rescaled";
  g.R0 = m.R0 / kappa;
  g.timelike_bound = m.timelike_bound;
  auto jet = m.jet;
  auto second = m.second;
  g.jet = [jet, kappa](const Vec3& x) {
    MetricJet J = jet(kappa * x);
    for (auto& D : J.dg) D *= kappa;
    return J;
  };
  g.second = [second, kappa](const Vec3& x) {
    MetricSecond S = second(kappa * x);
    for (auto& D : S) D *= kappa * kappa;
    return S;
  };
  if (m.isotropic_c) {
    auto c = m.isotropic_c;
    g.isotropic_c = [c, kappa](double r) { return c(kappa * r); };
  }
  g.has_photon_sphere = m.has_photon_sphere;
  g.r_unstable = m.r_unstable / kappa;
  g.r_stable = m.r_stable / kappa;
  g.u_min = m.u_min / kappa;
  g.u_max = m.u_max / kappa;
  g.band_lo = m.band_lo / kappa;
  return {d, g};
}

std::pair<bool, bool> stationary_gcc_equiv(const SpacetimeMetric& m,
                                           const DampingProfile& damping,
                                           const std::vector<PhasePoint>& samples,
                                           double s_max) {
  const GccReport rep = tgcc_check(m, damping, samples, s_max, 1e-4);
  bool hit_pass = true;
  for (const auto& w : samples) {
    const Trajectory traj = integrate_flow(m, w, FlowBranch::plus, {0.0, s_max});
    bool hit = false;
    const int n = 4000;
    for (int i = 0; i <= n && !hit; ++i) {
      const PhasePoint p = traj.at(s_max * i / n);
      hit = damping.a(0.0, p.x) > 1e-12;
    }
    if (!hit) {
      hit_pass = false;
      break;
    }
  }
  return {rep.passed, hit_pass};
}

}  // namespace geoctrl
