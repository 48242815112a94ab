#include "geoctrl/escape.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "geoctrl/cutoffs.hpp"
#include "geoctrl/errors.hpp"
#include "geoctrl/gcc.hpp"
#include "geoctrl/quadrature.hpp"

namespace geoctrl {

namespace {

// grid points of step eta/2 inside the closed eta-ball
std::vector<Vec3> ball_lattice(double eta) {
  std::vector<Vec3> out;
  for (int i = -2; i <= 2; ++i)
    for (int j = -2; j <= 2; ++j)
      for (int k = -2; k <= 2; ++k) {
        Vec3 o(0.5 * eta * i, 0.5 * eta * j, 0.5 * eta * k);
        if (o.squaredNorm() <= eta * eta + 1e-15) out.push_back(o);
      }
  return out;
}

std::vector<Vec3> face_offsets(double eta) {
  std::vector<Vec3> out;
  for (int ax = 0; ax < 3; ++ax)
    for (int sgn : {-1, 1}) {
      Vec3 o = Vec3::Zero();
      o[ax] = sgn * eta;
      out.push_back(o);
    }
  return out;
}

double hermite00(double u) { return (1.0 + 2.0 * u) * (1.0 - u) * (1.0 - u); }
double hermite10(double u) { return u * (1.0 - u) * (1.0 - u); }
double hermite00_d(double u) { return 6.0 * u * (u - 1.0); }
double hermite10_d(double u) { return 3.0 * u * u - 4.0 * u + 1.0; }

Vec3 sample_ball(std::mt19937_64& rng, double radius) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Vec3 d(gauss(rng), gauss(rng), gauss(rng));
  double n = d.norm();
  if (n < 1e-300) return Vec3::Zero();
  return d / n * radius * std::cbrt(unif(rng));
}

}  // namespace

PhasePoint ProductChart::forward(double s, const Vec3& z,
                                 const Vec3& zeta) const {
  PhasePoint w0{base.t, z, 1.0, zeta};
  if (s == 0.0) return w0;
  Span sp{std::min(0.0, s), std::max(0.0, s)};
  return integrate_flow(metric, w0, FlowBranch::plus, sp, tol).at(s);
}

bool ProductChart::inverse(const PhasePoint& w, double& s, Vec3& z,
                           Vec3& zeta) const {
  s = w.t - base.t;
  if (s < s_lo - 1e-12 || s > s_hi + 1e-12) return false;
  if (s == 0.0) {
    z = w.x;
    zeta = w.xi;
    return true;
  }
  Span sp{std::min(0.0, -s), std::max(0.0, -s)};
  PhasePoint slice = integrate_flow(metric, w, FlowBranch::plus, sp, tol).at(-s);
  z = slice.x;
  zeta = slice.xi;
  return true;
}

ProductChart product_coords(const SpacetimeMetric& m, const PhasePoint& base,
                            double r0, double s_lo, double s_hi) {
  if (!(r0 > 0.0) || !(s_hi > s_lo))
    throw ConfigError("product_coords: need r0 > 0 and a nonempty span");
  ProductChart chart;
  chart.metric = m;
  chart.base = base;
  chart.r0 = r0;
  chart.s_lo = s_lo;
  chart.s_hi = s_hi;
  chart.axis = integrate_flow(m, base, FlowBranch::plus, {s_lo, s_hi}, chart.tol);

  // lattice in B(base.x, 2 r0) x B(base.xi, 2 r0): per-coordinate face and
  // corner offsets plus paired diagonal corners
  const double h = 2.0 * r0;
  std::vector<std::pair<Vec3, Vec3>> nodes;
  nodes.push_back({Vec3::Zero(), Vec3::Zero()});
  for (const Vec3& o : face_offsets(h)) {
    nodes.push_back({o, Vec3::Zero()});
    nodes.push_back({Vec3::Zero(), o});
  }
  const double c = h / std::sqrt(3.0);
  for (int sx : {-1, 1})
    for (int sy : {-1, 1})
      for (int sz : {-1, 1}) {
        Vec3 o(sx * c, sy * c, sz * c);
        nodes.push_back({o, o});
        nodes.push_back({o, -o});
      }

  const int n_s = 31;
  double worst_rt = 0.0;
  for (const auto& node : nodes) {
    Vec3 z0 = base.x + node.first;
    Vec3 zeta0 = base.xi + node.second;
    PhasePoint w0{base.t, z0, 1.0, zeta0};
    Trajectory traj = integrate_flow(m, w0, FlowBranch::plus, {s_lo, s_hi}, chart.tol);
    for (int i = 0; i < n_s; ++i) {
      double s = s_lo + (s_hi - s_lo) * i / (n_s - 1);
      PhasePoint img = traj.at(s);
      PhasePoint ax = chart.axis.at(s);
      chart.tube_x = std::max(chart.tube_x, (img.x - ax.x).norm());
      chart.tube_xi = std::max(chart.tube_xi, (img.xi - ax.xi).norm());
    }
    for (double s : {s_lo, s_hi}) {
      PhasePoint img = traj.at(s);
      double s_rec;
      Vec3 z_rec, zeta_rec;
      if (!chart.inverse(img, s_rec, z_rec, zeta_rec))
        throw ChartFailure("product_coords: image time left the span");
      double err = std::abs(s_rec - s) + (z_rec - z0).norm() +
                   (zeta_rec - zeta0).norm();
      worst_rt = std::max(worst_rt, err);
    }
  }
  if (worst_rt > 1e-6) {
    std::ostringstream os;
    os << "product_coords: lattice round-trip error " << worst_rt;
    throw ChartFailure(os.str());
  }
  return chart;
}

double r0_search(const SpacetimeMetric& m, const DampingProfile& damping,
                 const std::vector<PhasePoint>& samples, double Cbar2,
                 double s_lo, double s_hi) {
  if (samples.empty()) throw EmptyTrappedSet("r0_search: no base points");
  const double bound = Cbar2 / 4.0;
  const int n_s = static_cast<int>(std::lround((s_hi - s_lo) / 0.05)) + 1;

  std::vector<Trajectory> axes;
  axes.reserve(samples.size());
  for (const auto& w : samples)
    axes.push_back(integrate_flow(m, w, FlowBranch::plus, {s_lo, s_hi}, 1e-10));

  auto max_osc = [&](double eta) {
    double worst = 0.0;
    std::vector<Vec3> ball = ball_lattice(eta);
    std::vector<Vec3> faces = face_offsets(eta);
    for (size_t k = 0; k < samples.size(); ++k) {
      const PhasePoint& w = samples[k];
      std::vector<std::pair<Vec3, Vec3>> nodes;
      for (const Vec3& dz : ball) {
        nodes.push_back({dz, Vec3::Zero()});
        for (const Vec3& df : faces) nodes.push_back({dz, df});
      }
      for (const Vec3& dzeta : ball) nodes.push_back({Vec3::Zero(), dzeta});
      for (const auto& node : nodes) {
        PhasePoint w0{w.t, w.x + node.first, 1.0, w.xi + node.second};
        if (w0.xi.norm() < 1e-9) continue;
        Trajectory traj =
            integrate_flow(m, w0, FlowBranch::plus, {s_lo, s_hi}, 1e-8);
        for (int i = 0; i < n_s; ++i) {
          double s = s_lo + (s_hi - s_lo) * i / (n_s - 1);
          PhasePoint img = traj.at(s);
          PhasePoint ax = axes[k].at(s);
          double osc = std::abs(damping.a(img.t, img.x) - damping.a(ax.t, ax.x));
          worst = std::max(worst, osc);
        }
      }
    }
    return worst;
  };

  double osc1 = max_osc(1.0);
  if (osc1 <= bound) return osc1 == 0.0 ? 1.0 : 0.5;
  double lo = 0.005;
  if (max_osc(lo) > bound)
    throw NoRadius("r0_search: oscillation above Cbar2/4 at the smallest radius");
  double hi = 1.0;
  while (hi - lo > std::max(1e-4, 1e-3 * lo)) {
    double mid = 0.5 * (lo + hi);
    (max_osc(mid) <= bound ? lo : hi) = mid;
  }
  return 0.5 * lo;
}

double AlphaFunction::value(double s) const {
  if (s <= -1.0 || s >= Tw + eps) return 0.0;
  if (s < -eps1) {
    double h = 1.0 - eps1;
    double u = (s + 1.0) / h;
    return A1 * (3.0 - 2.0 * u) * u * u + Cbar2 / 4.0 * h * (u - 1.0) * u * u;
  }
  if (s < 0.0) return eps * eps + d0 * s + 0.5 * beta * s * s;
  if (s <= Tw) {
    size_t n = s_nodes.size() - 1;
    double h = Tw / static_cast<double>(n);
    size_t i = std::min(n - 1, static_cast<size_t>(std::max(0.0, s / h)));
    double u = (s - s_nodes[i]) / h;
    return vals[i] * hermite00(u) + ders[i] * h * hermite10(u) +
           vals[i + 1] * hermite00(1.0 - u) - ders[i + 1] * h * hermite10(1.0 - u);
  }
  double u = (s - Tw) / eps;
  return vals.back() * hermite00(u) + slope_end * eps * hermite10(u);
}

double AlphaFunction::deriv(double s) const {
  if (s <= -1.0 || s >= Tw + eps) return 0.0;
  if (s < -eps1) {
    double h = 1.0 - eps1;
    double u = (s + 1.0) / h;
    return A1 * 6.0 * u * (1.0 - u) / h + Cbar2 / 4.0 * u * (3.0 * u - 2.0);
  }
  if (s < 0.0) return d0 + beta * s;
  if (s <= Tw) {
    size_t n = s_nodes.size() - 1;
    double h = Tw / static_cast<double>(n);
    size_t i = std::min(n - 1, static_cast<size_t>(std::max(0.0, s / h)));
    double u = (s - s_nodes[i]) / h;
    return (vals[i] * hermite00_d(u) - vals[i + 1] * hermite00_d(1.0 - u)) / h +
           ders[i] * hermite10_d(u) + ders[i + 1] * hermite10_d(1.0 - u);
  }
  double u = (s - Tw) / eps;
  return (vals.back() * hermite00_d(u)) / eps + slope_end * hermite10_d(u);
}

AlphaFunction build_alpha(const Trajectory& axis, const DampingProfile& damping,
                          double Cbar2, double Tw, double eps, double eps1) {
  if (!(Tw > 0.0) || !(eps > 0.0) || !(eps1 > 0.0) || eps1 >= 1.0)
    throw ConfigError("build_alpha: need Tw, eps > 0 and eps1 in (0, 1)");
  AlphaFunction a;
  a.Tw = Tw;
  a.eps = eps;
  a.eps1 = eps1;
  a.Cbar2 = Cbar2;

  auto a_axis = [&](double s) {
    PhasePoint w = axis.at(s);
    return damping.a(w.t, w.x);
  };

  const int n = 1024;
  a.s_nodes.resize(n + 1);
  a.vals.resize(n + 1);
  a.ders.resize(n + 1);
  double acc = 0.0;
  a.s_nodes[0] = 0.0;
  a.vals[0] = eps * eps;
  a.ders[0] = Cbar2 - a_axis(0.0);
  for (int i = 1; i <= n; ++i) {
    double s0 = Tw * (i - 1) / n, s1 = Tw * i / n;
    acc += gk15(a_axis, s0, s1).first;
    a.s_nodes[i] = s1;
    a.vals[i] = Cbar2 * s1 - acc + eps * eps;
    a.ders[i] = Cbar2 - a_axis(s1);
  }
  a.d0 = a.ders[0];
  a.slope_end = a.ders[n];

  // quadratic extension with alpha'(-eps1) = Cbar2/4
  a.beta = (a.d0 - Cbar2 / 4.0) / eps1;
  a.A1 = eps * eps - eps1 * (a.d0 + Cbar2 / 4.0) / 2.0;
  if (!(a.A1 > 0.0))
    throw InequalityViolated("build_alpha: left extension reaches zero early");
  // monotone cubic from (-1, 0) needs its end slope under three times the
  // secant slope
  if (Cbar2 / 4.0 > 3.0 * a.A1 / (1.0 - eps1) + 1e-14)
    throw InequalityViolated("build_alpha: left cubic cannot stay monotone");
  // the final ramp stays nonnegative exactly when |alpha'(Tw)| <= 3 eps
  if (a.slope_end < -3.0 * eps + 1e-14)
    throw InequalityViolated("build_alpha: ramp slope too steep for width eps");

  for (int i = 0; i <= 400; ++i) {
    double s = -1.0 + (1.0 - eps1) * i / 400.0;
    if (a.deriv(s) < -1e-12)
      throw InequalityViolated("build_alpha: negative slope on [-1, -eps1]");
  }
  for (int i = 0; i <= 400; ++i) {
    double s = Tw + eps * i / 400.0;
    if (a.value(s) < -1e-12)
      throw InequalityViolated("build_alpha: ramp dips below zero");
  }
  return a;
}

double LocalEscapeTriple::phi_chi(const Vec3& z, const Vec3& zeta) const {
  return chi_lt((z - omega.x).norm(), r0) * chi_lt((zeta - omega.xi).norm(), r0);
}

double LocalEscapeTriple::q_chart(double s, const Vec3& z,
                                  const Vec3& zeta) const {
  if (large) return 0.0;
  double av = alpha.value(s);
  return av == 0.0 ? 0.0 : av * phi_chi(z, zeta);
}

double LocalEscapeTriple::Hq_chart(double s, const Vec3& z,
                                   const Vec3& zeta) const {
  if (large) return 0.0;
  double ad = alpha.deriv(s);
  return ad == 0.0 ? 0.0 : ad * phi_chi(z, zeta);
}

double LocalEscapeTriple::A_chart(double s, const Vec3& z,
                                  const Vec3& zeta) const {
  if (large) return 0.0;
  double rho = plateau(s, -2.0, -1.0, Tw + eps, Tw + 2.0);
  if (rho == 0.0) return 0.0;
  PhasePoint ax = chart.axis.at(s);
  double a_ax = damping.a(ax.t, ax.x);
  double a_tilde = a_ax * step_up(a_ax, 0.5 * Cbar2, 0.75 * Cbar2);
  if (a_tilde == 0.0) return 0.0;
  return 2.0 * (1.0 + Cstar / Cbar2) * a_tilde * rho * phi_chi(z, zeta);
}

double LocalEscapeTriple::r_chart(double s, const Vec3& z,
                                  const Vec3& zeta) const {
  if (large) return 0.0;
  double mu = plateau(s, -eps1, -0.5 * eps1, 0.5 * eps1, eps1);
  return mu == 0.0 ? 0.0 : Cbar2 / 4.0 * mu * phi_chi(z, zeta);
}

double LocalEscapeTriple::q_ambient(const PhasePoint& w) const {
  if (large) return 0.0;
  double s = w.t - omega.t;
  if (s <= -1.0 || s >= Tw + eps) return 0.0;
  PhasePoint ax = chart.axis.at(s);
  if ((w.x - ax.x).norm() > 1.5 * chart.tube_x + 1e-9) return 0.0;
  if ((w.xi - ax.xi).norm() > 1.5 * chart.tube_xi + 1e-9) return 0.0;
  Vec3 z, zeta;
  double s_rec;
  if (!chart.inverse(w, s_rec, z, zeta)) return 0.0;
  return q_chart(s, z, zeta);
}

double LocalEscapeTriple::A_ambient(const PhasePoint& w) const {
  double dt = w.t - omega.t;
  if (large) {
    double psi_t = plateau(dt, -1.0, -0.5, 0.5, 1.0);
    return psi_t == 0.0 ? 0.0 : damping.a(w.t, w.x) * psi_t;
  }
  if (dt <= -2.0 || dt >= Tw + 2.0) return 0.0;
  PhasePoint ax = chart.axis.at(dt);
  if ((w.x - ax.x).norm() > 1.5 * chart.tube_x + 1e-9) return 0.0;
  if ((w.xi - ax.xi).norm() > 1.5 * chart.tube_xi + 1e-9) return 0.0;
  Vec3 z, zeta;
  double s_rec;
  if (!chart.inverse(w, s_rec, z, zeta)) return 0.0;
  return A_chart(dt, z, zeta);
}

LocalEscapeTriple build_local_triple(const SpacetimeMetric& m,
                                     const DampingProfile& damping,
                                     const PhasePoint& omega,
                                     const EscapeConstants& consts) {
  LocalEscapeTriple tr;
  tr.metric = m;
  tr.damping = damping;
  tr.omega = omega;
  tr.Cbar2 = consts.Cbar2;
  tr.T2 = consts.T2;
  tr.Cstar = consts.Cstar;
  tr.r0 = consts.r0;
  tr.a_omega = damping.a(omega.t, omega.x);

  if (tr.a_omega >= 0.5 * consts.Cbar2) {
    tr.large = true;
    // largest r1 <= 1/4 whose 2 r1 ball in (t, x) keeps a >= Cbar2/4, with a
    // 5% margin against off-lattice dips
    double r1 = 0.25;
    const double need = 1.05 * consts.Cbar2 / 4.0;
    while (r1 >= 1e-3) {
      double worst = tr.a_omega;
      for (int it = -3; it <= 3 && worst >= need; ++it)
        for (int ix = -3; ix <= 3; ++ix)
          for (int iy = -3; iy <= 3; ++iy)
            for (int iz = -3; iz <= 3; ++iz) {
              Vec4 o(it / 3.0, ix / 3.0, iy / 3.0, iz / 3.0);
              if (o.squaredNorm() > 1.0 + 1e-15) continue;
              o *= 2.0 * r1;
              double av = damping.a(omega.t + o[0],
                                    omega.x + Vec3(o[1], o[2], o[3]));
              worst = std::min(worst, av);
              if (worst < need) break;
            }
      if (worst >= need) break;
      r1 *= 0.8;
    }
    if (r1 < 1e-3)
      throw NoRadius("build_local_triple: no admissible floor radius r1");
    tr.r1 = r1;
    return tr;
  }

  Trajectory axis =
      integrate_flow(m, omega, FlowBranch::plus, {-2.0, consts.T2 + 2.0}, 1e-10);
  auto ct = first_control_time(axis, damping, consts.Cbar2);
  tr.Tw = ct.first;
  if (tr.Tw > consts.T2 + 1e-9)
    throw NoControl("build_local_triple: first control time beyond T2");

  // shrink eps per point until the damping stays >= 3 Cbar2 / 4 along the
  // ramp; the ramp-slope bound cannot be fixed by shrinking and throws in
  // build_alpha
  double eps_t = consts.eps;
  AlphaFunction alpha;
  for (int attempt = 0;; ++attempt) {
    if (attempt >= 12 || eps_t < 0.02)
      throw InequalityViolated(
          "build_local_triple: no ramp width keeps a >= 3 Cbar2/4");
    double worst = ct.second;
    for (int i = 0; i <= 64; ++i) {
      PhasePoint g = axis.at(tr.Tw + eps_t * i / 64.0);
      worst = std::min(worst, damping.a(g.t, g.x));
    }
    if (worst >= 0.75 * consts.Cbar2) {
      alpha = build_alpha(axis, damping, consts.Cbar2, tr.Tw, eps_t,
                          std::min(consts.eps1, eps_t));
      break;
    }
    eps_t *= 0.7;
  }
  tr.eps = eps_t;
  tr.eps1 = std::min(consts.eps1, eps_t);
  tr.alpha = alpha;
  tr.chart = product_coords(m, omega, consts.r0, -2.0, consts.T2 + 2.0);
  return tr;
}

TripleCheck verify_local_inequality(const LocalEscapeTriple& triple,
                                    int n_samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  TripleCheck out;
  out.n_samples = n_samples;
  out.min_residual = std::numeric_limits<double>::infinity();

  if (triple.large) {
    std::uniform_real_distribution<double> ut(-1.3, 1.3);
    for (int i = 0; i < n_samples; ++i) {
      double dt = ut(rng);
      Vec3 dx = sample_ball(rng, 2.6 * triple.r1);
      PhasePoint w{triple.omega.t + dt, triple.omega.x + dx, 1.0,
                   triple.omega.xi};
      double A = triple.A_ambient(w);
      Vec4 d4(dt, dx[0], dx[1], dx[2]);
      double r = triple.Cbar2 / 4.0 * chi_lt(d4.norm(), triple.r1);
      double res = A - r;
      if (res < out.min_residual) {
        out.min_residual = res;
        out.s_at = dt;
        out.z_at = triple.omega.x + dx;
      }
      double av = triple.damping.a(w.t, w.x);
      if (av > 1e-12) out.max_A_over_a = std::max(out.max_A_over_a, A / av);
    }
  } else {
    std::uniform_real_distribution<double> us(triple.s_begin() - 0.5,
                                              triple.s_end() + 0.5);
    int dom_stride = std::max(1, n_samples / 200);
    for (int i = 0; i < n_samples; ++i) {
      double s = us(rng);
      Vec3 z = triple.omega.x + sample_ball(rng, 2.2 * triple.r0);
      Vec3 zeta = triple.omega.xi + sample_ball(rng, 2.2 * triple.r0);
      double res = triple.Hq_chart(s, z, zeta) + triple.A_chart(s, z, zeta) -
                   triple.r_chart(s, z, zeta);
      if (res < out.min_residual) {
        out.min_residual = res;
        out.s_at = s;
        out.z_at = z;
        out.zeta_at = zeta;
      }
      if (i % dom_stride == 0) {
        double A = triple.A_chart(s, z, zeta);
        if (A > 0.0) {
          PhasePoint amb = triple.chart.forward(s, z, zeta);
          double av = triple.damping.a(amb.t, amb.x);
          if (av > 1e-12) out.max_A_over_a = std::max(out.max_A_over_a, A / av);
        }
      }
    }
  }
  if (out.min_residual < -1e-6) {
    std::ostringstream os;
    os << "verify_local_inequality: residual " << out.min_residual << " at s="
       << out.s_at;
    throw InequalityViolated(os.str());
  }
  return out;
}

std::vector<LocalEscapeTriple> build_trapped_cover(
    const SpacetimeMetric& m, const DampingProfile& damping,
    const std::vector<PhasePoint>& omegas, EscapeConstants& consts) {
  if (omegas.empty())
    throw EmptyTrappedSet("build_trapped_cover: no base points");
  if (consts.r0 <= 0.0) {
    // charts are only built at small-damping base points, so the oscillation
    // search runs over that subset with the chart's flow window
    std::vector<PhasePoint> small;
    for (const auto& w : omegas)
      if (damping.a(w.t, w.x) < 0.5 * consts.Cbar2) small.push_back(w);
    consts.r0 = small.empty() ? 0.05
                              : r0_search(m, damping, small, consts.Cbar2, -2.0,
                                          consts.T2 + 2.0);
  }
  std::vector<LocalEscapeTriple> triples;
  triples.reserve(omegas.size());
  double Cstar = 0.0;
  for (const auto& w : omegas) {
    triples.push_back(build_local_triple(m, damping, w, consts));
    const LocalEscapeTriple& tr = triples.back();
    if (!tr.large) {
      double worst = 0.0;
      for (int i = 0; i <= 64; ++i)
        worst = std::min(worst, tr.alpha.deriv(tr.Tw + tr.eps * i / 64.0));
      Cstar = std::max(Cstar, -worst);
    }
  }
  consts.Cstar = Cstar;
  for (auto& tr : triples) tr.Cstar = Cstar;
  return triples;
}

}  // namespace geoctrl
