#include "geoctrl/escape.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

#include "geoctrl/cutoffs.hpp"
#include "geoctrl/errors.hpp"
#include "geoctrl/ode.hpp"
#include "geoctrl/quadrature.hpp"
#include "geoctrl/trapping.hpp"

namespace geoctrl {

namespace {

using Vec9 = Eigen::Matrix<double, 9, 1>;

// deterministic unit directions, reasonably equidistributed
std::vector<Vec3> fib_sphere(int n) {
  std::vector<Vec3> out;
  out.reserve(n);
  const double ga = M_PI * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < n; ++i) {
    double z = 1.0 - (2.0 * i + 1.0) / n;
    double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
    out.emplace_back(rho * std::cos(ga * i), rho * std::sin(ga * i), z);
  }
  return out;
}

// cubic Hermite through (knots, vals) with derivative table ders; deriv
// selects the interpolant's exact derivative instead of its value
double hermite_table(const std::vector<double>& knots,
                     const std::vector<double>& vals,
                     const std::vector<double>& ders, double r,
                     bool deriv = false) {
  if (r <= knots.front()) return deriv ? ders.front() : vals.front();
  if (r >= knots.back())
    return deriv ? ders.back()
                 : vals.back() + ders.back() * (r - knots.back());
  size_t lo = 0, hi = knots.size() - 1;
  while (hi - lo > 1) {
    size_t mid = (lo + hi) / 2;
    (knots[mid] <= r ? lo : hi) = mid;
  }
  double h = knots[lo + 1] - knots[lo];
  double u = (r - knots[lo]) / h;
  if (deriv) {
    double d00 = 6.0 * u * (u - 1.0) / h;
    double d10 = (1.0 - u) * (1.0 - 3.0 * u);
    double d11 = u * (3.0 * u - 2.0);
    return vals[lo] * d00 + ders[lo] * d10 - vals[lo + 1] * d00 +
           ders[lo + 1] * d11;
  }
  double h00 = (1.0 + 2.0 * u) * (1.0 - u) * (1.0 - u);
  double h10 = u * (1.0 - u) * (1.0 - u);
  double h01 = u * u * (3.0 - 2.0 * u);
  double h11 = u * u * (u - 1.0);
  return vals[lo] * h00 + ders[lo] * h * h10 + vals[lo + 1] * h01 +
         ders[lo + 1] * h * h11;
}

// slopes for a log-space interpolant of the c_j knots, secant-averaged and
// clamped to keep the interpolant monotone between knots
std::vector<double> log_slopes(const std::vector<double>& lc) {
  size_t n = lc.size();
  std::vector<double> m(n, 0.0);
  if (n == 1) return m;
  std::vector<double> d(n - 1);
  for (size_t i = 0; i + 1 < n; ++i) d[i] = lc[i + 1] - lc[i];
  m[0] = d[0];
  m[n - 1] = d[n - 2];
  for (size_t i = 1; i + 1 < n; ++i) {
    if (d[i - 1] * d[i] <= 0.0)
      m[i] = 0.0;
    else
      m[i] = 0.5 * (d[i - 1] + d[i]);
  }
  for (size_t i = 0; i + 1 < n; ++i) {
    if (d[i] == 0.0) {
      m[i] = m[i + 1] = 0.0;
      continue;
    }
    m[i] = std::clamp(m[i] / d[i], 0.0, 3.0) * d[i];
    m[i + 1] = std::clamp(m[i + 1] / d[i], 0.0, 3.0) * d[i];
  }
  return m;
}

}  // namespace

double NontrapPieces::f(double r) const {
  if (r <= knots_r.front()) return 1.0;
  return std::exp(sigma * hermite_table(knots_r, knots_F, knots_h, r));
}

double NontrapPieces::f_prime(double r) const {
  if (r <= knots_r.front()) return 0.0;
  double dF = hermite_table(knots_r, knots_F, knots_h, r, true);
  return sigma * dF * f(r);
}

double NontrapPieces::psi(const Vec3& x, const Vec3& xi) const {
  double r = x.norm();
  double a_r = 1.0 - step_up(r, R, R + 0.4);
  if (a_r == 0.0) return 0.0;
  if (!metric.has_photon_sphere) return a_r;
  double b1 = metric.band_lo - 0.35, b2 = metric.band_lo - 0.05;
  double b3 = metric.r_unstable + 0.05, b4 = metric.r_unstable + 0.35;
  double band = plateau(r, b1, b2, b3, b4);
  if (band == 0.0) return a_r;
  double xin = xi.norm();
  if (xin < 1e-300) return a_r;
  double m = x.cross(xi).norm() / (metric.isotropic_c(r) * xin) - metric.u_min;
  return a_r * (1.0 - band * step_up(m, -d_out, -d_in));
}

double NontrapPieces::dwell(const Vec3& x, const Vec3& xi_normalized) const {
  if (metric.has_photon_sphere && photon_sphere_trapped(metric, x, xi_normalized))
    return 0.0;
  const double r_stop = R + 0.5;
  Vec9 y0;
  y0.head<8>() = PhasePoint{0.0, x, 1.0, xi_normalized}.pack();
  y0[8] = 0.0;
  auto rhs = [&](double, const Vec9& y) {
    Vec9 dy;
    Vec8 y8 = y.head<8>();
    dy.head<8>() = halfwave_rhs(metric, y8, Branch::plus);
    PhasePoint w = PhasePoint::unpack(y8);
    dy[8] = psi(w.x, w.xi);
    return dy;
  };
  auto stop = [&](double, const Vec9& y) {
    PhasePoint w = PhasePoint::unpack(Vec8(y.head<8>()));
    double r = w.x.norm();
    if (r < r_stop) return false;
    SymbolJet jet = b_jet(metric, w.x, w.xi, Branch::plus);
    return w.x.dot(-jet.bxi) >= 0.0;
  };
  OdeOptions opt;
  opt.rtol = flow_tol;
  opt.atol = 1e-10;
  OdeSolution<9> sol = integrate_dopri5<9>(rhs, y0, 0.0, s_cap, opt, stop);
  if (!sol.stopped_early) {
    std::ostringstream os;
    os << "dwell: no certified exit within s = " << s_cap << " from |x| = "
       << x.norm();
    throw NoExit(os.str());
  }
  return sol.last()[8];
}

double NontrapPieces::q_out(const Vec3& x, const Vec3& xi) const {
  double r = x.norm();
  double w = chi_gt(r, R);
  if (w == 0.0 || r < 1e-300) return 0.0;
  SymbolJet jet = b_jet(metric, x, xi, Branch::plus);
  return -w * f(r) * jet.bxi.dot(x) / r;
}

double NontrapPieces::q_in(const Vec3& x, const Vec3& xi) const {
  double w = chi_lt(x.norm(), 2.0 * R);
  if (w == 0.0) return 0.0;
  double bp = b_pm(metric, x, xi, Branch::plus);
  return -w * dwell(x, xi / bp);
}

double NontrapPieces::q2(const Vec3& x, const Vec3& xi) const {
  return eps_in * q_in(x, xi) + q_out(x, xi);
}

NontrapPieces build_nontrapping(const SpacetimeMetric& m,
                                const AnnulusDecomposition& decomp,
                                const DampingProfile& damping, double sigma,
                                double R) {
  if (!(R > m.R0))
    throw ConfigError("build_nontrapping: R must exceed the asymptotic radius");
  NontrapPieces nt;
  nt.metric = m;
  nt.R = R;
  nt.sigma = sigma;

  std::vector<double> raws = af_annulus_raws(m, damping, decomp, 96, m.R0);
  nt.tail_cj = majorize_slowly_varying(raws, decomp.delta, decomp.c_floor);

  std::vector<double> lc(nt.tail_cj.size());
  for (size_t j = 0; j < lc.size(); ++j) lc[j] = std::log(nt.tail_cj[j]);
  std::vector<double> lslope = log_slopes(lc);
  auto c_of = [&, lc, lslope](double y) {
    y = std::clamp(y, 0.0, double(lc.size() - 1));
    size_t j = std::min(lc.size() - 2, static_cast<size_t>(y));
    double u = y - j;
    double h00 = (1.0 + 2.0 * u) * (1.0 - u) * (1.0 - u);
    double h10 = u * (1.0 - u) * (1.0 - u);
    double h01 = u * u * (3.0 - 2.0 * u);
    double h11 = u * u * (u - 1.0);
    return std::exp(lc[j] * h00 + lslope[j] * h10 + lc[j + 1] * h01 +
                    lslope[j + 1] * h11);
  };
  auto h_of = [&, c_of](double rho) {
    double br = jbracket_r(rho);
    return 1.5 * c_of(std::log2(br)) / br;
  };

  const int n_knots = 2048;
  const double r_max = 8.0 * R;
  nt.knots_r.resize(n_knots);
  nt.knots_F.resize(n_knots);
  nt.knots_h.resize(n_knots);
  double acc = 0.0;
  for (int i = 0; i < n_knots; ++i) {
    double r = m.R0 + (r_max - m.R0) * i / (n_knots - 1);
    if (i > 0) acc += gk15(h_of, nt.knots_r[i - 1], r).first;
    nt.knots_r[i] = r;
    nt.knots_F[i] = acc;
    nt.knots_h[i] = h_of(r);
  }

  // two-sided slow-variation window for the weight on every annulus a
  // radius meets
  for (int i = 0; i <= 512; ++i) {
    double r = m.R0 + (std::min(r_max, std::pow(2.0, decomp.J_max + 1.0)) - m.R0) *
                          (i + 0.5) / 513.0;
    double y = std::log2(jbracket_r(r));
    int j_lo = std::max(0, static_cast<int>(std::ceil(y - 1.0)));
    int j_hi = std::min(decomp.J_max, static_cast<int>(std::floor(y + 1.0)));
    double fp = nt.f_prime(r), fv = nt.f(r);
    for (int j = j_lo; j <= j_hi; ++j) {
      double cj2 = nt.tail_cj[j] * std::pow(2.0, -j);
      if (fp < 0.5 * sigma * cj2 * fv - 1e-12 ||
          fp > 8.0 * sigma * cj2 * fv + 1e-12) {
        std::ostringstream os;
        os << "build_nontrapping: weight outside the slow-variation window at r="
           << r << " j=" << j;
        throw InequalityViolated(os.str());
      }
    }
  }

  // calibrate eps_in on the transition shell [2R, 4R]: the inward piece's
  // cutoff error must stay below half the outward piece's positivity
  auto stencil = [&](const std::function<double(const Vec3&, const Vec3&)>& g,
                     const Vec3& x, const Vec3& xin) {
    const double h = 1e-3;
    PhasePoint w0{0.0, x, 1.0, xin};
    Trajectory traj =
        integrate_flow(m, w0, FlowBranch::plus, {-2.0 * h, 2.0 * h}, 1e-11);
    auto at = [&](double s) {
      PhasePoint w = traj.at(s);
      return g(w.x, w.xi);
    };
    return (at(-2.0 * h) - 8.0 * at(-h) + 8.0 * at(h) - at(2.0 * h)) / (12.0 * h);
  };
  double pos_min = std::numeric_limits<double>::infinity();
  double err_max = 0.0;
  std::vector<Vec3> xdirs = fib_sphere(8), kdirs = fib_sphere(6);
  for (int ir = 0; ir < 6; ++ir) {
    double r = 2.0 * R + (2.0 * R) * (ir + 0.5) / 6.0;
    for (const Vec3& xd : xdirs) {
      Vec3 x = r * xd;
      for (const Vec3& kd : kdirs) {
        Vec3 xin = kd / b_pm(m, x, kd, Branch::plus);
        std::function<double(const Vec3&, const Vec3&)> g_out =
            [&](const Vec3& xx, const Vec3& kk) { return nt.q_out(xx, kk); };
        std::function<double(const Vec3&, const Vec3&)> g_in =
            [&](const Vec3& xx, const Vec3& kk) { return nt.q_in(xx, kk); };
        double hq_out = stencil(g_out, x, xin);
        double hq_in = stencil(g_in, x, xin);
        if (hq_out <= 0.0) {
          std::ostringstream os;
          os << "build_nontrapping: outward piece not increasing on the shell, "
             << "H q_out = " << hq_out << " at r = " << r;
          throw InequalityViolated(os.str());
        }
        pos_min = std::min(pos_min, hq_out);
        err_max = std::max(err_max, std::max(0.0, -hq_in));
      }
    }
  }
  nt.eps_in = err_max == 0.0 ? 1.0 : std::min(1.0, 0.5 * pos_min / err_max);
  return nt;
}

double CombinedEscape::q1_plus(double t, const Vec3& x,
                               const Vec3& xi_normalized) const {
  double total = 0.0;
  for (const auto& tr : triples) {
    if (tr.large) continue;
    double base = t - tr.omega.t;
    int k_lo = static_cast<int>(std::ceil((base - tr.Tw - tr.eps) / T2));
    int k_hi = static_cast<int>(std::floor((base + 1.0) / T2));
    for (int k = k_lo; k <= k_hi; ++k)
      total += tr.q_ambient({t - k * T2, x, 1.0, xi_normalized});
  }
  return total;
}

double CombinedEscape::q_gt1(Branch br, double t, const Vec3& x,
                             const Vec3& xi) const {
  Vec3 mirrored = br == Branch::plus ? xi : Vec3(-xi);
  double bp = b_pm(metric, x, mirrored, Branch::plus);
  double window = step_up(bp, 0.5, 1.0);
  if (window == 0.0) return 0.0;
  double q1 = q1_plus(t, x, mirrored / bp);
  double q2 = nontrap.q2(x, mirrored);
  return std::exp(-sigma * (q1 + q2)) * window;
}

double CombinedEscape::q(const PhasePoint& w) const {
  double bp = b_pm(metric, w.x, w.xi, Branch::plus);
  double bm = b_pm(metric, w.x, w.xi, Branch::minus);
  double qp = q_gt1(Branch::plus, w.t, w.x, w.xi);
  double qm = q_gt1(Branch::minus, w.t, w.x, w.xi);
  return (w.tau - bp) * qm + (w.tau - bm) * qp;
}

CombinedEscape::Master CombinedEscape::master_at(const PhasePoint& w) const {
  Master out;
  double bp = b_pm(metric, w.x, w.xi, Branch::plus);
  double bm = b_pm(metric, w.x, w.xi, Branch::minus);
  out.bp = bp;
  out.bm = bm;
  double gap2 = (bp - bm) * (bp - bm);
  if (gap2 < 1e-12 * w.xi.squaredNorm())
    throw SingularCorrection("master_at: characteristic roots too close");

  const double nodes[3] = {bm, bp, 2.0 * bp - bm};
  double W[3];
  const double h = 1e-3;
  double a_val = damping.a(w.t, w.x);
  for (int i = 0; i < 3; ++i) {
    PhasePoint wn{w.t, w.x, nodes[i], w.xi};
    Trajectory traj =
        integrate_flow(metric, wn, FlowBranch::full_p, {-2.0 * h, 2.0 * h}, 1e-11);
    double qm2 = q(traj.at(-2.0 * h)), qm1 = q(traj.at(-h));
    double qp1 = q(traj.at(h)), qp2 = q(traj.at(2.0 * h));
    double hq = (qm2 - 8.0 * qm1 + 8.0 * qp1 - qp2) / (12.0 * h);
    W[i] = hq + 2.0 * kappa * nodes[i] * a_val * q(wn);
  }

  double d01 = (W[1] - W[0]) / (nodes[1] - nodes[0]);
  double d12 = (W[2] - W[1]) / (nodes[2] - nodes[1]);
  out.E = (d12 - d01) / (nodes[2] - nodes[0]);
  out.F = d01 - out.E * (nodes[0] + nodes[1]);
  out.G = W[0] - out.E * nodes[0] * nodes[0] - out.F * nodes[0];
  out.W_bm = W[0];
  out.W_bp = W[1];

  out.mtilde = -(out.F * (bp + bm) + 2.0 * out.E * bp * bm + 2.0 * out.G) / gap2;
  double g00 = metric.jet(w.x).g(0, 0);
  out.m = -out.mtilde / g00;

  // at the critical correction the discriminant collapses to a product of
  // the characteristic values, and the corrected quadratic evaluates stably
  // in Newton form anchored at the roots; both avoid the cancellation that
  // B^2 - 4AC suffers when W(b+) and W(b-) live on different scales
  out.discriminant = -4.0 / gap2 * out.W_bp * out.W_bm;
  out.master = out.W_bm + d01 * (w.tau - bm) +
               (out.E - out.mtilde) * (w.tau - bm) * (w.tau - bp);
  double br = jbracket(w.x);
  out.normalized = out.master * br * br * br * br /
                   (w.tau * w.tau + w.xi.squaredNorm());
  return out;
}

CombinedEscape combine_and_correct(const SpacetimeMetric& m,
                                   const DampingProfile& damping,
                                   std::vector<LocalEscapeTriple> triples,
                                   NontrapPieces nontrap, double sigma,
                                   double kappa) {
  if (damping.time_dependent)
    throw ConfigError(
        "combine_and_correct: time translates need stationary damping");
  CombinedEscape esc;
  esc.metric = m;
  esc.damping = damping;
  esc.nontrap = std::move(nontrap);
  esc.triples = std::move(triples);
  esc.sigma = sigma;
  esc.kappa = kappa;
  double T2 = 0.0;
  for (const auto& tr : esc.triples) T2 = std::max(T2, tr.T2);
  // with an empty cover (no trapping) any period works; pick unity
  esc.T2 = T2 > 0.0 ? T2 : 1.0;
  int worst = 0;
  for (const auto& tr : esc.triples) {
    double window = tr.large ? 2.0 : tr.Tw + 4.0;
    worst = std::max(worst, static_cast<int>(std::floor(window / T2)) + 1);
  }
  esc.max_active_translates = worst;
  if (worst > 5)
    throw ConfigError("combine_and_correct: more than five active translates");
  return esc;
}

MasterReport verify_master_inequality(const CombinedEscape& esc, int n_samples,
                                      std::uint64_t seed, double x_max,
                                      double xi_hi) {
  // samples are drawn serially so the point set depends only on the seed;
  // evaluation is spread over a bounded pool and reduced in index order
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<PhasePoint> pts(n_samples);
  for (int i = 0; i < n_samples; ++i) {
    Vec3 xd(gauss(rng), gauss(rng), gauss(rng));
    if (xd.norm() < 1e-12) xd = Vec3(1, 0, 0);
    Vec3 x = xd / xd.norm() * x_max * std::cbrt(unif(rng));
    Vec3 kd(gauss(rng), gauss(rng), gauss(rng));
    if (kd.norm() < 1e-12) kd = Vec3(0, 1, 0);
    Vec3 xi = kd / kd.norm() * (1.0 + (xi_hi - 1.0) * unif(rng));
    double tau = (1.0 + (xi_hi - 1.0) * unif(rng)) * (unif(rng) < 0.5 ? -1.0 : 1.0);
    double t = esc.T2 * unif(rng);
    pts[i] = PhasePoint{t, x, tau, xi};
  }

  std::vector<double> norm_vals(n_samples), discs(n_samples);
  unsigned pool = std::max(1u, std::min(8u, std::thread::hardware_concurrency()));
  std::exception_ptr first_error;
  std::mutex err_mu;
  std::atomic<int> next{0};
  auto work = [&]() {
    for (;;) {
      int i = next.fetch_add(1);
      if (i >= n_samples) return;
      try {
        CombinedEscape::Master mv = esc.master_at(pts[i]);
        norm_vals[i] = mv.normalized;
        discs[i] = mv.discriminant;
      } catch (...) {
        std::lock_guard<std::mutex> lk(err_mu);
        if (!first_error) first_error = std::current_exception();
        norm_vals[i] = 0.0;
        discs[i] = 0.0;
      }
    }
  };
  std::vector<std::thread> threads;
  for (unsigned k = 1; k < pool; ++k) threads.emplace_back(work);
  work();
  for (auto& th : threads) th.join();
  if (first_error) std::rethrow_exception(first_error);

  MasterReport rep;
  rep.n_samples = n_samples;
  rep.min_normalized = std::numeric_limits<double>::infinity();
  rep.max_discriminant = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < n_samples; ++i) {
    if (norm_vals[i] < rep.min_normalized) {
      rep.min_normalized = norm_vals[i];
      rep.witness = pts[i];
    }
    rep.max_discriminant = std::max(rep.max_discriminant, discs[i]);
  }
  rep.positive = rep.min_normalized > 0.0 && rep.max_discriminant < 0.0;
  return rep;
}

namespace {

// sup over flowed tube samples of the branch-gap-weighted compensator sum
// against the damping, which fixes kappa = Ca sigma / 2
double measure_kappa_ratio(const SpacetimeMetric& m,
                           const DampingProfile& damping,
                           const std::vector<LocalEscapeTriple>& triples,
                           double T2) {
  auto A_total = [&](const PhasePoint& w) {
    double total = 0.0;
    for (const auto& tr : triples) {
      double base = w.t - tr.omega.t;
      double w_lo = tr.large ? -1.0 : -2.0;
      double w_hi = tr.large ? 1.0 : tr.Tw + 2.0;
      int k_lo = static_cast<int>(std::ceil((base - w_hi) / T2));
      int k_hi = static_cast<int>(std::floor((base - w_lo) / T2));
      for (int k = k_lo; k <= k_hi; ++k)
        total += tr.A_ambient({w.t - k * T2, w.x, w.tau, w.xi});
    }
    return total;
  };

  double worst = 0.0;
  for (const auto& tr : triples) {
    std::vector<PhasePoint> pts;
    if (tr.large) {
      for (int i = 0; i <= 16; ++i)
        pts.push_back({tr.omega.t - 1.0 + 2.0 * i / 16.0, tr.omega.x, 1.0,
                       tr.omega.xi});
    } else {
      std::vector<Vec3> offs{Vec3::Zero()};
      for (int ax = 0; ax < 3; ++ax)
        for (int sgn : {-1, 1}) {
          Vec3 o = Vec3::Zero();
          o[ax] = sgn * tr.r0;
          offs.push_back(o);
        }
      for (int i = 0; i <= 40; ++i) {
        double s = -2.0 + (tr.Tw + 4.0) * i / 40.0;
        for (const Vec3& o : offs)
          pts.push_back(tr.chart.forward(s, tr.omega.x + o, tr.omega.xi));
      }
    }
    for (const auto& w : pts) {
      double At = A_total(w);
      if (At == 0.0) continue;
      double a_val = damping.a(w.t, w.x);
      if (a_val <= 1e-12) {
        std::ostringstream os;
        os << "kappa measurement: compensator active where the damping "
           << "vanishes, at t = " << w.t << " |x| = " << w.x.norm();
        throw InequalityViolated(os.str());
      }
      double bp = b_pm(m, w.x, w.xi, Branch::plus);
      double bm = b_pm(m, w.x, w.xi, Branch::minus);
      double gapw = (bp - bm) / (2.0 * std::min(bp, -bm));
      worst = std::max(worst, gapw * At / a_val);
    }
  }
  return worst;
}

}  // namespace

EscapeSearchResult search_escape_function(const SpacetimeMetric& m,
                                          const DampingProfile& damping,
                                          const std::vector<PhasePoint>& omegas,
                                          EscapeConstants consts,
                                          const AnnulusDecomposition& decomp,
                                          int n_samples, std::uint64_t seed,
                                          double x_max) {
  std::vector<LocalEscapeTriple> cover =
      build_trapped_cover(m, damping, omegas, consts);
  const double R = m.R0 + 0.4;
  // the branch-gap-weighted need is kappa >= sigma * ratio, so with
  // kappa = Ca sigma / 2 the measured ratio enters doubled, with margin
  double Ca = 2.5 * measure_kappa_ratio(m, damping, cover, consts.T2);
  Ca = std::max(Ca, 1e-3);

  EscapeSearchResult res;
  res.sigma_steps = 0;
  for (double sigma = 8.0; sigma <= 1024.0; sigma *= 2.0) {
    ++res.sigma_steps;
    NontrapPieces nt = build_nontrapping(m, decomp, damping, sigma, R);
    double kappa = 0.5 * Ca * sigma;
    res.escape = combine_and_correct(m, damping, cover, nt, sigma, kappa);
    res.escape.Ca = Ca;
    res.report = verify_master_inequality(res.escape, n_samples, seed, x_max);
    if (res.report.positive) return res;
  }
  return res;
}

}  // namespace geoctrl
