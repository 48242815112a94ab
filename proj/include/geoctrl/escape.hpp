#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "geoctrl/annuli.hpp"
#include "geoctrl/damping.hpp"
#include "geoctrl/flow.hpp"
#include "geoctrl/halfwave.hpp"
#include "geoctrl/metrics.hpp"
#include "geoctrl/types.hpp"

namespace geoctrl {

/*
 * Escape-function construction for the damped wave operator.
 *
 * The combined symbol is assembled from three layers:
 *
 *   1. local pieces q_w = alpha(s) phi(z) chi(zeta) attached to trapped base
 *      points w, expressed in product coordinates (s, z, zeta) that follow
 *      the plus flow, together with compensators A_w and floor terms r_w
 *      satisfying  H q_w + A_w - r_w >= 0  pointwise;
 *   2. non-trapping pieces q_out (radial, weighted by a slowly varying
 *      integrating factor f) and q_in (forward dwell time in a band-avoiding
 *      window psi) that are positive along the flow away from the trapped
 *      set;
 *   3. exponentiation q_{>1} = exp(-sigma (q_1 + q_2)) per half-wave branch
 *      and the combination  q = (tau - b+) qm_{>1} + (tau - b-) qp_{>1},
 *      which is linear in tau, followed by the quadratic-in-tau correction
 *      term m p that maximizes the discriminant margin.
 *
 * Everything is verified pointwise by flow differentiation; no operator
 * estimates are involved.
 */

// Scenario constants shared by the local construction.  Cstar is the global
// down-ramp slope bound; it is measured during the cover build and written
// back.  r0 is the chart radius (half the validated oscillation radius).
struct EscapeConstants {
  double Cbar2 = 0.0;
  double T2 = 0.0;
  double eps = 0.0;
  double eps1 = 0.0;
  double Cstar = 0.0;
  double r0 = 0.0;
};

// Product coordinates along the plus flow: the slice point (base.t, z, 1,
// zeta) is flowed for time s, so s = t - base.t exactly.  The inverse flows
// a tau-normalized point back to the slice.  Built by product_coords, which
// round-trips a lattice in B(base.x, 2 r0) x B(base.xi, 2 r0) and refuses
// charts with round-trip error above 1e-6.
struct ProductChart {
  SpacetimeMetric metric;
  PhasePoint base;
  double r0 = 0.0;
  double s_lo = 0.0, s_hi = 0.0;
  double tol = 1e-10;
  Trajectory axis;
  // measured spread of the lattice images around the axis, used to prune
  // ambient points that cannot lie in the chart's range
  double tube_x = 0.0, tube_xi = 0.0;

  PhasePoint forward(double s, const Vec3& z, const Vec3& zeta) const;
  // w must have tau == 1 after plus-normalization; returns false when
  // w.t - base.t falls outside [s_lo, s_hi]
  bool inverse(const PhasePoint& w, double& s, Vec3& z, Vec3& zeta) const;
};

ProductChart product_coords(const SpacetimeMetric& m, const PhasePoint& base,
                            double r0, double s_lo, double s_hi);

// Largest eta in (0, 1] such that, for every sample w and every s in
// [s_lo, s_hi], the damping oscillates by at most Cbar2 / 4 over the image
// of B(w_x, eta) x B(w_xi, eta) under the plus flow, located by bisection
// against a deterministic ball lattice; returns eta / 2.  A constant
// oscillation of zero at eta = 1 returns 1.  NoRadius when even the
// smallest probed eta fails.
double r0_search(const SpacetimeMetric& m, const DampingProfile& damping,
                 const std::vector<PhasePoint>& samples, double Cbar2,
                 double s_lo, double s_hi);

// One-variable profile alpha used along the flow direction of a local piece:
//   alpha(s) = Cbar2 s - int_0^s a(gamma) + eps^2        on [0, Tw],
// extended by a quadratic on [-eps1, 0] that keeps alpha' >= Cbar2/4, a
// monotone cubic down to alpha(-1) = 0, and a nonnegative cubic ramp to
// alpha(Tw + eps) = 0.  Slopes: alpha' >= 0 on [-1, 0], >= Cbar2/4 on
// [-eps1, eps1], = Cbar2 - a(gamma(s)) on [0, Tw], >= -Cstar on the ramp.
struct AlphaFunction {
  double Tw = 0.0, eps = 0.0, eps1 = 0.0, Cbar2 = 0.0;
  double d0 = 0.0;         // alpha'(0+) = Cbar2 - a(base)
  double beta = 0.0;       // quadratic coefficient on [-eps1, 0]
  double A1 = 0.0;         // alpha(-eps1)
  double slope_end = 0.0;  // alpha'(Tw) = Cbar2 - a(gamma(Tw)) <= 0
  std::vector<double> s_nodes, vals, ders;  // Hermite table on [0, Tw]

  double value(double s) const;
  double deriv(double s) const;
};

AlphaFunction build_alpha(const Trajectory& axis, const DampingProfile& damping,
                          double Cbar2, double Tw, double eps, double eps1);

// A local escape triple at a trapped base point.  Small-damping points
// (a(w) < Cbar2/2) carry the full (alpha, chart) construction; points with
// a(w) >= Cbar2/2 use the large-damping variant with q == 0, a pure time
// window A = a psi_t, and a ball floor r of radius r1.
struct LocalEscapeTriple {
  SpacetimeMetric metric;
  DampingProfile damping;
  PhasePoint omega;
  bool large = false;
  double Cbar2 = 0.0, T2 = 0.0, eps = 0.0, eps1 = 0.0;
  double Tw = 0.0;        // first control time (small variant)
  double a_omega = 0.0;   // damping at the base point
  double r0 = 0.0, r1 = 0.0;
  double Cstar = 0.0;     // written back after the cover-wide measurement
  AlphaFunction alpha;
  ProductChart chart;

  double s_begin() const { return -1.0; }
  double s_end() const { return Tw + eps; }

  // chart-coordinate evaluators (small variant; zeros for the large one)
  double phi_chi(const Vec3& z, const Vec3& zeta) const;
  double q_chart(double s, const Vec3& z, const Vec3& zeta) const;
  double Hq_chart(double s, const Vec3& z, const Vec3& zeta) const;
  double A_chart(double s, const Vec3& z, const Vec3& zeta) const;
  double r_chart(double s, const Vec3& z, const Vec3& zeta) const;

  // ambient evaluators; w must be plus-normalized (tau = 1) for the small
  // variant.  The large variant only reads (t, x).
  double q_ambient(const PhasePoint& w) const;
  double A_ambient(const PhasePoint& w) const;
};

LocalEscapeTriple build_local_triple(const SpacetimeMetric& m,
                                     const DampingProfile& damping,
                                     const PhasePoint& omega,
                                     const EscapeConstants& consts);

// Per-triple pointwise check of H q + A - r >= 0 on uniform chart samples
// (ambient ball samples for the large variant), plus the domination bound
// A <= 4 (1 + Cstar/Cbar2) a at flowed sample points.
struct TripleCheck {
  double min_residual = 0.0;
  double max_A_over_a = 0.0;  // over points with a > 0
  double s_at = 0.0;
  Vec3 z_at = Vec3::Zero(), zeta_at = Vec3::Zero();
  int n_samples = 0;
};

TripleCheck verify_local_inequality(const LocalEscapeTriple& triple,
                                    int n_samples, std::uint64_t seed);

// Builds one triple per base point, measures the global down-ramp constant
// Cstar = max(0, -min alpha'), and writes it back into every triple and into
// consts.
std::vector<LocalEscapeTriple> build_trapped_cover(
    const SpacetimeMetric& m, const DampingProfile& damping,
    const std::vector<PhasePoint>& omegas, EscapeConstants& consts);

// Non-trapping radial pieces for the plus branch (the minus branch is the
// same object evaluated at (x, -xi)).
struct NontrapPieces {
  SpacetimeMetric metric;
  double R = 0.0;        // inner radius of q_out; q_in is cut at 2R
  double sigma = 0.0;
  double eps_in = 1.0;   // weight of q_in against q_out
  double s_cap = 400.0;  // dwell-integration horizon
  double d_in = 0.002, d_out = 0.01;  // band-avoidance margins of psi
  double flow_tol = 1e-8;
  // cumulative integrating factor: f(r) = exp(sigma F(r)) with F' = h given
  // by the smoothed tail c_j sequence divided by <r>
  std::vector<double> knots_r, knots_F, knots_h;
  std::vector<double> tail_cj;

  double f(double r) const;
  double f_prime(double r) const;

  // escape window: radial cutoff inside R, eroded around the trapped band
  double psi(const Vec3& x, const Vec3& xi) const;
  // forward dwell time int_0^inf psi(flow) ds from a normalized point;
  // terminates once |x| >= R with |x| nondecreasing, NoExit past s_cap
  double dwell(const Vec3& x, const Vec3& xi_normalized) const;

  double q_out(const Vec3& x, const Vec3& xi) const;
  double q_in(const Vec3& x, const Vec3& xi) const;
  double q2(const Vec3& x, const Vec3& xi) const;  // eps_in q_in + q_out
};

// Builds the integrating factor from the tail of the c_j sequence (radii
// beyond the asymptotic radius R0), checks the two-sided slow-variation
// window (sigma/2) c_j 2^{-j} f <= f' <= 8 sigma c_j 2^{-j} f on samples,
// and calibrates eps_in so the transition-shell error of q_in is at most
// half of the q_out positivity there.
NontrapPieces build_nontrapping(const SpacetimeMetric& m,
                                const AnnulusDecomposition& decomp,
                                const DampingProfile& damping, double sigma,
                                double R);

// The assembled symbol.  Time translates of each triple by integer
// multiples of T2 extend the construction to all times; at most five
// translates are active at any point.  Requires stationary damping.
struct CombinedEscape {
  SpacetimeMetric metric;
  DampingProfile damping;
  NontrapPieces nontrap;
  std::vector<LocalEscapeTriple> triples;
  double sigma = 0.0, kappa = 0.0;
  double Ca = 0.0;  // measured compensator-to-damping ratio, with margin
  double T2 = 0.0;
  int max_active_translates = 0;  // realized bound, must stay <= 5

  // trapped-layer sum at a plus-normalized point, over active translates
  double q1_plus(double t, const Vec3& x, const Vec3& xi_normalized) const;
  // exp(-sigma (q1 + q2)) window(|b|) for either branch via the mirror map
  double q_gt1(Branch br, double t, const Vec3& x, const Vec3& xi) const;
  // q = (tau - b+) qm_{>1} + (tau - b-) qp_{>1}
  double q(const PhasePoint& w) const;

  struct Master {
    double bp = 0.0, bm = 0.0;
    double E = 0.0, F = 0.0, G = 0.0;  // W(tau) = E tau^2 + F tau + G
    double W_bp = 0.0, W_bm = 0.0;
    double mtilde = 0.0, m = 0.0;
    double discriminant = 0.0;  // of the corrected quadratic, at mtilde
    double master = 0.0;        // W(tau_w) + m p(w)
    double normalized = 0.0;    // master / (<x>^{-4} (tau^2 + |xi|^2))
  };
  // W(tau) = H_p q + 2 kappa tau a q sampled at the three tau nodes
  // b-, b+, 2b+ - b- by five-point flow differentiation, then corrected by
  // the discriminant-critical multiple of p.  SingularCorrection when
  // (b+ - b-)^2 < 1e-12 |xi|^2.
  Master master_at(const PhasePoint& w) const;
};

CombinedEscape combine_and_correct(const SpacetimeMetric& m,
                                   const DampingProfile& damping,
                                   std::vector<LocalEscapeTriple> triples,
                                   NontrapPieces nontrap, double sigma,
                                   double kappa);

struct MasterReport {
  double min_normalized = 0.0;
  double max_discriminant = 0.0;  // must stay < 0
  PhasePoint witness;             // location of the minimum
  int n_samples = 0;
  bool positive = false;
};

// Pointwise verification over seeded samples with |xi|, |tau| in [1, xi_hi],
// |x| <= x_max, t in [0, T2].  A negative minimum is reported, not thrown.
MasterReport verify_master_inequality(const CombinedEscape& esc, int n_samples,
                                      std::uint64_t seed, double x_max,
                                      double xi_hi = 10.0);

struct EscapeSearchResult {
  CombinedEscape escape;
  MasterReport report;
  int sigma_steps = 0;
};

// Doubles sigma from 8 until the master inequality verifies (kappa keeps
// the measured proportion kappa = Ca sigma / 2), giving up past 2^10.
EscapeSearchResult search_escape_function(const SpacetimeMetric& m,
                                          const DampingProfile& damping,
                                          const std::vector<PhasePoint>& omegas,
                                          EscapeConstants consts,
                                          const AnnulusDecomposition& decomp,
                                          int n_samples, std::uint64_t seed,
                                          double x_max);

}  // namespace geoctrl
