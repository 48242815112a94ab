#include "geoctrl/trapping.hpp"

#include <cmath>
#include <cstdio>
#include <random>

#include "geoctrl/errors.hpp"
#include "geoctrl/halfwave.hpp"

namespace geoctrl {

namespace {

// forward = +1 or backward = -1 leg of the classification run
struct Leg {
  TrapVerdict verdict;
  double s_reached;
  double radius;
};

Leg run_leg(const SpacetimeMetric& m, const PhasePoint& w0, Branch br,
            double R_eff, double s_max, double dir, double tol) {
  auto rhs = [&m, br](double, const Vec8& y) { return halfwave_rhs(m, y, br); };
  const double xi0 = w0.xi.norm();
  Leg leg{TrapVerdict::trapped, s_max, 0.0};
  auto stop = [&](double s, const Vec8& y) {
    const double n = y.segment<3>(5).norm();
    if (n < 1e-8 * xi0 || n > 1e8 * xi0)
      throw BlowUp("fiber norm left the admissible range");
    const double r = y.segment<3>(1).norm();
    if (r >= R_eff) {
      leg.verdict = TrapVerdict::escaping;
      leg.s_reached = std::abs(s);
      leg.radius = r;
      return true;
    }
    return false;
  };
  OdeOptions opt;
  opt.rtol = tol;
  opt.atol = tol;
  integrate_dopri5<8>(rhs, w0.pack(), 0.0, dir * s_max, opt, stop);
  return leg;
}

}  // namespace

TrapClass classify(const SpacetimeMetric& m, const PhasePoint& w0, Branch br,
                   double R, double s_max, double tol) {
  const double R_eff = std::max(R, w0.x.norm());
  const Leg f = run_leg(m, w0, br, R_eff, s_max, +1.0, tol);
  const Leg b = run_leg(m, w0, br, R_eff, s_max, -1.0, tol);
  TrapClass out;
  out.forward = f.verdict;
  out.backward = b.verdict;
  out.horizon_used = std::max(f.s_reached, b.s_reached);
  if (f.verdict == TrapVerdict::escaping)
    out.escape_radius = f.radius;
  else if (b.verdict == TrapVerdict::escaping)
    out.escape_radius = b.radius;
  return out;
}

bool photon_sphere_trapped(const SpacetimeMetric& m, const Vec3& x, const Vec3& xi) {
  if (!m.has_photon_sphere) return false;
  const double r = x.norm();
  if (r > m.r_unstable || r <= 0.0) return false;
  const double xn = xi.norm();
  if (xn == 0.0) return false;
  const double sin_angle = x.cross(xi).norm() / (r * xn);
  return (r / m.isotropic_c(r)) * sin_angle > m.u_min;
}

std::vector<PhasePoint> sample_trapped_set(const SpacetimeMetric& m, int n,
                                           double s_max, std::uint64_t seed) {
  std::vector<PhasePoint> out;
  if (!m.has_photon_sphere) throw EmptyTrappedSet("metric has no trapped orbits");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double R = 2.0 * m.R0;

  auto rand_unit = [&]() {
    // uniform direction via z and azimuth
    const double z = 2.0 * unit(rng) - 1.0;
    const double phi = 2.0 * M_PI * unit(rng);
    const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
    return Vec3(rho * std::cos(phi), rho * std::sin(phi), z);
  };

  const long attempts_cap = 200L * std::max(1, n);
  for (long attempt = 0; attempt < attempts_cap && (int)out.size() < n; ++attempt) {
    // orbit plane with random orientation, radius inside the trapped band
    const Vec3 nhat = rand_unit();
    Vec3 e1 = nhat.cross(std::abs(nhat(0)) < 0.9 ? Vec3::UnitX() : Vec3::UnitY());
    e1.normalize();
    const Vec3 e2 = nhat.cross(e1);
    const double r = m.r_unstable - 0.001 - 0.09 * unit(rng);
    const Vec3 x = r * e1;
    // near-tangent direction with a small out-of-plane tilt
    const double del = 0.02 * (2.0 * unit(rng) - 1.0);
    const double eta = 2.0 * M_PI * unit(rng);
    const Vec3 dir =
        (std::cos(del) * e2 + std::sin(del) * (std::cos(eta) * e1 + std::sin(eta) * nhat))
            .normalized();
    if (!photon_sphere_trapped(m, x, dir)) continue;

    PhasePoint w = phi_rescale(m, project_to_char(m, 0.0, x, dir, Branch::plus),
                               Branch::plus);
    const TrapClass tc = classify(m, w, Branch::plus, R, s_max);
    if (tc.forward == TrapVerdict::trapped && tc.backward == TrapVerdict::trapped)
      out.push_back(w);
  }
  if ((int)out.size() < n)
    throw EmptyTrappedSet("trapped-set sampling exhausted its attempt budget");
  return out;
}

void write_phase_points_csv(const std::vector<PhasePoint>& pts,
                            const std::string& path) {
  std::FILE* fp = std::fopen(path.c_str(), "w");
  if (!fp) throw ConfigError("cannot open CSV for writing: " + path);
  std::fprintf(fp, "t,x1,x2,x3,tau,xi1,xi2,xi3\n");
  for (const auto& w : pts)
    std::fprintf(fp, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", w.t,
                 w.x(0), w.x(1), w.x(2), w.tau, w.xi(0), w.xi(1), w.xi(2));
  std::fclose(fp);
}

}  // namespace geoctrl
