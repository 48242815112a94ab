#include "geoctrl/annuli.hpp"

#include <algorithm>
#include <cmath>

#include "geoctrl/errors.hpp"

namespace geoctrl {

std::pair<double, double> annulus_r_bounds(int j) {
  const double lo2 = std::pow(2.0, j - 1) * std::pow(2.0, j - 1) - 1.0;
  const double hi2 = std::pow(2.0, j + 1) * std::pow(2.0, j + 1) - 1.0;
  return {std::sqrt(std::max(0.0, lo2)), std::sqrt(hi2)};
}

namespace {

std::vector<Vec3> fibonacci_sphere(int n) {
  std::vector<Vec3> pts;
  pts.reserve(n);
  const double ga = M_PI * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < n; ++i) {
    const double z = 1.0 - 2.0 * (i + 0.5) / n;
    const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = ga * i;
    pts.emplace_back(rho * std::cos(phi), rho * std::sin(phi), z);
  }
  return pts;
}

double frob(const Mat4& m) { return m.norm(); }

}  // namespace

std::vector<double> af_annulus_raws(const SpacetimeMetric& metric,
                                    const DampingProfile& damping,
                                    const AnnulusDecomposition& decomp,
                                    int samples_per_annulus, double r_min) {
  const int n_r = std::max(2, (int)std::lround(std::cbrt((double)samples_per_annulus)));
  const int n_s = (samples_per_annulus + n_r - 1) / n_r;
  const auto sphere = fibonacci_sphere(n_s);

  Mat4 mink = Mat4::Identity();
  mink(0, 0) = -1.0;

  std::vector<double> raws(decomp.J_max + 1, 0.0);
  for (int j = 0; j <= decomp.J_max; ++j) {
    auto [r_lo, r_hi] = annulus_r_bounds(j);
    r_lo = std::max(r_lo, r_min);
    if (r_lo >= r_hi) continue;  // annulus misses the restricted region
    double m0 = 0, m1 = 0, m2 = 0, a0 = 0, a1 = 0;
    for (int ir = 0; ir < n_r; ++ir) {
      const double r = r_lo + (r_hi - r_lo) * ir / (n_r - 1);
      for (const Vec3& dir : sphere) {
        const Vec3 x = r * dir;
        const double w = jbracket(x);
        const MetricJet J = metric.jet(x);
        if (!J.g.allFinite()) throw NonFiniteSample("metric sample not finite");
        if (J.g(0, 0) >= 0.0) throw DegenerateMetric("g^{00} >= 0 at AF sample");
        m0 = std::max(m0, frob(J.g - mink));
        double s1 = 0;
        for (int k = 0; k < 3; ++k) s1 += J.dg[k].squaredNorm();
        m1 = std::max(m1, w * std::sqrt(s1));
        const MetricSecond S = metric.second(x);
        double s2 = 0;
        for (int k = 0; k < 3; ++k)
          for (int l = k; l < 3; ++l)
            s2 += (k == l ? 1.0 : 2.0) * S[second_index(k, l)].squaredNorm();
        m2 = std::max(m2, w * w * std::sqrt(s2));
        const double av = damping.a(0.0, x);
        const Vec4 dav = damping.da(0.0, x);
        if (!std::isfinite(av) || !dav.allFinite())
          throw NonFiniteSample("damping sample not finite");
        a0 = std::max(a0, w * av);
        a1 = std::max(a1, w * w * dav.norm());
      }
    }
    raws[j] = m0 + m1 + m2 + a0 + a1;
  }
  return raws;
}

double af_norm(const SpacetimeMetric& metric, const DampingProfile& damping,
               const AnnulusDecomposition& decomp, int samples_per_annulus) {
  const auto raws = af_annulus_raws(metric, damping, decomp, samples_per_annulus);
  double total = 0.0;
  for (double r : raws) total += r;
  return total;
}

std::vector<double> majorize_slowly_varying(const std::vector<double>& raw,
                                            double delta, double c_floor) {
  const int n = (int)raw.size();
  std::vector<double> c(n, 0.0);
  for (int j = 0; j < n; ++j) {
    double best = c_floor * std::pow(2.0, -delta * j);
    for (int k = 0; k < n; ++k)
      best = std::max(best, raw[k] * std::pow(2.0, -delta * std::abs(k - j)));
    c[j] = best;
  }
  return c;
}

std::vector<double> cj_sequence(const SpacetimeMetric& metric,
                                const DampingProfile& damping,
                                const AnnulusDecomposition& decomp,
                                int samples_per_annulus) {
  const auto raws = af_annulus_raws(metric, damping, decomp, samples_per_annulus);
  return majorize_slowly_varying(raws, decomp.delta, decomp.c_floor);
}

}  // namespace geoctrl
