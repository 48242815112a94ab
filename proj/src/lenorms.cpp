#include "geoctrl/lenorms.hpp"

#include <algorithm>

#include "geoctrl/errors.hpp"

namespace geoctrl {

int max_annulus_for_box(double L) {
  const double corner = jbracket_r(std::sqrt(3.0) * L);
  return annulus_range(corner).second;
}

namespace {

// per-annulus accumulation of sum_cells w_x u^2 h^3 with time weights
std::vector<double> annulus_integrals(const GridFunction& u, double weight_exp) {
  const SpatialGrid& g = u.grid;
  const int jmax = max_annulus_for_box(g.L);
  std::vector<double> I(jmax + 1, 0.0);
  if (u.values.empty()) return I;
  const size_t nt = u.times.size();
  if (u.values.size() != nt)
    throw ConfigError("grid function has mismatched times/values");
  const double dt = nt > 1 ? u.times[1] - u.times[0] : 1.0;
  const double h3 = g.h() * g.h() * g.h();

  // spatial weights and memberships depend only on the cell
  std::vector<double> wcell(g.ncells());
  std::vector<std::pair<int, int>> jcell(g.ncells());
  for (int k = 0; k < g.n; ++k)
    for (int j = 0; j < g.n; ++j)
      for (int i = 0; i < g.n; ++i) {
        const long c = g.index(i, j, k);
        const double jx = jbracket(g.center(i, j, k));
        wcell[c] = std::pow(jx, 2.0 * weight_exp);
        jcell[c] = annulus_range(jx);
      }

  for (size_t it = 0; it < nt; ++it) {
    const double tw = (nt == 1) ? 1.0 : ((it == 0 || it == nt - 1) ? 0.5 * dt : dt);
    const std::vector<double>& v = u.values[it];
    if ((long)v.size() != g.ncells())
      throw ConfigError("grid function slice has wrong cell count");
    for (long c = 0; c < g.ncells(); ++c) {
      const double contrib = tw * h3 * wcell[c] * v[c] * v[c];
      for (int jj = jcell[c].first; jj <= std::min(jcell[c].second, jmax); ++jj)
        I[jj] += contrib;
    }
  }
  return I;
}

}  // namespace

double le_norm(const GridFunction& u, double weight_exponent) {
  const auto I = annulus_integrals(u, weight_exponent);
  double worst = 0.0;
  for (double v : I) worst = std::max(worst, v);
  return std::sqrt(worst);
}

double le1_norm(const GridFunction& u, const GridFunction& du_mag) {
  return le_norm(du_mag, -0.5) + le_norm(u, -1.5);
}

double lestar_norm(const GridFunction& f) {
  const auto I = annulus_integrals(f, 0.5);
  double total = 0.0;
  for (double v : I) total += std::sqrt(v);
  return total;
}

double l2l2_norm(const GridFunction& u) {
  const SpatialGrid& g = u.grid;
  const size_t nt = u.times.size();
  const double dt = nt > 1 ? u.times[1] - u.times[0] : 1.0;
  const double h3 = g.h() * g.h() * g.h();
  double total = 0.0;
  for (size_t it = 0; it < nt; ++it) {
    const double tw = (nt == 1) ? 1.0 : ((it == 0 || it == nt - 1) ? 0.5 * dt : dt);
    double slice = 0.0;
    for (double v : u.values[it]) slice += v * v;
    total += tw * h3 * slice;
  }
  return std::sqrt(total);
}

}  // namespace geoctrl
