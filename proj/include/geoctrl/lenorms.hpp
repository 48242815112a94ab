#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "geoctrl/types.hpp"

namespace geoctrl {

// Cell-centered uniform lattice on [-L, L]^3: x_i = -L + (i + 1/2) h.
struct SpatialGrid {
  double L = 1.0;
  int n = 16;

  double h() const { return 2.0 * L / n; }
  long ncells() const { return (long)n * n * n; }
  long index(int i, int j, int k) const { return i + (long)n * (j + (long)n * k); }
  Vec3 center(int i, int j, int k) const {
    const double hh = h();
    return Vec3(-L + (i + 0.5) * hh, -L + (j + 0.5) * hh, -L + (k + 0.5) * hh);
  }
};

// Scalar samples over a list of time slices.  For the first-order norm the
// caller supplies the pointwise 4-component magnitude |du| as its own
// GridFunction.
struct GridFunction {
  SpatialGrid grid;
  std::vector<double> times;
  std::vector<std::vector<double>> values;  // [time][cell]
};

// indices j with 2^{j-1} <= <x> <= 2^{j+1}, clamped at j >= 0
inline std::pair<int, int> annulus_range(double jx) {
  const double l = std::log2(jx);
  int lo = (int)std::ceil(l - 1.0);
  int hi = (int)std::floor(l + 1.0);
  if (lo < 0) lo = 0;
  return {lo, hi};
}

// largest annulus index met by the box [-L, L]^3
int max_annulus_for_box(double L);

// sup over annuli j of || <x>^w u ||_{L^2_t L^2_x(A_j)}, trapezoid in time
double le_norm(const GridFunction& u, double weight_exponent = -0.5);

// LE(|du|) + le_norm(u, -3/2)
double le1_norm(const GridFunction& u, const GridFunction& du_mag);

// sum over annuli of || <x>^{1/2} f ||_{L^2_t L^2_x(A_j)}
double lestar_norm(const GridFunction& f);

double l2l2_norm(const GridFunction& u);

}  // namespace geoctrl
