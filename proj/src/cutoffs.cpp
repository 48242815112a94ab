#include "geoctrl/cutoffs.hpp"

#include <array>
#include <cassert>
#include <vector>

namespace geoctrl {

namespace {

double bump(double s) {
  if (std::abs(s) >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - s * s));
}

double bump_d1(double s) {
  if (std::abs(s) >= 1.0) return 0.0;
  const double w = 1.0 - s * s;
  return bump(s) * (-2.0 * s / (w * w));
}

struct StepTable {
  static constexpr int kCells = 4096;
  double h;
  double inv_norm;                       // 1/I0
  double norm;                           // I0
  std::vector<double> value;             // S at knots, kCells+1 entries
  std::vector<double> slope;             // S' at knots

  StepTable() {
    // 5-point Gauss-Legendre nodes/weights on [0,1]
    static const std::array<double, 5> gx = {
        0.04691007703066800360, 0.23076534494715845448, 0.5,
        0.76923465505284154552, 0.95308992296933199640};
    static const std::array<double, 5> gw = {
        0.11846344252809454376, 0.23931433524968323402, 0.28444444444444444444,
        0.23931433524968323402, 0.11846344252809454376};

    h = 2.0 / kCells;
    std::vector<double> raw(kCells + 1, 0.0);
    for (int k = 0; k < kCells; ++k) {
      const double u0 = -1.0 + k * h;
      double cell = 0.0;
      for (int g = 0; g < 5; ++g) cell += gw[g] * bump(u0 + gx[g] * h);
      raw[k + 1] = raw[k] + cell * h;
    }
    norm = raw[kCells];
    inv_norm = 1.0 / norm;
    value.resize(kCells + 1);
    slope.resize(kCells + 1);
    for (int k = 0; k <= kCells; ++k) {
      value[k] = raw[k] * inv_norm;
      slope[k] = bump(-1.0 + k * h) * inv_norm;
    }
    value[kCells] = 1.0;
  }

  double eval(double u) const {
    if (u <= -1.0) return 0.0;
    if (u >= 1.0) return 1.0;
    double pos = (u + 1.0) / h;
    int k = static_cast<int>(pos);
    if (k >= kCells) k = kCells - 1;
    const double t = pos - k;
    const double t2 = t * t, t3 = t2 * t;
    const double h00 = 2 * t3 - 3 * t2 + 1;
    const double h10 = t3 - 2 * t2 + t;
    const double h01 = -2 * t3 + 3 * t2;
    const double h11 = t3 - t2;
    return h00 * value[k] + h10 * h * slope[k] + h01 * value[k + 1] + h11 * h * slope[k + 1];
  }
};

const StepTable& table() {
  static const StepTable t;
  return t;
}

}  // namespace

double bump_step(double u) { return table().eval(u); }

double bump_step_d1(double u) { return bump(u) * table().inv_norm; }

double bump_step_d2(double u) { return bump_d1(u) * table().inv_norm; }

double bump_step_norm() { return table().norm; }

double step_up(double r, double lo, double hi, int order) {
  assert(hi > lo);
  const double scale = 2.0 / (hi - lo);
  const double u = scale * (r - lo) - 1.0;
  switch (order) {
    case 0: return bump_step(u);
    case 1: return bump_step_d1(u) * scale;
    case 2: return bump_step_d2(u) * scale * scale;
    default: assert(false); return 0.0;
  }
}

double plateau(double r, double a, double b, double c, double d, int order) {
  const double up = step_up(r, a, b);
  const double dn = 1.0 - step_up(r, c, d);
  switch (order) {
    case 0: return up * dn;
    case 1:
      return step_up(r, a, b, 1) * dn - up * step_up(r, c, d, 1);
    case 2:
      return step_up(r, a, b, 2) * dn - 2.0 * step_up(r, a, b, 1) * step_up(r, c, d, 1) -
             up * step_up(r, c, d, 2);
    default: assert(false); return 0.0;
  }
}

double chi_lt(double r, double R, int order) {
  assert(R > 0.0);
  const double m = std::abs(r);
  const double sign = (r < 0.0) ? -1.0 : 1.0;
  const double scale = 2.0 / R;
  const double u = scale * m - 3.0;  // maps [R, 2R] to [-1, 1]
  switch (order) {
    case 0: return 1.0 - bump_step(u);
    case 1: return -bump_step_d1(u) * scale * sign;
    case 2: return -bump_step_d2(u) * scale * scale;
    default: assert(false); return 0.0;
  }
}

double chi_gt(double r, double R, int order) {
  if (order == 0) return 1.0 - chi_lt(r, R, 0);
  return -chi_lt(r, R, order);
}

double cutoff_eval(const SmoothCutoff& c, double r) { return cutoff_deriv(c, r, 0); }

double cutoff_deriv(const SmoothCutoff& c, double r, int order) {
  switch (c.kind) {
    case SmoothCutoff::Kind::radial_lt: return chi_lt(r, c.R, order);
    case SmoothCutoff::Kind::radial_gt: return chi_gt(r, c.R, order);
    case SmoothCutoff::Kind::annular:
      // supported in {R/2 <= |r| <= R}
      return plateau(std::abs(r), 0.5 * c.R, 0.625 * c.R, 0.875 * c.R, c.R, order) *
             ((order == 1 && r < 0.0) ? -1.0 : 1.0);
    case SmoothCutoff::Kind::interval: return plateau(r, c.a, c.b, c.c, c.d, order);
  }
  return 0.0;
}

}  // namespace geoctrl
