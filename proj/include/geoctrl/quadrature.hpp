#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <utility>
#include <vector>

#include "geoctrl/errors.hpp"

namespace geoctrl {

// 7-15 Gauss-Kronrod pair on [a, b]: returns (K15 value, error estimate)
inline std::pair<double, double> gk15(const std::function<double(double)>& f,
                                      double a, double b) {
  static const double xk[8] = {0.991455371120813, 0.949107912342759,
                               0.864864423359769, 0.741531185599394,
                               0.586087235467691, 0.405845151377397,
                               0.207784955007898, 0.0};
  static const double wk[8] = {0.022935322010529, 0.063092092629979,
                               0.104790010322250, 0.140653259715525,
                               0.169004726639267, 0.190350578064785,
                               0.204432940075298, 0.209482141084728};
  static const double wg[4] = {0.129484966168870, 0.279705391489277,
                               0.381830050505119, 0.417959183673469};
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double k = 0.0, g = 0.0;
  for (int i = 0; i < 8; ++i) {
    const double fp = f(c + h * xk[i]);
    const double fm = i == 7 ? fp : f(c - h * xk[i]);
    const double pair_sum = i == 7 ? fp : fp + fm;
    k += wk[i] * pair_sum;
    if (i % 2 == 1) g += wg[i / 2] * pair_sum;
  }
  k *= h;
  g *= h;
  return {k, std::abs(k - g)};
}

// Adaptive bisection on the worst subinterval until the summed error
// estimate is below abs_tol.
inline double adaptive_quadrature(const std::function<double(double)>& f,
                                  double a, double b, double abs_tol,
                                  int max_splits = 4000) {
  if (a == b) return 0.0;
  struct Piece {
    double a, b, val, err;
  };
  std::vector<Piece> pieces;
  auto first = gk15(f, a, b);
  pieces.push_back({a, b, first.first, first.second});
  double total_err = first.second;
  for (int it = 0; it < max_splits && total_err > abs_tol; ++it) {
    size_t worst = 0;
    for (size_t i = 1; i < pieces.size(); ++i)
      if (pieces[i].err > pieces[worst].err) worst = i;
    Piece p = pieces[worst];
    const double mid = 0.5 * (p.a + p.b);
    auto left = gk15(f, p.a, mid);
    auto right = gk15(f, mid, p.b);
    total_err += left.second + right.second - p.err;
    pieces[worst] = {p.a, mid, left.first, left.second};
    pieces.push_back({mid, p.b, right.first, right.second});
  }
  if (total_err > 100.0 * std::max(abs_tol, 1e-300))
    throw StepFailure("adaptive quadrature failed to converge");
  double total = 0.0;
  for (const auto& p : pieces) total += p.val;
  return total;
}

}  // namespace geoctrl
