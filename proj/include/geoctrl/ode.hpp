#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "geoctrl/errors.hpp"
#include "geoctrl/types.hpp"

namespace geoctrl {

// Dormand-Prince 5(4) with cubic-quartic dense output.  Fixed compile-time
// state dimension keeps everything stack-allocated inside the step loop.

template <int N>
struct DenseStep {
  using VecN = Eigen::Matrix<double, N, 1>;
  double s0 = 0.0, h = 0.0;
  Eigen::Matrix<double, N, 5> rcont;

  VecN eval(double s) const {
    const double th = (s - s0) / h;
    const double th1 = 1.0 - th;
    return rcont.col(0) +
           th * (rcont.col(1) +
                 th1 * (rcont.col(2) + th * (rcont.col(3) + th1 * rcont.col(4))));
  }
};

template <int N>
struct OdeSolution {
  using VecN = Eigen::Matrix<double, N, 1>;
  std::vector<DenseStep<N>> steps;  // ordered by traversal
  double s_begin = 0.0, s_end = 0.0;
  bool stopped_early = false;

  VecN eval(double s) const {
    if (steps.empty()) throw SpanTooShort("empty dense solution");
    // steps traverse monotonically in either direction
    const bool fwd = steps.front().h > 0;
    int lo = 0, hi = (int)steps.size() - 1;
    while (lo < hi) {
      const int mid = (lo + hi) / 2;
      const double end = steps[mid].s0 + steps[mid].h;
      if (fwd ? (s <= end) : (s >= end))
        hi = mid;
      else
        lo = mid + 1;
    }
    return steps[lo].eval(s);
  }

  const VecN last() const {
    return steps.back().eval(s_end);
  }
};

struct OdeOptions {
  double rtol = 1e-9;
  double atol = 1e-9;
  double h_init = 0.0;  // 0 picks from span
  int max_steps = 2000000;
};

template <int N, class RHS>
OdeSolution<N> integrate_dopri5(
    RHS&& f, const Eigen::Matrix<double, N, 1>& y0, double s0, double s1,
    const OdeOptions& opt = {},
    const std::function<bool(double, const Eigen::Matrix<double, N, 1>&)>& stop =
        nullptr) {
  using VecN = Eigen::Matrix<double, N, 1>;

  static const double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static const double a21 = 1.0 / 5;
  static const double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static const double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static const double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                      a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static const double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                      a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                      a65 = -5103.0 / 18656;
  static const double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                      a75 = -2187.0 / 6784, a76 = 11.0 / 84;
  static const double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                      e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
  static const double d1 = -12715105075.0 / 11282082432.0,
                      d3 = 87487479700.0 / 32700410799.0,
                      d4 = -10690763975.0 / 1880347072.0,
                      d5 = 701980252875.0 / 199316789632.0,
                      d6 = -1453857185.0 / 822651844.0,
                      d7 = 69997945.0 / 29380423.0;

  OdeSolution<N> sol;
  sol.s_begin = s0;
  sol.s_end = s0;
  if (s1 == s0) throw SpanTooShort("zero-length integration span");
  const double dir = s1 > s0 ? 1.0 : -1.0;

  double s = s0;
  VecN y = y0;
  VecN k1 = f(s, y);
  double h = opt.h_init != 0.0 ? std::abs(opt.h_init) : std::abs(s1 - s0) / 100.0;
  h = std::min(h, std::abs(s1 - s0));

  for (int it = 0; it < opt.max_steps; ++it) {
    if (dir * (s - s1) >= 0.0) break;
    h = std::min(h, std::abs(s1 - s));
    if (h < 1e-14 * std::max(1.0, std::abs(s)))
      throw StepFailure("step size underflow");
    const double hd = dir * h;

    const VecN k2 = f(s + c2 * hd, (y + hd * (a21 * k1)).eval());
    const VecN k3 = f(s + c3 * hd, (y + hd * (a31 * k1 + a32 * k2)).eval());
    const VecN k4 = f(s + c4 * hd, (y + hd * (a41 * k1 + a42 * k2 + a43 * k3)).eval());
    const VecN k5 = f(s + c5 * hd,
                      (y + hd * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4)).eval());
    const VecN k6 =
        f(s + hd,
          (y + hd * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5)).eval());
    const VecN y1 =
        y + hd * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
    const VecN k7 = f(s + hd, y1);

    const VecN err_vec =
        hd * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    double err = 0.0;
    for (int i = 0; i < N; ++i) {
      const double sc =
          opt.atol + opt.rtol * std::max(std::abs(y[i]), std::abs(y1[i]));
      err += sq(err_vec[i] / sc);
    }
    err = std::sqrt(err / N);

    if (err <= 1.0) {
      DenseStep<N> st;
      st.s0 = s;
      st.h = hd;
      st.rcont.col(0) = y;
      st.rcont.col(1) = y1 - y;
      st.rcont.col(2) = hd * k1 - st.rcont.col(1);
      st.rcont.col(3) = st.rcont.col(1) - hd * k7 - st.rcont.col(2);
      st.rcont.col(4) =
          hd * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);
      sol.steps.push_back(st);
      s += hd;
      y = y1;
      k1 = k7;  // first-same-as-last
      sol.s_end = s;
      if (stop && stop(s, y)) {
        sol.stopped_early = true;
        return sol;
      }
      const double fac =
          err == 0.0 ? 5.0
                     : std::min(5.0, std::max(0.2, 0.9 * std::pow(err, -0.2)));
      h *= fac;
    } else {
      h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
    }
  }
  if (dir * (s - s1) < 0.0) throw StepFailure("max step count exceeded");
  return sol;
}

}  // namespace geoctrl
