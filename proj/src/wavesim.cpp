#include "geoctrl/wavesim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>

#include "geoctrl/cutoffs.hpp"
#include "geoctrl/errors.hpp"

namespace geoctrl {

namespace {

// spatial speed^2 from the (diagonal) metric block; also validates the
// product-form restriction at this point
double cell_speed2(const SpacetimeMetric& metric, const Vec3& x) {
  const Mat4 g = metric.jet(x).g;
  if (std::abs(g(0, 0) + 1.0) > 1e-10)
    throw ConfigError("wave solver needs g^{00} = -1");
  for (int j = 0; j < 3; ++j)
    if (std::abs(g(0, 1 + j)) > 1e-12)
      throw ConfigError("wave solver needs g^{0j} = 0");
  const Mat3 gs = g.block<3, 3>(1, 1);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (i != j && std::abs(gs(i, j)) > 1e-12)
        throw ConfigError("wave solver needs a diagonal spatial metric block");
  if (std::abs(gs(0, 0) - gs(1, 1)) > 1e-12 || std::abs(gs(0, 0) - gs(2, 2)) > 1e-12)
    throw ConfigError("wave solver needs an isotropic spatial metric block");
  return gs(0, 0);
}

inline long fidx_x(int n, int i, int j, int k) { return i + (long)(n + 1) * (j + (long)n * k); }
inline long fidx_y(int n, int i, int j, int k) { return i + (long)n * (j + (long)(n + 1) * k); }
inline long fidx_z(int n, int i, int j, int k) { return i + (long)n * (j + (long)n * k); }

}  // namespace

WaveSolver make_wave_solver(const SpacetimeMetric& metric,
                            const DampingProfile& damping, const WaveSpec& spec) {
  if (spec.cfl > 0.5) throw CflViolation("cfl must not exceed 0.5");
  if (spec.n < 4) throw ConfigError("grid too small");

  WaveSolver s;
  s.grid.L = spec.L;
  s.grid.n = spec.n;
  s.bc = spec.bc;
  s.cfl = spec.cfl;
  s.damping = damping;
  s.a_time_dependent = damping.time_dependent;

  const int n = spec.n;
  const double h = s.grid.h();
  const long nc = s.grid.ncells();
  s.gc.resize(nc);
  s.u_prev.assign(nc, 0.0);
  s.u_curr.assign(nc, 0.0);

  double c2max = 0.0;
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        const double c2 = cell_speed2(metric, s.grid.center(i, j, k));
        s.gc[s.grid.index(i, j, k)] = c2;
        c2max = std::max(c2max, c2);
      }
  s.max_speed = std::sqrt(c2max);
  s.dt = spec.cfl * h / s.max_speed;

  // face coefficients: arithmetic mean of the adjacent cell values, with
  // analytic evaluation at ghost centers on the boundary
  auto c2_at = [&metric](const Vec3& x) {
    return metric.jet(x).g(1, 1);
  };
  s.gfx.resize((long)(n + 1) * n * n);
  s.gfy.resize((long)n * (n + 1) * n);
  s.gfz.resize((long)n * n * (n + 1));
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i <= n; ++i) {
        const Vec3 xl = s.grid.center(i - 1, j, k);
        const Vec3 xr = s.grid.center(i, j, k);
        const double cl = (i == 0) ? (spec.bc == WaveBc::periodic
                                          ? s.gc[s.grid.index(n - 1, j, k)]
                                          : c2_at(xl))
                                   : s.gc[s.grid.index(i - 1, j, k)];
        const double cr = (i == n) ? (spec.bc == WaveBc::periodic
                                          ? s.gc[s.grid.index(0, j, k)]
                                          : c2_at(xr))
                                   : s.gc[s.grid.index(i, j, k)];
        s.gfx[fidx_x(n, i, j, k)] = 0.5 * (cl + cr);
      }
  for (int k = 0; k < n; ++k)
    for (int j = 0; j <= n; ++j)
      for (int i = 0; i < n; ++i) {
        const Vec3 xl = s.grid.center(i, j - 1, k);
        const Vec3 xr = s.grid.center(i, j, k);
        const double cl = (j == 0) ? (spec.bc == WaveBc::periodic
                                          ? s.gc[s.grid.index(i, n - 1, k)]
                                          : c2_at(xl))
                                   : s.gc[s.grid.index(i, j - 1, k)];
        const double cr = (j == n) ? (spec.bc == WaveBc::periodic
                                          ? s.gc[s.grid.index(i, 0, k)]
                                          : c2_at(xr))
                                   : s.gc[s.grid.index(i, j, k)];
        s.gfy[fidx_y(n, i, j, k)] = 0.5 * (cl + cr);
      }
  for (int k = 0; k <= n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        const Vec3 xl = s.grid.center(i, j, k - 1);
        const Vec3 xr = s.grid.center(i, j, k);
        const double cl = (k == 0) ? (spec.bc == WaveBc::periodic
                                          ? s.gc[s.grid.index(i, j, n - 1)]
                                          : c2_at(xl))
                                   : s.gc[s.grid.index(i, j, k - 1)];
        const double cr = (k == n) ? (spec.bc == WaveBc::periodic
                                          ? s.gc[s.grid.index(i, j, 0)]
                                          : c2_at(xr))
                                   : s.gc[s.grid.index(i, j, k)];
        s.gfz[fidx_z(n, i, j, k)] = 0.5 * (cl + cr);
      }

  if (spec.sponge) {
    s.sponge_cells.resize(nc);
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
          const double r = s.grid.center(i, j, k).norm();
          s.sponge_cells[s.grid.index(i, j, k)] =
              spec.sponge_strength *
              step_up(r, spec.L - spec.sponge_width, spec.L, 0);
        }
  }

  if (!s.a_time_dependent) {
    s.a_cells.resize(nc);
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
          const long c = s.grid.index(i, j, k);
          s.a_cells[c] = damping.a(0.0, s.grid.center(i, j, k)) +
                         (s.sponge_cells.empty() ? 0.0 : s.sponge_cells[c]);
        }
  }
  return s;
}

namespace {

// divergence-form flux Laplacian of u into lap
void apply_operator(const WaveSolver& s, const std::vector<double>& u,
                    std::vector<double>& lap) {
  const int n = s.grid.n;
  const double inv_h2 = 1.0 / (s.grid.h() * s.grid.h());
  const bool per = s.bc == WaveBc::periodic;
  auto U = [&](int i, int j, int k) -> double {
    if (per) {
      i = (i + n) % n;
      j = (j + n) % n;
      k = (k + n) % n;
    } else if (i < 0 || i >= n || j < 0 || j >= n || k < 0 || k >= n) {
      return 0.0;
    }
    return u[s.grid.index(i, j, k)];
  };
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        const double uc = u[s.grid.index(i, j, k)];
        const double flux =
            s.gfx[fidx_x(n, i + 1, j, k)] * (U(i + 1, j, k) - uc) -
            s.gfx[fidx_x(n, i, j, k)] * (uc - U(i - 1, j, k)) +
            s.gfy[fidx_y(n, i, j + 1, k)] * (U(i, j + 1, k) - uc) -
            s.gfy[fidx_y(n, i, j, k)] * (uc - U(i, j - 1, k)) +
            s.gfz[fidx_z(n, i, j, k + 1)] * (U(i, j, k + 1) - uc) -
            s.gfz[fidx_z(n, i, j, k)] * (uc - U(i, j, k - 1));
        lap[s.grid.index(i, j, k)] = flux * inv_h2;
      }
}

double a_of_cell(const WaveSolver& s, long c, double t, const Vec3& x) {
  if (!s.a_time_dependent) return s.a_cells[c];
  return s.damping.a(t, x) + (s.sponge_cells.empty() ? 0.0 : s.sponge_cells[c]);
}

void advance(WaveSolver& s, const Forcing& f, std::vector<double>& u_next,
             std::vector<double>& lap) {
  const int n = s.grid.n;
  apply_operator(s, s.u_curr, lap);
  const double dt = s.dt;
  double amax = 0.0;
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        const long c = s.grid.index(i, j, k);
        const Vec3 x = s.grid.center(i, j, k);
        const double a = a_of_cell(s, c, s.t, x);
        const double fv = f ? f(s.t, x) : 0.0;
        const double num = 2.0 * s.u_curr[c] - (1.0 - 0.5 * a * dt) * s.u_prev[c] +
                           dt * dt * (lap[c] + fv);
        u_next[c] = num / (1.0 + 0.5 * a * dt);
        amax = std::max(amax, std::abs(u_next[c]));
      }
  if (!std::isfinite(amax) || amax > 1e12)
    throw NonFinite("wave field overflow");
}

}  // namespace

void set_initial_data(WaveSolver& s, const FieldInit& u0, const FieldInit& v0,
                      const Forcing& f) {
  const int n = s.grid.n;
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i)
        s.u_curr[s.grid.index(i, j, k)] = u0(s.grid.center(i, j, k));
  // u(-dt) by second-order Taylor using the PDE for u_tt
  std::vector<double> lap(s.grid.ncells());
  apply_operator(s, s.u_curr, lap);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        const long c = s.grid.index(i, j, k);
        const Vec3 x = s.grid.center(i, j, k);
        const double v = v0(x);
        const double a = a_of_cell(s, c, 0.0, x);
        const double fv = f ? f(0.0, x) : 0.0;
        const double utt = lap[c] - a * v + fv;
        s.u_prev[c] = s.u_curr[c] - s.dt * v + 0.5 * s.dt * s.dt * utt;
      }
  s.t = 0.0;
  s.steps_done = 0;
}

void step(WaveSolver& s, const Forcing& f) {
  std::vector<double> u_next(s.grid.ncells()), lap(s.grid.ncells());
  advance(s, f, u_next, lap);
  s.u_prev.swap(s.u_curr);
  s.u_curr.swap(u_next);
  s.t += s.dt;
  ++s.steps_done;
}

double energy(const WaveSolver& s) {
  const int n = s.grid.n;
  const double h = s.grid.h();
  const double h3 = h * h * h;
  const bool per = s.bc == WaveBc::periodic;
  auto Ubar = [&](int i, int j, int k) -> double {
    if (per) {
      i = (i + n) % n;
      j = (j + n) % n;
      k = (k + n) % n;
    } else if (i < 0 || i >= n || j < 0 || j >= n || k < 0 || k >= n) {
      return 0.0;
    }
    const long c = s.grid.index(i, j, k);
    return 0.5 * (s.u_curr[c] + s.u_prev[c]);
  };
  double total = 0.0;
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        const long c = s.grid.index(i, j, k);
        const double ut = (s.u_curr[c] - s.u_prev[c]) / s.dt;
        const double gx = (Ubar(i + 1, j, k) - Ubar(i - 1, j, k)) / (2.0 * h);
        const double gy = (Ubar(i, j + 1, k) - Ubar(i, j - 1, k)) / (2.0 * h);
        const double gz = (Ubar(i, j, k + 1) - Ubar(i, j, k - 1)) / (2.0 * h);
        total += ut * ut + s.gc[c] * (gx * gx + gy * gy + gz * gz);
      }
  return h3 * total;
}

double face_energy(const WaveSolver& s) {
  const int n = s.grid.n;
  const double h = s.grid.h();
  const double h3 = h * h * h;
  const double inv_h2 = 1.0 / (h * h);
  const bool per = s.bc == WaveBc::periodic;
  auto U = [&](const std::vector<double>& u, int i, int j, int k) -> double {
    if (per) {
      i = (i + n) % n;
      j = (j + n) % n;
      k = (k + n) % n;
    } else if (i < 0 || i >= n || j < 0 || j >= n || k < 0 || k >= n) {
      return 0.0;
    }
    return u[s.grid.index(i, j, k)];
  };
  double kin = 0.0, pot = 0.0;
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        const long c = s.grid.index(i, j, k);
        const double du = (s.u_curr[c] - s.u_prev[c]) / s.dt;
        kin += du * du;
      }
  // one owned face per cell and direction, plus the lower boundary planes
  const int i_lo = per ? 0 : -1;
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = i_lo; i < n; ++i) {
        if (!per && i == -1) {
          const double g = s.gfx[fidx_x(n, 0, j, k)];
          pot += g * U(s.u_curr, 0, j, k) * U(s.u_prev, 0, j, k) * inv_h2;
          continue;
        }
        const double g = s.gfx[fidx_x(n, i + 1, j, k)];
        const double d1 = U(s.u_curr, i + 1, j, k) - U(s.u_curr, i, j, k);
        const double d2 = U(s.u_prev, i + 1, j, k) - U(s.u_prev, i, j, k);
        pot += g * d1 * d2 * inv_h2;
      }
  for (int k = 0; k < n; ++k)
    for (int j = i_lo; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        if (!per && j == -1) {
          const double g = s.gfy[fidx_y(n, i, 0, k)];
          pot += g * U(s.u_curr, i, 0, k) * U(s.u_prev, i, 0, k) * inv_h2;
          continue;
        }
        const double g = s.gfy[fidx_y(n, i, j + 1, k)];
        const double d1 = U(s.u_curr, i, j + 1, k) - U(s.u_curr, i, j, k);
        const double d2 = U(s.u_prev, i, j + 1, k) - U(s.u_prev, i, j, k);
        pot += g * d1 * d2 * inv_h2;
      }
  for (int k = i_lo; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        if (!per && k == -1) {
          const double g = s.gfz[fidx_z(n, i, j, 0)];
          pot += g * U(s.u_curr, i, j, 0) * U(s.u_prev, i, j, 0) * inv_h2;
          continue;
        }
        const double g = s.gfz[fidx_z(n, i, j, k + 1)];
        const double d1 = U(s.u_curr, i, j, k + 1) - U(s.u_curr, i, j, k);
        const double d2 = U(s.u_prev, i, j, k + 1) - U(s.u_prev, i, j, k);
        pot += g * d1 * d2 * inv_h2;
      }
  return h3 * (kin + pot);
}

WaveRun run_recorded(const SpacetimeMetric& metric, const DampingProfile& damping,
                     const WaveSpec& spec, const FieldInit& u0, const FieldInit& v0,
                     double T, const Forcing& f) {
  WaveSolver s = make_wave_solver(metric, damping, spec);
  set_initial_data(s, u0, v0, f);
  WaveRun run;
  run.times.push_back(s.t);
  run.levels.push_back(s.u_curr);
  const long n_steps = (long)std::ceil(T / s.dt);
  bool first = true;
  for (long i = 0; i < n_steps; ++i) {
    step(s, f);
    if (first) {
      run.E0 = energy(s);
      first = false;
    }
    run.times.push_back(s.t);
    run.levels.push_back(s.u_curr);
  }
  run.final_state = std::move(s);
  return run;
}

namespace {

// half-level energy between two recorded levels (same formulas as energy())
double pair_energy(const WaveSolver& meta, const std::vector<double>& lo,
                   const std::vector<double>& hi) {
  WaveSolver tmp = meta;  // shallow copy of coefficient arrays (shared values)
  tmp.u_prev = lo;
  tmp.u_curr = hi;
  return energy(tmp);
}

double pair_face_energy(const WaveSolver& meta, const std::vector<double>& lo,
                        const std::vector<double>& hi) {
  WaveSolver tmp = meta;
  tmp.u_prev = lo;
  tmp.u_curr = hi;
  return face_energy(tmp);
}

}  // namespace

std::vector<std::pair<double, double>> dissipation_residual(const WaveRun& run,
                                                            const Forcing& f) {
  std::vector<std::pair<double, double>> out;
  const WaveSolver& meta = run.final_state;
  const double dt = meta.dt;
  const double h3 = std::pow(meta.grid.h(), 3);
  const int n = meta.grid.n;
  const double E0 = run.E0 > 0 ? run.E0 : 1.0;
  for (size_t m = 1; m + 1 < run.levels.size(); ++m) {
    const double Ep = pair_face_energy(meta, run.levels[m], run.levels[m + 1]);
    const double Em = pair_face_energy(meta, run.levels[m - 1], run.levels[m]);
    const double t_m = run.times[m];
    double pow_f = 0.0, pow_a = 0.0;
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
          const long c = meta.grid.index(i, j, k);
          const Vec3 x = meta.grid.center(i, j, k);
          const double dtu =
              (run.levels[m + 1][c] - run.levels[m - 1][c]) / (2.0 * dt);
          if (f) pow_f += f(t_m, x) * dtu;
          pow_a += a_of_cell(meta, c, t_m, x) * dtu * dtu;
        }
    const double res = (Ep - Em) / dt - 2.0 * h3 * pow_f + 2.0 * h3 * pow_a;
    out.emplace_back(t_m, res / E0);
  }
  return out;
}

bool backward_energy_bound(const WaveRun& run, double T) {
  const WaveSolver& meta = run.final_state;
  double sup_a = 0.0;
  const int n = meta.grid.n;
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i)
        sup_a = std::max(sup_a, a_of_cell(meta, meta.grid.index(i, j, k), 0.0,
                                          meta.grid.center(i, j, k)));
  size_t mT = 0;
  while (mT + 1 < run.times.size() && run.times[mT + 1] <= T + 1e-12) ++mT;
  if (mT == 0) return true;
  const double ET = pair_energy(meta, run.levels[mT - 1], run.levels[mT]);
  const double bound = 1.1 * std::exp(2.0 * T * sup_a) * ET;
  for (size_t m = 1; m <= mT; ++m) {
    const double Et = pair_energy(meta, run.levels[m - 1], run.levels[m]);
    if (Et > bound) return false;
  }
  return true;
}

EnergyAudit energy_audit(const SpacetimeMetric& metric,
                         const DampingProfile& damping, const WaveSpec& spec,
                         const FieldInit& u0, const FieldInit& v0, double T) {
  WaveSolver s = make_wave_solver(metric, damping, spec);
  set_initial_data(s, u0, v0);
  EnergyAudit audit;
  const double h3 = std::pow(s.grid.h(), 3);
  const int n = s.grid.n;
  const long n_steps = (long)std::ceil(T / s.dt);
  std::vector<double> u_nm1;
  for (long m = 0; m < n_steps; ++m) {
    u_nm1 = s.u_prev;
    const double t_mid = s.t;
    step(s);
    if (m == 0) audit.E_begin = energy(s);
    // midpoint-in-time damping power at the level between the half levels
    double pow_a = 0.0;
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
          const long c = s.grid.index(i, j, k);
          const double dtu = (s.u_curr[c] - u_nm1[c]) / (2.0 * s.dt);
          pow_a += a_of_cell(s, c, t_mid, s.grid.center(i, j, k)) * dtu * dtu;
        }
    if (m > 0) audit.dissipated += 2.0 * h3 * pow_a * s.dt;
  }
  audit.E_end = energy(s);
  audit.steps = s.steps_done;
  audit.defect = std::abs(audit.dissipated + audit.E_end - audit.E_begin);
  return audit;
}

std::pair<FieldInit, FieldInit> ring_initial_data(const RingData& rd) {
  const RingData r = rd;
  FieldInit u0 = [r](const Vec3& x) {
    const double rho = std::hypot(x(0), x(1));
    const double d2 = sq(rho - r.radius) + sq(x(2));
    const double A = std::exp(-d2 / sq(r.width));
    return A * std::cos(r.mode * std::atan2(x(1), x(0)));
  };
  FieldInit v0 = [r](const Vec3& x) {
    const double rho = std::hypot(x(0), x(1));
    const double d2 = sq(rho - r.radius) + sq(x(2));
    const double A = std::exp(-d2 / sq(r.width));
    return r.omega * A * std::sin(r.mode * std::atan2(x(1), x(0)));
  };
  return {u0, v0};
}

DecayReport decay_experiment(const SpacetimeMetric& metric,
                             const DampingProfile& damping, const WaveSpec& spec,
                             const FieldInit& u0, const FieldInit& v0, double T,
                             int n_report) {
  WaveSolver s = make_wave_solver(metric, damping, spec);
  set_initial_data(s, u0, v0);
  DecayReport rep;

  double min_speed2 = s.gc[0];
  for (double c2 : s.gc) min_speed2 = std::min(min_speed2, c2);
  rep.crossing_time = 2.0 * metric.R0 / std::sqrt(min_speed2);

  const int n = s.grid.n;
  const double h = s.grid.h();
  const double h3 = h * h * h;
  const int jmax = max_annulus_for_box(s.grid.L);

  // per-cell annulus memberships and weights, computed once
  const long nc = s.grid.ncells();
  std::vector<std::pair<int, int>> jcell(nc);
  std::vector<double> w_half(nc), w_three_half(nc);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        const long c = s.grid.index(i, j, k);
        const double jx = jbracket(s.grid.center(i, j, k));
        jcell[c] = annulus_range(jx);
        w_half[c] = 1.0 / jx;          // <x>^{-1} for the |du| term squared
        w_three_half[c] = 1.0 / (jx * jx * jx);  // <x>^{-3} for the u term
      }

  std::vector<double> I_du(jmax + 1, 0.0), I_u(jmax + 1, 0.0);
  const long n_steps = (long)std::ceil(T / s.dt);
  const long report_stride = std::max(1L, n_steps / std::max(1, n_report));

  std::vector<double> u_nm1;
  for (long m = 0; m < n_steps; ++m) {
    u_nm1 = s.u_prev;
    step(s);
    if (m == 0) rep.E0 = energy(s);
    // accumulate the [0, T] local-energy integrals at the level between the
    // stored half levels (u_nm1, old curr = s.u_prev, new curr)
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
          const long c = s.grid.index(i, j, k);
          const double dtu = (s.u_curr[c] - u_nm1[c]) / (2.0 * s.dt);
          auto mid = [&](int ii, int jj, int kk) -> double {
            if (s.bc == WaveBc::periodic) {
              ii = (ii + n) % n;
              jj = (jj + n) % n;
              kk = (kk + n) % n;
            } else if (ii < 0 || ii >= n || jj < 0 || jj >= n || kk < 0 || kk >= n) {
              return 0.0;
            }
            return s.u_prev[s.grid.index(ii, jj, kk)];
          };
          const double uc = s.u_prev[c];
          const double gx = (mid(i + 1, j, k) - mid(i - 1, j, k)) / (2.0 * h);
          const double gy = (mid(i, j + 1, k) - mid(i, j - 1, k)) / (2.0 * h);
          const double gz = (mid(i, j, k + 1) - mid(i, j, k - 1)) / (2.0 * h);
          const double du2 = dtu * dtu + gx * gx + gy * gy + gz * gz;
          const double c_du = s.dt * h3 * w_half[c] * du2;
          const double c_u = s.dt * h3 * w_three_half[c] * uc * uc;
          for (int jj = jcell[c].first; jj <= std::min(jcell[c].second, jmax); ++jj) {
            I_du[jj] += c_du;
            I_u[jj] += c_u;
          }
        }
    if ((m + 1) % report_stride == 0 || m + 1 == n_steps) {
      double sup_du = 0.0, sup_u = 0.0;
      std::vector<double> part(jmax + 1);
      for (int jj = 0; jj <= jmax; ++jj) {
        sup_du = std::max(sup_du, I_du[jj]);
        sup_u = std::max(sup_u, I_u[jj]);
        part[jj] = std::sqrt(I_du[jj]) + std::sqrt(I_u[jj]);
      }
      const double le1 = std::sqrt(sup_du) + std::sqrt(sup_u);
      rep.times.push_back(s.t);
      rep.energy.push_back(energy(s));
      rep.le1_ratio.push_back(le1 / std::sqrt(std::max(rep.E0, 1e-300)));
      rep.partials.push_back(std::move(part));
    }
  }
  return rep;
}

void save_checkpoint(const WaveSolver& s, const std::string& path) {
  std::FILE* hdr = std::fopen((path + ".hdr").c_str(), "w");
  if (!hdr) throw ConfigError("cannot write checkpoint header: " + path);
  std::fprintf(hdr,
               "wave_checkpoint v1\nn %d\nL %.17g\ndt %.17g\nt %.17g\nsteps %ld\n"
               "bc %s\n",
               s.grid.n, s.grid.L, s.dt, s.t, s.steps_done,
               s.bc == WaveBc::periodic ? "periodic" : "dirichlet");
  std::fclose(hdr);
  std::FILE* bin = std::fopen((path + ".bin").c_str(), "wb");
  if (!bin) throw ConfigError("cannot write checkpoint data: " + path);
  std::fwrite(s.u_prev.data(), sizeof(double), s.u_prev.size(), bin);
  std::fwrite(s.u_curr.data(), sizeof(double), s.u_curr.size(), bin);
  std::fclose(bin);
}

void load_checkpoint(WaveSolver& s, const std::string& path) {
  std::FILE* hdr = std::fopen((path + ".hdr").c_str(), "r");
  if (!hdr) throw ConfigError("cannot read checkpoint header: " + path);
  char magic[32], version[8], bc[16];
  int n = 0;
  double L = 0, dt = 0, t = 0;
  long steps = 0;
  const int got =
      std::fscanf(hdr, "%31s %7s n %d L %lg dt %lg t %lg steps %ld bc %15s", magic,
                  version, &n, &L, &dt, &t, &steps, bc);
  std::fclose(hdr);
  if (got != 8 || std::strcmp(magic, "wave_checkpoint") != 0)
    throw ConfigError("malformed checkpoint header: " + path);
  if (n != s.grid.n || std::abs(L - s.grid.L) > 1e-12)
    throw ConfigError("checkpoint grid does not match the solver");
  std::FILE* bin = std::fopen((path + ".bin").c_str(), "rb");
  if (!bin) throw ConfigError("cannot read checkpoint data: " + path);
  const size_t nc = (size_t)s.grid.ncells();
  const size_t r1 = std::fread(s.u_prev.data(), sizeof(double), nc, bin);
  const size_t r2 = std::fread(s.u_curr.data(), sizeof(double), nc, bin);
  std::fclose(bin);
  if (r1 != nc || r2 != nc) throw ConfigError("checkpoint data truncated: " + path);
  s.dt = dt;
  s.t = t;
  s.steps_done = steps;
}

}  // namespace geoctrl
