#!/usr/bin/env python3
"""Design/validation oracle for the geometric-control scenario damping.

The photon-sphere metric traps null rays in a radial band (see
photon_sphere.py).  For the control scenario we need a stationary damping
profile such that

  * every trapped ray has a positive long-time average of a along it
    (the time-dependent geometric control condition holds),
  * some trapped points sit where a <= Cbar2/2 (exercises the
    small-damping escape construction and the first-control-time T_omega),
  * the rise of a along rays out of the small-damping region is gentle,
    so the uniform up-phase window eps1 is usable.

Profile: a(x) = a0 * P(r) * (mu + (1-mu) * (x1^2+x2^2)/r^2)
with P a radial plateau covering the trapped band.  The angular factor is
small near the x3 poles and 1 on the equator; every orbit plane except the
equatorial one sweeps through both, and the equatorial plane has a = a0.

Validates the exact trapped predicate  r <= r_unstable  and
u(r) sin(theta) > u(r_unstable)  (u = r/c, theta the x-xi angle) against
long integrations, then measures the control constants.
"""

import numpy as np
from scipy.integrate import solve_ivp
from photon_sphere import (c_of, cp_of, band_and_R0, integrate_ray, ray_rhs)

A, RC, W = 0.5, 3.0, 0.7
c = c_of(A, RC, W)
u_of = lambda r: r / c(r)

INFO = band_and_R0(A, RC, W)
R_UNST = INFO["r_unstable"]
U_MIN = INFO["u_min"]
R_LO = INFO["r_lo"]

A0, MU = 0.6, 0.1
# plateau edges: ramp-up [0.9, 1.7], flat [1.7, 3.1], ramp-down [3.1, 3.9]
PLAT = (0.9, 1.7, 3.1, 3.9)


def smoothstep(x):
    # C-infinity step via the normalized exp(-1/(1-s^2)) bump integral
    from scipy.integrate import quad
    if x <= -1:
        return 0.0
    if x >= 1:
        return 1.0
    v, _ = quad(lambda t: np.exp(-1.0 / (1.0 - t * t)), -1, x)
    n, _ = quad(lambda t: np.exp(-1.0 / (1.0 - t * t)), -1, 1)
    return v / n


def plateau(r, a, b, cc, d):
    up = smoothstep(2 * (r - a) / (b - a) - 1)
    dn = smoothstep(2 * (r - cc) / (d - cc) - 1)
    return up * (1 - dn)


def damping(x):
    r = np.linalg.norm(x)
    if r < 1e-12:
        return 0.0
    perp = (x[0] ** 2 + x[1] ** 2) / r**2
    return A0 * plateau(r, *PLAT) * (MU + (1 - MU) * perp)


def trapped_predicate(x, xi):
    r = np.linalg.norm(x)
    if r > R_UNST:
        return False
    s = np.linalg.norm(np.cross(x, xi)) / (r * np.linalg.norm(xi))
    return u_of(r) * s > U_MIN


def sample_trapped(n, seed=7, small_only=False, cbar2=None):
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < n:
        r = rng.uniform(R_LO, R_UNST)
        xhat = rng.normal(size=3)
        xhat /= np.linalg.norm(xhat)
        if small_only:
            # bias towards the poles where the damping is small
            xhat[2] = np.sign(xhat[2]) * rng.uniform(0.975, 1.0)
            xhat[:2] *= np.sqrt(1 - xhat[2] ** 2) / (np.linalg.norm(xhat[:2]) + 1e-300)
        x = r * xhat
        xi = rng.normal(size=3)
        xi /= np.linalg.norm(xi)
        if not trapped_predicate(x, xi):
            continue
        if small_only and cbar2 is not None and damping(x) > cbar2 / 2:
            continue
        out.append((x, xi))
    return out


def orbit_average(x0, xi0, T, nt=4000):
    from scipy.integrate import cumulative_trapezoid
    sol = integrate_ray(x0, xi0, (0, T), A, RC, W, tol=1e-10, dense=True)
    ss = np.linspace(0, T, nt)
    av = np.array([damping(sol.sol(s)[:3]) for s in ss])
    csum = cumulative_trapezoid(av, ss, initial=0.0)
    run = np.empty_like(csum)
    run[0] = av[0]
    run[1:] = csum[1:] / ss[1:]
    return ss, run, sol


def main():
    # 1. validate the trapped predicate against long integrations
    rng = np.random.default_rng(3)
    bad = 0
    for k in range(150):
        r = rng.uniform(1.6, 3.6)
        x = rng.normal(size=3); x *= r / np.linalg.norm(x)
        xi = rng.normal(size=3); xi /= np.linalg.norm(xi)
        pred = trapped_predicate(x, xi)
        sol = integrate_ray(x, xi, (0, 400), A, RC, W, tol=1e-10)
        rmax = np.linalg.norm(sol.y[:3], axis=0).max()
        bounded = rmax < 5.0
        solb = integrate_ray(x, xi, (0, -400), A, RC, W, tol=1e-10)
        rmaxb = np.linalg.norm(solb.y[:3], axis=0).max()
        bounded = bounded and (rmaxb < 5.0)
        if pred != bounded:
            bad += 1
            print(f"  predicate mismatch at r={r:.4f}: pred={pred} bounded={bounded} "
                  f"rmax={rmax:.3f}/{rmaxb:.3f} margin={u_of(r)*np.linalg.norm(np.cross(x/r,xi))-U_MIN:+.5f}")
    print(f"trapped predicate vs integration: {bad}/150 mismatches")

    # 2. control averages over trapped samples
    samples = sample_trapped(40, seed=11)
    # include the worst cases: polar circular orbit, near-unstable orbit
    xs, xis = np.array([0.0, 0.0, INFO["r_stable"]]), np.array([1.0 / c(INFO["r_stable"]), 0.0, 0.0])
    samples.append((xs, xis))
    xu = np.array([0.0, 0.0, R_UNST - 1e-4])
    xiu = np.array([1.0 / c(R_UNST), 0.0, 0.0])
    samples.append((xu, xiu))

    T = 120.0
    worst_run = None
    infs = []
    for x0, xi0 in samples:
        ss, run, _ = orbit_average(x0, xi0, T)
        infs.append(run[-1])
        if worst_run is None or run[-1] < worst_run[1][-1]:
            worst_run = (ss, run)
    infs = np.array(infs)
    cbar = infs.min()
    cbar2 = cbar / 2
    print(f"\nlong-time averages over {len(samples)} trapped orbits: "
          f"min={cbar:.5f} max={infs.max():.5f}")
    print(f"Cbar2 = {cbar2:.5f}")

    # T2: first T with all running averages >= Cbar2 from then on
    allT2 = 0.0
    for x0, xi0 in samples:
        ss, run, _ = orbit_average(x0, xi0, T)
        below = np.where(run < cbar2)[0]
        t2 = ss[below[-1] + 1] if len(below) and below[-1] + 1 < len(ss) else 0.0
        allT2 = max(allT2, t2)
    print(f"T2 (last down-crossing of Cbar2 among samples) = {allT2:.3f}")

    # 3. small-damping trapped points and their first-control times
    small = sample_trapped(32, seed=23, small_only=True, cbar2=cbar2)
    print(f"\nfound {len(small)} trapped samples with a(omega) <= Cbar2/2 = {cbar2/2:.5f}")
    from scipy.optimize import brentq
    tws, eps1s, epss, atws = [], [], [], []
    for x0, xi0 in small:
        ss, run, sol = orbit_average(x0, xi0, 60.0, nt=6000)
        idx = np.where(run >= cbar2)[0]
        tw = ss[idx[0]] if len(idx) else np.inf
        if len(idx) and idx[0] > 0:
            # refine the first up-crossing of the running average
            dense = lambda T: np.trapz(
                [damping(sol.sol(s)[:3]) for s in np.linspace(0, T, 400)],
                np.linspace(0, T, 400)) / T - cbar2
            tw = brentq(dense, ss[idx[0] - 1], ss[idx[0]], xtol=1e-6)
        tws.append(tw)
        aval = np.array([damping(sol.sol(s)[:3]) for s in np.linspace(0, 5, 2500)])
        over = np.where(aval > 0.75 * cbar2)[0]
        eps1s.append(np.linspace(0, 5, 2500)[over[0]] if len(over) else 5.0)
        # down-ramp window: how long a(gamma) stays >= 3*Cbar2/4 past T_omega
        atws.append(damping(sol.sol(tw)[:3]))
        sw = np.linspace(tw, tw + 3.0, 1500)
        aw = np.array([damping(sol.sol(s)[:3]) for s in sw])
        under = np.where(aw < 0.75 * cbar2)[0]
        epss.append(sw[under[0]] - tw if len(under) else 3.0)
    print(f"T_omega range: {min(tws):.3f} .. {max(tws):.3f}")
    print(f"a(gamma(T_omega)) min over samples: {min(atws):.5f} (Cbar2 = {cbar2:.5f})")
    print(f"first s with a(gamma(s)) > 3*Cbar2/4: min {min(eps1s):.3f} (this bounds eps1)")
    print(f"window past T_omega with a >= 3*Cbar2/4: min {min(epss):.3f} (this bounds eps)")

    # 4. fraction of trapped band with small damping (for cover budgeting)
    pts = sample_trapped(4000, seed=5)
    frac = np.mean([damping(x) <= cbar2 / 2 for x, _ in pts])
    print(f"fraction of trapped samples with a <= Cbar2/2: {frac:.4f}")


if __name__ == "__main__":
    main()
