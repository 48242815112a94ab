#!/usr/bin/env python3
"""Reference computations for the photon-sphere sound-speed metric.

Everything here is derived from the scalar profile

    c(r) = 1 + A * exp(-(r - rc)^2 / w^2)

with spatial inverse metric g^{ij} = c(r)^2 delta^{ij}, g^{00} = -1,
g^{0j} = 0.  Null rays obey the half-wave Hamiltonian tau - b with
b = c(r)|xi|, i.e.

    dx/ds = -c(r) xihat,      dxi/ds = c'(r) |xi| xhat.

Circular null orbits sit at roots of  r c'(r) = c(r).  Radial motion is
governed by u(r) = r / c(r): with E = c|xi| and L = |x ^ xi| conserved,
xi_r^2 = (E/r)^2 (u(r)^2 - (L/E)^2), so turning points solve u(r) = L/E
and the trapped band is the well of u around its local maximum.

Run this to pick/confirm the default profile constants and to print the
frozen values used by the C++ test-suite.
"""

import numpy as np
from scipy.optimize import brentq
from scipy.integrate import solve_ivp


def c_of(A, rc, w):
    return lambda r: 1.0 + A * np.exp(-((r - rc) ** 2) / w**2)


def cp_of(A, rc, w):
    return lambda r: A * np.exp(-((r - rc) ** 2) / w**2) * (-2.0 * (r - rc) / w**2)


def circular_radii(A, rc, w):
    """Roots of G(r) = r c'(r) - c(r) on (0, rc + 6w]."""
    c, cp = c_of(A, rc, w), cp_of(A, rc, w)
    G = lambda r: r * cp(r) - c(r)
    rs = np.linspace(1e-3, rc + 6 * w, 20001)
    vals = G(rs)
    roots = []
    for i in range(len(rs) - 1):
        if vals[i] == 0.0:
            roots.append(rs[i])
        elif vals[i] * vals[i + 1] < 0:
            roots.append(brentq(G, rs[i], rs[i + 1], xtol=1e-14, rtol=1e-15))
    return roots, float(vals.max())


def band_and_R0(A, rc, w):
    """Trapped radial band [r_lo, r_hi] and related frozen constants."""
    c = c_of(A, rc, w)
    u = lambda r: r / c(r)
    roots, _ = circular_radii(A, rc, w)
    assert len(roots) == 2, roots
    r1, r2 = roots  # u-local-max (stable), u-local-min (unstable)
    M, m = u(r1), u(r2)
    # inner edge: u(r) = m on the rising branch left of r1
    r_lo = brentq(lambda r: u(r) - m, 1e-3, r1, xtol=1e-14)
    # beyond r2, u rises again; trapped orbits never cross r2
    r_hi = r2
    # radius where u recovers the value M (nothing trapped can reach past r2,
    # this is just a sanity scale for how far the well extends)
    r_recover = brentq(lambda r: u(r) - M, r2, rc + 8 * w, xtol=1e-14)
    return dict(r_stable=r1, r_unstable=r2, u_max=M, u_min=m,
                r_lo=r_lo, r_hi=r_hi, r_recover=r_recover)


def ray_rhs(s, y, A, rc, w):
    x, xi = y[:3], y[3:]
    r = np.linalg.norm(x)
    nxi = np.linalg.norm(xi)
    c, cp = c_of(A, rc, w)(r), cp_of(A, rc, w)(r)
    dx = -c * xi / nxi
    dxi = cp * nxi * x / r
    return np.concatenate([dx, dxi])


def integrate_ray(x0, xi0, s_span, A, rc, w, tol=1e-12, dense=False):
    sol = solve_ivp(ray_rhs, s_span, np.concatenate([x0, xi0]),
                    method="DOP853", rtol=tol, atol=tol, args=(A, rc, w),
                    dense_output=dense)
    return sol


def circular_orbit_state(r_orb, A, rc, w):
    """Initial (x, xi) for the circular orbit at r_orb in the x1-x2 plane,
    normalized so b = c|xi| = 1 (on-characteristic with tau = 1)."""
    c = c_of(A, rc, w)(r_orb)
    x0 = np.array([r_orb, 0.0, 0.0])
    xi0 = np.array([0.0, 1.0 / c, 0.0])
    return x0, xi0


def convexity_min_beyond(R, A, rc, w, n_rays=200, seed=1):
    """min over escaping-ray nodes with |x|>R of d^2/ds^2 |x|^2.

    d^2/ds^2 |x|^2 = 2(|dx|^2 + x . d2x); evaluated by finite differences
    of |x_s|^2 along high-accuracy rays.
    """
    rng = np.random.default_rng(seed)
    worst = np.inf
    for _ in range(n_rays):
        x0 = rng.normal(size=3)
        x0 *= (R + 4 * rng.random()) / np.linalg.norm(x0)
        xi0 = rng.normal(size=3)
        xi0 /= np.linalg.norm(xi0)
        sol = integrate_ray(x0, xi0, (0, 40), A, rc, w, dense=True)
        ss = np.linspace(0.2, sol.t[-1] - 0.2, 400)
        h = 1e-3
        for s in ss:
            xs = sol.sol(s)[:3]
            if np.linalg.norm(xs) <= R:
                continue
            f = lambda t: np.dot(sol.sol(t)[:3], sol.sol(t)[:3])
            d2 = (f(s + h) - 2 * f(s) + f(s - h)) / h**2
            worst = min(worst, d2)
    return worst


def main():
    rc, w = 3.0, 0.7
    print("amplitude sweep: roots of r c'(r) = c(r), rc=3, w=0.7")
    for A in (0.3, 0.4, 0.45, 0.5, 0.6):
        roots, gmax = circular_radii(A, rc, w)
        print(f"  A={A:4.2f}: roots={['%.6f' % r for r in roots]}, max G={gmax:+.6f}")

    A = 0.5
    info = band_and_R0(A, rc, w)
    print(f"\nfrozen defaults A={A}, rc={rc}, w={w}:")
    for k, v in info.items():
        print(f"  {k:10s} = {v:.12f}")

    bump_support = rc + 3 * w
    R0 = bump_support + 1.0
    print(f"  bump_support = {bump_support}, R0 = {R0}")

    # trapped-band orbits stay inside r_unstable, well inside R0
    x0, xi0 = circular_orbit_state(info["r_stable"], A, rc, w)
    sol = integrate_ray(x0, xi0, (0, 200), A, rc, w)
    rads = np.linalg.norm(sol.y[:3], axis=0)
    print(f"  stable circular orbit radius drift over s=200: "
          f"{rads.min():.9f} .. {rads.max():.9f}")

    # a librating orbit: perturb the stable circular orbit radially
    xm, xim = circular_orbit_state(info["r_stable"] + 0.15, A, rc, w)
    # keep same angular momentum scale; this is generically librating
    sol = integrate_ray(xm, xim, (0, 300), A, rc, w, dense=True)
    rads = np.linalg.norm(sol.y[:3], axis=0)
    print(f"  librating orbit radial range: {rads.min():.6f} .. {rads.max():.6f}")

    conv = convexity_min_beyond(R0, A, rc, w, n_rays=60)
    print(f"  min d2/ds2 |x|^2 on nodes beyond R0: {conv:.6f}  (need >= 0.1)")

    # frozen spot-checks for the C++ geometry tests
    r_test = 2.5
    c, cp = c_of(A, rc, w)(r_test), cp_of(A, rc, w)(r_test)
    print(f"\nspot values at r=2.5: c={c:.15f}, c'={cp:.15f}")
    x = np.array([1.5, -1.0, 2.0])
    r = np.linalg.norm(x)
    c = c_of(A, rc, w)(r)
    xi = np.array([0.3, 0.7, -0.2])
    b = c * np.linalg.norm(xi)
    print(f"spot b+ at x=(1.5,-1,2), xi=(0.3,0.7,-0.2): {b:.15f}")


if __name__ == "__main__":
    main()
