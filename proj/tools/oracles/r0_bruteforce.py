#!/usr/bin/env python3
"""Brute-force chart radius for the damping-oscillation condition on flat
space, used to sanity-check the library's bisection search.

Setup: base point omega = (t=0, x=(1,0,0), tau=1, xi=(0,-1,0)) on the plus
characteristic, flow x_s = z - s * zeta/|zeta|, span s in [-2, 5].  The
damping is the Lipschitz profile

    a(x) = L * sqrt(0.04 + |x - x_a|^2),  x_a = (0, 1, 0)

and the requirement is  max |a(x_s(z,zeta)) - a(x_s(omega))| <= C2bar/4 over
z in B(omega_x, eta), zeta in B(omega_xi, eta).  The search radius returned
by the library is eta*/2 for the largest passing eta.
"""

import numpy as np

C2BAR = 0.16
XA = np.array([0.0, 1.0, 0.0])
OMX = np.array([1.0, 0.0, 0.0])
OMXI = np.array([0.0, -1.0, 0.0])
SPAN = np.linspace(-2.0, 5.0, 141)


def damping(x, L):
    d = x - XA
    return L * np.sqrt(0.04 + np.sum(d * d, axis=-1))


def ball_lattice(center, eta, n=7):
    axes = [np.linspace(-eta, eta, n)] * 3
    g = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, 3)
    g = g[np.sum(g * g, axis=1) <= eta * eta + 1e-15]
    return center + g


def max_oscillation(eta, L):
    zs = ball_lattice(OMX, eta)
    zetas = ball_lattice(OMXI, eta)
    zetas = zetas[np.linalg.norm(zetas, axis=1) > 1e-9]
    dirs = zetas / np.linalg.norm(zetas, axis=1)[:, None]
    worst = 0.0
    for s in SPAN:
        ref = damping(OMX - s * OMXI / np.linalg.norm(OMXI), L)
        pts = zs[:, None, :] - s * dirs[None, :, :]
        vals = damping(pts, L)
        worst = max(worst, np.max(np.abs(vals - ref)))
    return worst


def largest_eta(L):
    etas = np.linspace(0.005, 1.0, 200)
    best = None
    for eta in etas:
        if max_oscillation(eta, L) <= C2BAR / 4:
            best = eta
        else:
            break
    return best


def main():
    for L in (0.3, 1.2):
        eta = largest_eta(L)
        print("L = %-4s  eta* = %.6f  r0 = eta*/2 = %.6f" % (L, eta, eta / 2))


if __name__ == "__main__":
    main()
