#!/usr/bin/env python3
"""Reference values for the rotating-drag test metric.

  g^{00} = -1,  g^{ij} = delta^{ij},
  g^{0j}(x) = eps * exp(-|x|^2 / w^2) * (-x_2, x_1, 0),   eps = 0.08, w = 2.

The positive/negative sound speeds are obtained here as roots of the tau
quadratic p(tau) = g^{00} tau^2 + 2 tau g^{0j} xi_j + g^{ij} xi_i xi_j, not
from the closed-form b = u +- sqrt(u^2+v) the library uses, so the two code
paths are independent.  Gradients come from high-precision central
differences on the root formula.
"""

import mpmath as mp

mp.mp.dps = 40

EPS = mp.mpf("0.08")
W = mp.mpf("2.0")


def g0(x):
    r2 = x[0] ** 2 + x[1] ** 2 + x[2] ** 2
    f = EPS * mp.e ** (-r2 / (W * W))
    return [-f * x[1], f * x[0], mp.mpf(0)]


def b_roots(x, xi):
    s = sum(gi * k for gi, k in zip(g0(x), xi))
    q = sum(k * k for k in xi)
    # g00 tau^2 + 2 s tau + q = 0 with g00 = -1
    disc = mp.sqrt(s * s + q)
    return s + disc, s - disc


def fd_grad(f, z, h=mp.mpf("1e-12")):
    out = []
    for i in range(len(z)):
        zp = list(z)
        zm = list(z)
        zp[i] += h
        zm[i] -= h
        out.append((f(zp) - f(zm)) / (2 * h))
    return out


def main():
    x = [mp.mpf("0.7"), mp.mpf("-0.4"), mp.mpf("0.3")]
    xi = [mp.mpf("0.2"), mp.mpf("0.5"), mp.mpf("-0.8")]
    bp, bm = b_roots(x, xi)
    print("x  =", [mp.nstr(v, 6) for v in x])
    print("xi =", [mp.nstr(v, 6) for v in xi])
    print("b+ = %s" % mp.nstr(bp, 20))
    print("b- = %s" % mp.nstr(bm, 20))

    gx = fd_grad(lambda z: b_roots(z, xi)[0], x)
    gxi = fd_grad(lambda z: b_roots(x, z)[0], xi)
    print("grad_x  b+ =", [mp.nstr(v, 18) for v in gx])
    print("grad_xi b+ =", [mp.nstr(v, 18) for v in gxi])

    # factorization and sign separation on scattered points
    worst = mp.mpf(0)
    rng_state = 12345
    def lcg():
        nonlocal rng_state
        rng_state = (6364136223846793005 * rng_state + 1442695040888963407) % 2 ** 64
        return mp.mpf(rng_state) / 2 ** 64 * 6 - 3
    for _ in range(500):
        xx = [lcg(), lcg(), lcg()]
        kk = [lcg(), lcg(), lcg()]
        if sum(v * v for v in kk) < mp.mpf("1e-4"):
            continue
        tau = lcg()
        p1, p2 = b_roots(xx, kk)
        assert p1 > 0 > p2
        s = sum(gi * k for gi, k in zip(g0(xx), kk))
        q = sum(v * v for v in kk)
        p = -tau * tau + 2 * s * tau + q
        fact = -(tau - p1) * (tau - p2)
        den = tau * tau + q
        worst = max(worst, abs(p - fact) / den)
    print("max factorization residual over 500 points: %s" % mp.nstr(worst, 5))

    # second spot point, farther out where the drag is weak
    x2 = [mp.mpf("2.0"), mp.mpf("1.0"), mp.mpf("-0.5")]
    xi2 = [mp.mpf("-0.3"), mp.mpf("0.4"), mp.mpf("0.1")]
    bp2, _ = b_roots(x2, xi2)
    print("b+ at second point = %s" % mp.nstr(bp2, 20))


if __name__ == "__main__":
    main()
