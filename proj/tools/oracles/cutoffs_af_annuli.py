#!/usr/bin/env python3
"""Reference values for the smooth cutoff family, the dyadic-annulus AF norm,
and the weighted annulus integral used by the local-energy-norm tests.

Everything here is computed with mpmath quadrature or dense 1D sampling so the
C++ implementation can be checked against independently obtained numbers.

Conventions frozen here and mirrored by the library:
  bump(s)   = exp(-1/(1-s^2)) on (-1,1), 0 outside
  S(u)      = int_{-1}^{u} bump / int_{-1}^{1} bump   (monotone 0 -> 1)
  chi_lt(R) = 1 for |r| <= R, 0 for |r| >= 2R, 1 - S(2r/R - 3) in between
  chi_gt(R) = 1 - chi_lt(R)
  A_j       = { 2^{j-1} <= <x> <= 2^{j+1} },  <x> = sqrt(1+|x|^2)
  annulus AF term for damping: max over A_j of <x>*a  plus  max of <x>^2*|grad a|
  (first-order derivatives combined as the Euclidean norm of the space-time
   gradient; for the metric part, orders 0..2 are combined component-wise in
   Frobenius norm the same way)
"""

import mpmath as mp

mp.mp.dps = 30


def bump(s):
    s = mp.mpf(s)
    if abs(s) >= 1:
        return mp.mpf(0)
    return mp.e ** (-1 / (1 - s * s))


def bump_norm():
    return mp.quad(bump, [-1, 0, 1])


I0 = bump_norm()


def S(u):
    u = mp.mpf(u)
    if u <= -1:
        return mp.mpf(0)
    if u >= 1:
        return mp.mpf(1)
    return mp.quad(bump, [-1, u]) / I0


def chi_lt(R, r):
    r = abs(mp.mpf(r))
    if r <= R:
        return mp.mpf(1)
    if r >= 2 * R:
        return mp.mpf(0)
    return 1 - S(2 * r / R - 3)


def chi_lt_d1(R, r):
    # d/dr chi_lt = -bump(s)/I0 * 2/R  with s = 2r/R - 3
    s = 2 * mp.mpf(r) / R - 3
    return -bump(s) / I0 * (2 / mp.mpf(R))


def chi_lt_d2(R, r):
    # bump'(s) = bump(s) * (-2s/(1-s^2)^2)
    s = 2 * mp.mpf(r) / R - 3
    bp = bump(s) * (-2 * s / (1 - s * s) ** 2)
    return -bp / I0 * (2 / mp.mpf(R)) ** 2


def annulus_r_range(j):
    lo2 = mp.mpf(4) ** (j - 1) - 1
    hi2 = mp.mpf(4) ** (j + 1) - 1
    rlo = mp.sqrt(lo2) if lo2 > 0 else mp.mpf(0)
    return rlo, mp.sqrt(hi2)


def af_damping_annulus(j, n=200001):
    """max <x> a + max <x>^2 |grad a| over A_j for a(x) = <x>^{-2}.

    a is radial so dense 1D sampling in r is exact enough; grad a has
    magnitude 2 r <x>^{-4}.
    """
    rlo, rhi = annulus_r_range(j)
    m0 = mp.mpf(0)
    m1 = mp.mpf(0)
    for i in range(n):
        r = rlo + (rhi - rlo) * i / (n - 1)
        w2 = 1 + r * r
        w = mp.sqrt(w2)
        m0 = max(m0, w / w2)
        m1 = max(m1, w2 * 2 * r / (w2 * w2))
    return m0 + m1


def slowly_varying_majorant(raw, delta):
    out = []
    for j in range(len(raw)):
        out.append(max(raw[k] * mp.mpf(2) ** (-delta * abs(k - j)) for k in range(len(raw))))
    return out


def main():
    print("I0 = int_{-1}^{1} exp(-1/(1-t^2)) dt = %s" % mp.nstr(I0, 20))
    for r in ("1.25", "1.5", "1.75"):
        print("chi_lt(1, %s)   = %s" % (r, mp.nstr(chi_lt(1, mp.mpf(r)), 20)))
    for r in ("1.25", "1.5"):
        print("chi_lt'(1, %s)  = %s" % (r, mp.nstr(chi_lt_d1(1, mp.mpf(r)), 20)))
        print("chi_lt''(1, %s) = %s" % (r, mp.nstr(chi_lt_d2(1, mp.mpf(r)), 20)))

    # int over {1 <= <x> <= 4} of <x>^{-1} dx  (annulus A_1), closed form
    # 4*pi*int_0^{sqrt 15} r^2/sqrt(1+r^2) dr = 2*pi*(4*sqrt(15) - asinh(sqrt 15))
    J = 2 * mp.pi * (4 * mp.sqrt(15) - mp.asinh(mp.sqrt(15)))
    Jq = 4 * mp.pi * mp.quad(lambda r: r * r / mp.sqrt(1 + r * r), [0, mp.sqrt(15)])
    assert abs(J - Jq) < mp.mpf("1e-20")
    print("int_{A_1} <x>^-1 dx = %s   sqrt = %s" % (mp.nstr(J, 20), mp.nstr(mp.sqrt(J), 20)))

    raw = [af_damping_annulus(j, n=20001) for j in range(11)]
    total = sum(raw)
    print("AF norm, a=<x>^-2, J_max=10: total = %s" % mp.nstr(total, 16))
    for j, v in enumerate(raw):
        print("  annulus %2d: %s" % (j, mp.nstr(v, 16)))
    cj = slowly_varying_majorant(raw, mp.mpf("0.25"))
    print("majorant (delta=0.25):")
    for j, v in enumerate(cj):
        print("  c_%-2d = %s" % (j, mp.nstr(v, 16)))


if __name__ == "__main__":
    main()
