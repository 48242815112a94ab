#!/usr/bin/env python3
"""Discrete dispersion reference for the leapfrog + 7-point divergence-form
stencil on a uniform grid with unit wave speed.

For a separated mode sin(k x_1) the scheme oscillates at

  omega_h = (2/dt) * asin( (dt/h) * sin(k h / 2) )

and the stability bound in 3D is dt <= h / sqrt(3).  The numbers below match
the grid used by the solver unit test (box [-pi,pi]^3, N=48, k=2, cfl=0.4).
"""

import mpmath as mp

mp.mp.dps = 30


def omega_h(k, h, dt):
    return 2 / dt * mp.asin(dt / h * mp.sin(k * h / 2))


def main():
    N = 48
    L = mp.pi
    h = 2 * L / N
    dt = mp.mpf("0.4") * h
    k = mp.mpf(2)
    wh = omega_h(k, h, dt)
    print("h = %s, dt = %s" % (mp.nstr(h, 20), mp.nstr(dt, 20)))
    print("omega_h(k=2)      = %s" % mp.nstr(wh, 20))
    print("continuum omega   = 2")
    print("relative gap      = %s" % mp.nstr(wh / 2 - 1, 8))
    # refinement factor: gap scales like h^2, so N->96 shrinks it ~4x
    h2 = L / 48
    dt2 = mp.mpf("0.4") * h2
    wh2 = omega_h(k, h2, dt2)
    print("omega_h at N=96   = %s  (gap %s)" % (mp.nstr(wh2, 20), mp.nstr(wh2 / 2 - 1, 8)))
    print("3D stability bound dt/h = 1/sqrt(3) = %s" % mp.nstr(1 / mp.sqrt(3), 20))


if __name__ == "__main__":
    main()
