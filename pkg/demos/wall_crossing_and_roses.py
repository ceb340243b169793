"""Wall crossing between suspension families and the rose-curve locus.

The straight-line interpolation F_t = (1-t) f_d + t f_d' between the
degree-d and degree-d' suspension maps can only hit the origin at t = 1/2,
and there it does so at exactly |d - d'| equatorial angles -- the odd powers
of a primitive 2|d-d'|-th root of unity.  Restricted to the equator the
family traces a rose curve r = cos(k theta) at the critical parameter.
"""

import math

import numpy as np

from chernkit import rose_curve, wall_family, wall_zeros


def main() -> None:
    d, dp = 1, -2
    fam = wall_family(d, dp)
    print(f"interpolating between degrees d = {d} and d' = {dp} (delta = {fam.delta})")

    print()
    print("minimum of |F_t| over the sphere as t sweeps 0 -> 1:")
    for t in np.linspace(0.0, 1.0, 11):
        mn = fam.min_norm(float(t))
        bar = "#" * int(round(40 * min(mn, 1.5) / 1.5))
        print(f"  t = {t:4.2f}  min|F| = {mn:8.2e}  {bar}")

    print()
    print("zeros at t = 1/2 (equatorial angles, odd multiples of pi/delta):")
    for phi in wall_zeros(d, dp):
        F = fam(0.5, phi, math.pi / 2)
        print(f"  phi = {phi:.9f}  |F(1/2, phi, pi/2)| = {np.linalg.norm(F):.2e}")

    print()
    print("winding number of the equatorial curve g_t(phi) (plateaus at d, d'):")
    for t in (0.1, 0.25, 0.4, 0.6, 0.75, 0.9):
        w = rose_curve(d, dp, t).winding()
        side = "t < 1/2" if t < 0.5 else "t > 1/2"
        print(f"  t = {t:4.2f}  ({side})  winding = {w:+d}")

    print()
    print("the critical curve is a rose:")
    rc = rose_curve(5, 7, 0.5)
    print(f"  d = 5, d' = 7  ->  polar exponent k = {rc.k_rose:.6f} (= 1/6)")
    print(f"  max deviation from r = cos(k theta): {rc.polar_residual():.2e}")
    print(f"  parameter interval needed to close the rose: {rc.interval} * pi")
    print(f"  Dirac points created on crossing the wall: {abs(5 - 7)}")


if __name__ == "__main__":
    main()
