"""Three bands on the kagome lattice: Chern numbers beyond the 2-band map.

With a complex second-neighbor amplitude i*u1 the kagome bands are gapped
except at u1 in {0, +-sqrt(3)}, and the Berry-plaquette engine assigns each
band an integer Chern number summing to zero.  The 2-band degree engines do
not apply here -- the plaquette method is the one that generalizes.
"""

import math

from chernkit import (
    DEGENERATE,
    MethodInapplicableError,
    builtin_model,
    chern_berry_lattice,
    degree_integral,
    locate_transition,
    scan,
)


def main() -> None:
    kagome = builtin_model("kagome")

    print("per-band Chern numbers at t1 = u1 = 1:")
    total = 0
    for band in range(3):
        r = chern_berry_lattice(kagome, band=band, grid=80)
        total += r.value
        print(
            f"  band {band}:  C = {r.value:+d}   min gap on grid = "
            f"{r.diagnostics['min_gap']:.3f}"
        )
    print(f"  band sum = {total}")

    print()
    print("the 2-band degree engines refuse 3-band input:")
    try:
        degree_integral(kagome)
    except MethodInapplicableError as exc:
        print(f"  degree_integral: {exc}")

    print()
    print("degeneracy locations along u1 (t1 = 1):")
    for lo, hi, label in ((-2.5, -1.0, "-sqrt(3)"), (-0.5, 0.5, "0"), (1.0, 2.5, "+sqrt(3)")):
        x = locate_transition(kagome, "u1", lo, hi)
        print(f"  gap closes at u1 = {x:+.9f}   (expected {label})")
    print(f"  sqrt(3) = {math.sqrt(3):.9f}")

    print()
    print("1D scan over u1 in [-2, 2] (lowest band):")
    diagram = scan(kagome, [("u1", -2.0, 2.0, 9)], grid=40, kgrid=24)
    for cell in diagram.cells:
        label = cell.chern
        mark = "*" if label == DEGENERATE else " "
        print(f"  u1 = {cell.params['u1']:+4.1f}  C = {label!s:>10} {mark}")


if __name__ == "__main__":
    main()
