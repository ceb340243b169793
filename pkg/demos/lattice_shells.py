"""Quadratic integer rings and commensurate lattice shells.

A distance N on the square (or triangular) lattice supports the N-fold
dilated copy of the nearest-neighbor shell exactly when the shell at squared
distance N^2 has only the |units| dilated points -- which is a statement
about how rational primes behave in Z[i] (resp. the Eisenstein integers).
This script walks through the prime classification, the shell enumeration,
and the classic non-UFD counterexample in Z[sqrt(-14)].
"""

from chernkit import (
    classify_prime,
    commensurate_distances,
    is_isolated_norm,
    make_ring,
    shell_enumerate,
)


def main() -> None:
    gauss = make_ring(1)
    eisen = make_ring(3)

    print("prime behavior in Z[i] (norms a^2 + b^2):")
    for p in (2, 3, 5, 7, 11, 13, 17, 19):
        b = classify_prime(gauss, p).value
        sh = shell_enumerate(gauss, p)
        rep = f"{len(sh.points)} points" if sh.represented else "not a norm"
        print(f"  p = {p:2d}  {b:<8}  shell at {p}: {rep}")

    print()
    print("square-lattice distances with commensurate shells (limit 20):")
    print(f"  {commensurate_distances('square', 20)}")
    print("  (exactly the N with no prime factor p = 1 mod 4)")

    print()
    print("triangular-lattice distances with commensurate shells (limit 12):")
    print(f"  {commensurate_distances('triangular', 12)}")

    print()
    print("isolated norms vs. crowded shells in Z[i]:")
    for n in (9, 25, 49):
        sh = shell_enumerate(gauss, n)
        tag = "isolated" if is_isolated_norm(gauss, n) else "crowded"
        print(f"  norm {n:3d}: {len(sh.points):2d} shell points  ->  {tag}")

    print()
    print("Eisenstein shell at norm 4 (six units, six points -> isolated):")
    sh4 = shell_enumerate(eisen, 4)
    print(f"  points: {sorted(sh4.points)}")

    print()
    print("the UFD hypothesis matters: Z[sqrt(-14)], norm 225 = 15^2")
    ring14 = make_ring(14)
    sh = shell_enumerate(ring14, 225)
    print(f"  shell has {len(sh.points)} points; isolated: {sh.isolated}")
    extras = [p for p in sorted(sh.points) if p not in ((15, 0), (-15, 0))]
    print(f"  non-dilated representatives: {extras}")
    print("  so 15 is NOT a commensurate distance even though its shell is full")


if __name__ == "__main__":
    main()
