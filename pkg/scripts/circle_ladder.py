"""Reduced Z2 homology of Cech(X; r) for N evenly spaced circle points.

Prints the observed Betti numbers next to the exact finite-sample type and
the continuum type at every midpoint (j + 1/2) pi / N.

    python scripts/circle_ladder.py --N 18 --max-dim 6
"""
import argparse
import math

from scl import bounds as B
from scl.complexes import CECH, build_filtration
from scl.homology import persistence
from scl.sphere_geom import sample_evenly_spaced_circle


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--N", type=int, default=18)
    ap.add_argument("--max-dim", type=int, default=6)
    args = ap.parse_args()
    N, top = args.N, args.max_dim
    f = build_filtration(sample_evenly_spaced_circle(N), CECH, top)
    bc = persistence(f)
    print(f"{len(f)} simplices")
    print(f"{'r/pi':>7} {'observed':<18} {'finite':<18} continuum")
    for j in range(N - 1):
        r = (j + 0.5) * math.pi / N
        got = {d: v for d, v in bc.betti_at(r).items() if v and d < top}
        fin = {d: v for d, v in B.finite_circle_cech_betti(N, r).items() if d < top}
        cont = B.s1_ground_truth(r=r).homotopy_sphere_dim
        print(f"{r / math.pi:7.4f} {str(got):<18} {str(fin):<18} S^{cont}")


if __name__ == "__main__":
    main()
