"""Interval table for S^2 from estimated covering radii, plus seed spread.

    python scripts/s2_intervals.py --kmax 4 --seeds 4
"""
import argparse

from scl import bounds as B
from scl.covering_packing import sphere_cov_estimate


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--kmax", type=int, default=4)
    ap.add_argument("--seeds", type=int, default=4)
    ap.add_argument("--starts", type=int, default=32)
    ap.add_argument("--grid-size", type=int, default=4000)
    args = ap.parse_args()
    prov = B.make_sphere_cov_provider(2, args.starts, args.grid_size, 0)
    print(B.emit_interval_data(2, args.kmax, prov).to_csv(), end="")
    print("\nk,min,max,spread")
    for k in range(2, 2 * args.kmax + 3):
        vals = [sphere_cov_estimate(2, k, args.starts, args.grid_size, s).radius_estimate for s in range(args.seeds)]
        print(f"{k},{min(vals):.5f},{max(vals):.5f},{max(vals) - min(vals):.5f}")


if __name__ == "__main__":
    main()
