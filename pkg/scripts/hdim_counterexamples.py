"""Search random S^2 samples for cases where the packing bound on the Z2
homological dimension fails for the ambient Cech complex, and show that the
neighbourhood complex of the Borsuk graph still satisfies it.

    python scripts/hdim_counterexamples.py --seeds 50 --N 12
"""
import argparse

from scl import bounds as B
from scl.sphere_geom import sample_uniform


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--seeds", type=int, default=50)
    ap.add_argument("--N", type=int, default=12)
    ap.add_argument("--delta", type=float, nargs="+", default=[2.0, 2.4, 2.8])
    args = ap.parse_args()
    found = 0
    for seed in range(args.seeds):
        s = sample_uniform(2, args.N, seed)
        for d in args.delta:
            reps = {r.statement: r for r in B.hdim_bound_check(s, d)}
            c, nb = reps["pack_hdim_z2"], reps["pack_hdim_z2_neighborhood"]
            if not c.holds:
                found += 1
                print(f"seed={seed} delta={d}: pack-2={c.rhs}, hdim Cech={c.lhs}, "
                      f"hdim N(Bor)={nb.lhs} (Betti {nb.witnesses['betti_z2']}), holds on N(Bor)={nb.holds}")
    print(f"{found} counterexamples in {args.seeds * len(args.delta)} runs")


if __name__ == "__main__":
    main()
