"""P_e versus p for [[255,159,5/17]] at several channel asymmetries, written as CSV."""

import argparse
import sys

import numpy as np

from aqc.css import asymmetric_bch_ldpc
from aqc.sim import SimPlan, sweep, write_csv


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--p-min", type=float, default=0.005)
    ap.add_argument("--p-max", type=float, default=0.05)
    ap.add_argument("--points", type=int, default=8)
    ap.add_argument("--asymmetry", type=float, nargs="+", default=[1, 10, 100])
    ap.add_argument("--trials", type=int, default=10_000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--delta", type=int, default=5)
    ap.add_argument("--out", type=argparse.FileType("w"), default=sys.stdout)
    args = ap.parse_args()

    code = asymmetric_bch_ldpc(2, 1, 4, 2, args.delta, compute_exact_distances=False)
    grid = np.geomspace(args.p_min, args.p_max, args.points).tolist()
    plan = SimPlan(code, grid, args.asymmetry, args.trials, args.seed)
    print(f"# {code.short_label()}", file=sys.stderr)
    write_csv(sweep(plan), args.out)


if __name__ == "__main__":
    main()
