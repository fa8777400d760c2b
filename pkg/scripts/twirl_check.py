"""Compare the numeric Pauli twirl of the relaxation channel with the closed form."""

import argparse

import numpy as np

from aqc.channel import (RelaxationParams, asymmetry_approx, asymmetry_exact, kraus_ops, pauli_twirl_closed,
                         pauli_twirl_numeric)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--samples", type=int, default=1000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    worst = 0.0
    for _ in range(args.samples):
        T1 = 10 ** rng.uniform(-1, 2)
        prm = RelaxationParams(T1, T1 * rng.uniform(0.01, 2.0), T1 * 10 ** rng.uniform(-4, 1))
        a, b = pauli_twirl_numeric(kraus_ops(prm)), pauli_twirl_closed(prm)
        worst = max(worst, abs(a.p_x - b.p_x), abs(a.p_y - b.p_y), abs(a.p_z - b.p_z))
    print(f"max |numeric - closed| over {args.samples} triples: {worst:.2e}")

    print(f"\n{'T1/T2':>6} {'A exact':>10} {'2T1/T2-1':>9} {'rel err':>8}   (t = T1/1000)")
    for r in (1, 2, 5, 10, 50, 100):
        prm = RelaxationParams(1.0, 1.0 / r, 1e-3)
        ex, ap_ = asymmetry_exact(prm), asymmetry_approx(prm)
        print(f"{r:>6} {ex:>10.4f} {ap_:>9.1f} {abs(ex - ap_) / ap_:>8.2%}")


if __name__ == "__main__":
    main()
