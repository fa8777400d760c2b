"""Print the s = 4 BCH-LDPC family (or another s) with exact asymmetry ratios."""

import argparse

from aqc.css import corollary_2d_params, table1_rows


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--s", type=int, default=4)
    args = ap.parse_args()
    print(f"{'delta':>5}  {'code':<20} {'d_z/d_x':>8} {'rate':>6}  closed form")
    for r in table1_rows(args.s):
        label = f"[[{r['n']},{r['k']},{r['d_x']}/{r['d_z']}]]_2"
        ok = (r["n"], r["k"], r["d_x"], r["d_z"]) == corollary_2d_params(args.s, r["delta"])
        print(f"{r['delta']:>5}  {label:<20} {r['asymmetry']:>8.4f} {r['rate']:>6.3f}  {'ok' if ok else 'MISMATCH'}")


if __name__ == "__main__":
    main()
