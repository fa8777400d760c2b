"""Check null(origin-free incidence matrix) = cyclic code with roots Z for all small instances."""

import argparse
import time

from aqc.codes import verify_cyclic_eg_identity
from aqc.fields import is_prime


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-n", type=int, default=1023, help="largest length p^(ms) - 1")
    args = ap.parse_args()
    print(f"{'p':>3} {'m':>2} {'s':>2} {'mu':>2} {'n':>5} {'|Z|':>5} {'rank':>5} {'method':>9} {'sec':>6}  result")
    failures = 0
    for p in (q for q in range(2, args.max_n + 2) if is_prime(q)):
        for ms in range(2, 64):
            if p ** ms - 1 > args.max_n:
                break
            for s in (d for d in range(1, ms + 1) if ms % d == 0):
                m = ms // s
                for mu in range(1, m):
                    t = time.perf_counter()
                    r = verify_cyclic_eg_identity(m, mu, s, p)
                    failures += not r.equal
                    print(f"{p:>3} {m:>2} {s:>2} {mu:>2} {r.n:>5} {r.root_count:>5} {r.row_rank:>5} "
                          f"{r.method:>9} {time.perf_counter() - t:>6.1f}  {'equal' if r.equal else 'DIFFERENT'}",
                          flush=True)
    print(f"\n{failures} failing instances")


if __name__ == "__main__":
    main()
