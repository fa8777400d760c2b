"""aqc: construct, verify and simulate asymmetric BCH-LDPC / EG-LDPC quantum codes.

Exit codes: 0 success, 2 validation failure (including a FAIL in ``verify``),
3 internal consistency failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import os
import sys
from pathlib import Path

import numpy as np

from aqc.channel import (RelaxationParams, asymmetry_approx, asymmetry_exact, bsc_crossovers,
                         pauli_from_total, pauli_twirl_closed)
from aqc.codes import min_weight_outside
from aqc.css import AsymmetricCSSCode, asymmetric_bch_ldpc, asymmetric_eg_ldpc, check_nesting, table1_rows
from aqc.errors import BudgetExceeded, InternalCheckError, ValidationError
from aqc.formats import code_from_files, load_descriptor, rebuild, save_code
from aqc.geometry import a_eg
from aqc.sim import SimPlan, sweep, write_csv

EXIT_OK, EXIT_VALIDATION, EXIT_INTERNAL = 0, 2, 3


def _floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from exc


def _default_seed() -> int:
    env = os.environ.get("AQC_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise ValidationError(f"AQC_SEED must be an integer, got {env!r}") from None


# -- channel ----------------------------------------------------------------

def cmd_channel(args: argparse.Namespace) -> int:
    relax = [args.t1, args.t2, args.t]
    total = [args.p, args.asymmetry]
    if any(v is not None for v in relax) and any(v is not None for v in total):
        raise ValidationError("give either --t1/--t2/--t or --p/--asymmetry, not both")
    if all(v is not None for v in relax):
        params = RelaxationParams(args.t1, args.t2, args.t)
        ch = pauli_twirl_closed(params)
        out = dict(p_x=ch.p_x, p_y=ch.p_y, p_z=ch.p_z, p_i=ch.p_i,
                   A_exact=asymmetry_exact(params), A_approx=asymmetry_approx(params))
    elif all(v is not None for v in total):
        ch = pauli_from_total(args.p, args.asymmetry)
        eps_x, eps_z = bsc_crossovers(args.p, args.asymmetry)
        out = dict(p_x=ch.p_x, p_y=ch.p_y, p_z=ch.p_z, p_i=ch.p_i, A=args.asymmetry,
                   eps_x=eps_x, eps_z=eps_z)
    else:
        raise ValidationError("need all of --t1 --t2 --t, or both --p and --asymmetry")
    print(json.dumps(out, indent=2))
    return EXIT_OK


# -- construct --------------------------------------------------------------

def cmd_construct(args: argparse.Namespace) -> int:
    exact = not args.no_exact
    if args.kind == "bch-ldpc":
        code = asymmetric_bch_ldpc(args.m, args.mu, args.s, args.p, args.delta, exact)
    else:
        code = asymmetric_eg_ldpc(args.m, args.mu_x, args.mu_z, args.s, args.p, exact)
    if args.out:
        save_code(code, args.out, args.alist_dir)
    print(code.short_label())
    return EXIT_OK


# -- verify -----------------------------------------------------------------

def _expected_bounds(desc: dict) -> tuple[int, int]:
    p = desc["params"]
    if desc["construction"] == "bch-ldpc":
        return p["delta"], a_eg(p["m"], p["mu"], p["mu"] - 1, p["s"], p["p"])
    return (a_eg(p["m"], p["mu_x"], p["mu_x"] - 1, p["s"], p["p"]) + 1,
            a_eg(p["m"], p["mu_z"], p["mu_z"] - 1, p["s"], p["p"]) + 1)


def verify_report(path: str | Path) -> list[tuple[str, bool, str]]:
    desc, hx, hz = load_descriptor(path)
    code = code_from_files(desc, hx, hz)
    checks: list[tuple[str, bool, str]] = []
    n_ok = hx.shape[1] == desc["n"] == hz.shape[1]
    checks.append(("length", n_ok, f"H_x has {hx.shape[1]} columns, H_z {hz.shape[1]}, descriptor n={desc['n']}"))
    if not n_ok:
        return checks
    nest = check_nesting(code.cx, code.cz)
    checks.append(("nesting", nest, "H_z H_x^T = 0" if nest else "H_z H_x^T != 0"))
    k = code.k
    checks.append(("dimension", k == desc["k"], f"k_x + k_z - n = {k}, descriptor k = {desc['k']}"))
    bx, bz = _expected_bounds(desc)
    for name, d, b in (("d_x", desc["d_x"], bx), ("d_z", desc["d_z"], bz)):
        if d["kind"] == "bound":
            checks.append((f"{name} bound", d["value"] == b, f"recorded {d['value']}, formula {b}"))
        else:
            checks.append((f"{name} bound", d["value"] is None or d["value"] >= b,
                           f"exact {d['value']} vs formula bound {b}"))
    if nest and all(desc[d]["kind"] == "exact" for d in ("d_x", "d_z")):
        try:
            ox = min_weight_outside(code.cx, code.cz.dual())
            oz = min_weight_outside(code.cz, code.cx.dual())
        except BudgetExceeded as exc:
            checks.append(("exact distances", True, f"skipped: {exc}"))
        else:
            got = tuple(None if v == math.inf else int(v) for v in (ox.weight, oz.weight))
            want = (desc["d_x"]["value"], desc["d_z"]["value"])
            checks.append(("exact distances", got == want, f"enumerated {got[0]}/{got[1]}, recorded {want[0]}/{want[1]}"))
    ref = rebuild(desc)
    same = (np.array_equal(ref.cx.parity_check % 2, code.cx.parity_check % 2)
            and np.array_equal(ref.cz.parity_check % 2, code.cz.parity_check % 2))
    checks.append(("reconstruction", same, "stored matrices match a fresh construction from params"
                   if same else "stored matrices differ from a fresh construction"))
    return checks


def cmd_verify(args: argparse.Namespace) -> int:
    checks = verify_report(args.descriptor)
    for name, ok, detail in checks:
        print(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
    return EXIT_OK if all(ok for _, ok, _ in checks) else EXIT_VALIDATION


# -- table1 -----------------------------------------------------------------

def cmd_table1(args: argparse.Namespace) -> int:
    print(f"{'s':>2} {'delta':>5}  {'code':<22} {'d_z/d_x':>8} {'rate':>6}")
    for r in table1_rows(args.s):
        label = f"[[{r['n']},{r['k']},{r['d_x']}/{r['d_z']}]]_2"
        print(f"{r['s']:>2} {r['delta']:>5}  {label:<22} {r['asymmetry']:>8.4f} {r['rate']:>6.3f}")
    return EXIT_OK


# -- simulate ---------------------------------------------------------------

def cmd_simulate(args: argparse.Namespace) -> int:
    desc, hx, hz = load_descriptor(args.descriptor)
    code: AsymmetricCSSCode = code_from_files(desc, hx, hz)
    seed = args.seed if args.seed is not None else _default_seed()
    plan = SimPlan(code, args.p_grid, args.asymmetry, args.trials, seed,
                   None if args.min_block_errors <= 0 else args.min_block_errors,
                   args.channel_model, args.max_iterations)
    rows = sweep(plan)
    if args.out:
        with open(args.out, "w", newline="") as fh:
            write_csv(rows, fh)
    else:
        write_csv(rows, sys.stdout)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="aqc", description=__doc__.splitlines()[0])
    ap.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = ap.add_subparsers(dest="command", required=True)

    ch = sub.add_parser("channel", help="Pauli-twirled relaxation channel or (p, A) split, as JSON")
    ch.add_argument("--t1", type=float, help="relaxation time T1")
    ch.add_argument("--t2", type=float, help="dephasing time T2 (<= 2 T1)")
    ch.add_argument("--t", type=float, help="exposure time t")
    ch.add_argument("--p", type=float, help="total error probability")
    ch.add_argument("--asymmetry", type=float, help="channel asymmetry A = p_z/p_x")
    ch.set_defaults(func=cmd_channel)

    co = sub.add_parser("construct", help="build a code, print [[n,k,dx/dz]]_p, optionally save it")
    csub = co.add_subparsers(dest="kind", required=True)
    for name, helptext in (("bch-ldpc", "BCH C_x with cyclic EG-LDPC C_z"),
                           ("eg-ldpc", "two non-cyclic EG-LDPC codes")):
        c = csub.add_parser(name, help=helptext)
        c.add_argument("--m", type=int, required=True, help="geometry dimension m")
        if name == "bch-ldpc":
            c.add_argument("--mu", type=int, required=True, help="flat dimension of C_z")
            c.add_argument("--delta", type=int, required=True, help="BCH design distance (<= delta0)")
        else:
            c.add_argument("--mu-x", type=int, required=True, help="flat dimension of C_x")
            c.add_argument("--mu-z", type=int, required=True, help="flat dimension of C_z")
        c.add_argument("--s", type=int, default=1, help="field GF(p^s) of the geometry (default 1)")
        c.add_argument("--p", type=int, default=2, help="characteristic (default 2)")
        c.add_argument("--out", help="descriptor JSON path")
        c.add_argument("--alist-dir", help="directory for the alist files (default: next to --out)")
        c.add_argument("--no-exact", action="store_true", help="skip exact distance enumeration")
        c.set_defaults(func=cmd_construct)

    ve = sub.add_parser("verify", help="re-check a saved code descriptor (PASS/FAIL per check)")
    ve.add_argument("descriptor", help="descriptor JSON path")
    ve.set_defaults(func=cmd_verify)

    tb = sub.add_parser("table1", help="the seven s=4 BCH-LDPC codes with rates")
    tb.add_argument("--s", type=int, default=4, help="field extension s (default 4)")
    tb.set_defaults(func=cmd_table1)

    si = sub.add_parser("simulate", help="P_e sweep over (p, A) written as CSV")
    si.add_argument("descriptor", help="descriptor JSON path (bch-ldpc construction)")
    si.add_argument("--p-grid", type=_floats, required=True, help="comma-separated total error probabilities")
    si.add_argument("--asymmetry", type=_floats, required=True, help="comma-separated A values")
    si.add_argument("--trials", type=int, default=10_000, help="maximum trials per cell (default 10000)")
    si.add_argument("--seed", type=int, help="RNG seed (default: $AQC_SEED or 0)")
    si.add_argument("--min-block-errors", type=int, default=100,
                    help="stop a cell after this many block errors; 0 disables (default 100)")
    si.add_argument("--max-iterations", type=int, default=50, help="bit-flipping iterations (default 50)")
    si.add_argument("--channel-model", choices=("bsc", "pauli"), default="bsc",
                    help="two independent BSCs (default) or the correlated 4-ary channel")
    si.add_argument("--out", help="CSV path (default stdout)")
    si.set_defaults(func=cmd_simulate)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (InternalCheckError, AssertionError) as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
