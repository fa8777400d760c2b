"""Monte Carlo P_e^z, closed-form P_e^x and combined logical error rate sweeps.

Every trial owns a counter-based stream: Philox keyed by (seed, p index,
A index) with the trial number in the second counter word.  Results are
therefore independent of batch size and of how trials are split up.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Iterable, Literal, TextIO

import numpy as np
from scipy.stats import binomtest

from aqc.channel import bsc_crossovers, pauli_from_total
from aqc.css import AsymmetricCSSCode
from aqc.decoder import BatchBitFlip, bounded_distance_block_error
from aqc.errors import ValidationError

CSV_HEADER = ("p", "A", "eps_x", "eps_z", "pe_x", "pe_z", "pe_z_ci_low", "pe_z_ci_high", "pe",
              "trials", "block_errors", "nonconverged")


@dataclass(frozen=True)
class StopRule:
    max_trials: int
    min_block_errors: int | None = 100

    def __post_init__(self) -> None:
        if self.max_trials < 1:
            raise ValidationError("max_trials must be >= 1")


@dataclass
class SimPlan:
    code: AsymmetricCSSCode
    p_grid: list[float]
    asymmetries: list[float]
    trials: int
    seed: int = 0
    min_block_errors: int | None = 100
    channel_model: Literal["bsc", "pauli"] = "bsc"
    max_iterations: int = 50
    batch_size: int = 2048

    def __post_init__(self) -> None:
        if self.trials < 1:
            raise ValidationError("trials must be >= 1")
        if not self.p_grid or not self.asymmetries:
            raise ValidationError("p grid and asymmetry list must be nonempty")
        if self.channel_model not in ("bsc", "pauli"):
            raise ValidationError(f"unknown channel model {self.channel_model!r}")

    @property
    def stop_rule(self) -> StopRule:
        return StopRule(self.trials, self.min_block_errors)


@dataclass
class ZEstimate:
    pe: float
    ci_low: float
    ci_high: float
    trials: int
    block_errors: int
    nonconverged: int


@dataclass
class SimRow:
    p: float
    A: float
    eps_x: float
    eps_z: float
    pe_x: float
    pe_z: float
    pe_z_ci_low: float
    pe_z_ci_high: float
    pe: float
    trials: int
    block_errors: int
    nonconverged: int

    def as_tuple(self) -> tuple:
        return tuple(getattr(self, k) for k in CSV_HEADER)


def wilson_interval(errors: int, trials: int, confidence: float = 0.95) -> tuple[float, float]:
    ci = binomtest(errors, trials).proportion_ci(confidence_level=confidence, method="wilson")
    return float(ci.low), float(ci.high)


def combine(pe_x: float, pe_z: float) -> float:
    return pe_x + pe_z - pe_x * pe_z


def trial_uniforms(seed: int, cell: tuple[int, int], start: int, count: int, n: int) -> np.ndarray:
    """Uniforms for trials start..start+count-1, one Philox stream per trial."""
    key = np.random.SeedSequence([seed, *cell]).generate_state(2, np.uint64)
    out = np.empty((count, n))
    for i in range(count):
        bitgen = np.random.Philox(key=key, counter=[0, start + i, 0, 0])
        out[i] = np.random.Generator(bitgen).random(n)
    return out


def _run_trials(seed: int, cell: tuple[int, int], n: int, stop: StopRule, batch_size: int, trial_fn):
    """Drive batched trials; trial_fn(U) -> (fail bool array, nonconverged bool array)."""
    fails_total = noconv_total = done = 0
    while done < stop.max_trials:
        count = min(batch_size, stop.max_trials - done)
        U = trial_uniforms(seed, cell, done, count, n)
        fail, noconv = trial_fn(U)
        if stop.min_block_errors is not None:
            cum = fails_total + np.cumsum(fail)
            hit = np.flatnonzero(cum >= stop.min_block_errors)
            if hit.size:
                cut = hit[0] + 1
                fail, noconv, count = fail[:cut], noconv[:cut], cut
        fails_total += int(fail.sum())
        noconv_total += int(noconv.sum())
        done += count
        if stop.min_block_errors is not None and fails_total >= stop.min_block_errors:
            break
    return done, fails_total, noconv_total


def simulate_z(code: AsymmetricCSSCode, eps_z: float, trials: int, seed: int,
               stop_rule: StopRule | None = None, cell: tuple[int, int] = (0, 0),
               max_iterations: int = 50, batch_size: int = 2048,
               decoder: BatchBitFlip | None = None) -> ZEstimate:
    """Send the zero word through a BSC(eps_z) and bit-flip decode against H_z."""
    if not 0 <= eps_z <= 1:
        raise ValidationError(f"eps_z must lie in [0, 1], got {eps_z}")
    stop = stop_rule or StopRule(trials, None)
    dec = decoder or BatchBitFlip(code.cz.sparse_parity_check, max_iterations)
    n = code.n

    def trial(U):
        E = (U >= 1.0 - eps_z).astype(np.uint8) if eps_z > 0 else np.zeros(U.shape, np.uint8)
        residual, conv = dec.decode(E)
        return residual.any(axis=1) | ~conv, ~conv

    done, fails, noconv = _run_trials(seed, cell, n, stop, batch_size, trial)
    lo, hi = wilson_interval(fails, done)
    return ZEstimate(fails / done, lo, hi, done, fails, noconv)


def _x_radius(code: AsymmetricCSSCode) -> int:
    if code.construction != "bch-ldpc":
        raise ValidationError(f"{code.construction} codes have no bounded-distance X model; simulate P_e^x")
    return (code.params["delta"] - 1) // 2


def pe_x_closed(code: AsymmetricCSSCode, eps_x: float) -> float:
    """Bounded-distance block error of the BCH X decoder, t = (delta - 1) // 2."""
    return bounded_distance_block_error(code.n, _x_radius(code), eps_x)


def simulate_bounded_distance(n: int, t: int, eps: float, trials: int, seed: int,
                              batch_size: int = 8192) -> ZEstimate:
    """Monte Carlo of the rule 'fail iff more than t bits flip'."""
    def trial(U):
        fail = (U < eps).sum(axis=1) > t
        return fail, np.zeros_like(fail)
    done, fails, _ = _run_trials(seed, (0, 0), n, StopRule(trials, None), batch_size, trial)
    lo, hi = wilson_interval(fails, done)
    return ZEstimate(fails / done, lo, hi, done, fails, 0)


def _pauli_cell(plan: SimPlan, dec: BatchBitFlip, p: float, A: float, cell: tuple[int, int]):
    """Correlated 4-ary channel: X part from u in [p_i, p_i+p_x+p_y), Z part from u >= p_i + p_x."""
    ch = pauli_from_total(p, A)
    t = _x_radius(plan.code)
    lo_x, lo_z = ch.p_i, ch.p_i + ch.p_x
    joint = []

    def trial(U):
        EX = (U >= lo_x) & (U < lo_z + ch.p_y)
        EZ = (U >= lo_z).astype(np.uint8) if p > 0 else np.zeros(U.shape, np.uint8)
        residual, conv = dec.decode(EZ)
        zfail = residual.any(axis=1) | ~conv
        joint.append(zfail | (EX.sum(axis=1) > t))
        return zfail, ~conv

    done, fails, noconv = _run_trials(plan.seed, cell, plan.code.n, plan.stop_rule, plan.batch_size, trial)
    pe_joint = float(np.concatenate(joint)[:done].mean())
    return ZEstimate(fails / done, *wilson_interval(fails, done), done, fails, noconv), pe_joint


def sweep(plan: SimPlan) -> list[SimRow]:
    """One row per (p, A), p-major order."""
    code = plan.code
    dec = BatchBitFlip(code.cz.sparse_parity_check, plan.max_iterations)
    rows = []
    for i, p in enumerate(plan.p_grid):
        for j, A in enumerate(plan.asymmetries):
            eps_x, eps_z = bsc_crossovers(p, A)
            pe_x = pe_x_closed(code, eps_x)
            if plan.channel_model == "pauli":
                z, pe = _pauli_cell(plan, dec, p, A, (i, j))
            else:
                z = simulate_z(code, eps_z, plan.trials, plan.seed, plan.stop_rule, (i, j),
                               plan.max_iterations, plan.batch_size, dec)
                pe = combine(pe_x, z.pe)
            rows.append(SimRow(p, A, eps_x, eps_z, pe_x, z.pe, z.ci_low, z.ci_high, pe,
                               z.trials, z.block_errors, z.nonconverged))
    return rows


def write_csv(rows: Iterable[SimRow], fh: TextIO) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in rows:
        w.writerow([_fmt(v) for v in r.as_tuple()])


def rows_to_csv(rows: Iterable[SimRow]) -> str:
    buf = io.StringIO()
    write_csv(rows, buf)
    return buf.getvalue()


def _fmt(v) -> str:
    if isinstance(v, float):
        return repr(v) if math.isfinite(v) else str(v)
    return str(v)
