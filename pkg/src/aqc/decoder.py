"""Hard-decision bit flipping (Z channel) and the bounded-distance closed form (X channel)."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Literal

import numpy as np
import scipy.sparse as sp
from scipy.stats import binom

from aqc.errors import ValidationError

FlipRule = Literal["flip-all-maximal", "flip-single-random"]


@dataclass(frozen=True)
class BitFlipConfig:
    max_iterations: int = 50
    flip_rule: FlipRule = "flip-all-maximal"

    def __post_init__(self) -> None:
        if self.max_iterations < 1:
            raise ValidationError("max_iterations must be >= 1")
        if self.flip_rule not in ("flip-all-maximal", "flip-single-random"):
            raise ValidationError(f"unknown flip rule {self.flip_rule!r}")


@dataclass
class DecodeOutcome:
    estimate: np.ndarray      # error estimate (received + decoded)
    decoded: np.ndarray       # word with zero syndrome when converged
    converged: bool
    iterations_used: int


def _as_csr(H) -> sp.csr_array:
    if sp.issparse(H):
        return sp.csr_array(H, dtype=np.int32)
    return sp.csr_array(np.asarray(H, dtype=np.int32))


def bit_flip_decode(H, received, cfg: BitFlipConfig = BitFlipConfig(), seed: int | None = None) -> DecodeOutcome:
    """Decode one binary word against parity check H."""
    Hs = _as_csr(H)
    y = np.asarray(received, dtype=np.int64) % 2
    if y.shape != (Hs.shape[1],):
        raise ValidationError(f"received word has length {y.size}, H has {Hs.shape[1]} columns")
    rng = np.random.default_rng(seed) if cfg.flip_rule == "flip-single-random" else None
    HT = Hs.T.tocsr()
    x = y.copy()
    it = 0
    syn = (Hs @ x) % 2
    while syn.any() and it < cfg.max_iterations:
        counts = HT @ syn
        top = counts.max()
        cand = np.flatnonzero(counts == top)
        if rng is not None:
            cand = cand[[rng.integers(cand.size)]]
        x[cand] ^= 1
        it += 1
        syn = (Hs @ x) % 2
    converged = not syn.any()
    return DecodeOutcome(estimate=(y + x) % 2, decoded=x, converged=converged, iterations_used=it)


class BatchBitFlip:
    """Flip-all-maximal decoding of many words at once (dense float32 products)."""

    def __init__(self, H, max_iterations: int = 50) -> None:
        Hd = H.toarray() if sp.issparse(H) else np.asarray(H)
        self.H = (Hd % 2).astype(np.float32)
        self.max_iterations = max_iterations

    def decode(self, errors: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Returns (residual, converged); residual = error + estimate, zero iff corrected."""
        x = np.asarray(errors, dtype=np.float32).copy()
        converged = np.zeros(x.shape[0], dtype=bool)
        active = np.arange(x.shape[0])
        for it in range(self.max_iterations + 1):
            syn = np.mod(x[active] @ self.H.T, 2)
            done = ~syn.any(axis=1)
            converged[active[done]] = True
            keep = ~done
            active, syn = active[keep], syn[keep]
            if active.size == 0 or it == self.max_iterations:
                break
            counts = syn @ self.H
            flip = counts == counts.max(axis=1, keepdims=True)
            sub = x[active]
            sub[flip] = 1 - sub[flip]
            x[active] = sub
        return x.astype(np.uint8), converged


def bounded_distance_block_error(n: int, t: int, eps: float) -> float:
    """P(more than t of n independent bits flip) = 1 - sum_{i<=t} C(n,i) eps^i (1-eps)^(n-i)."""
    if not 0 <= t <= n:
        raise ValidationError(f"need 0 <= t <= n, got t={t}, n={n}")
    if not 0 <= eps <= 1:
        raise ValidationError(f"crossover probability must lie in [0, 1], got {eps}")
    return float(binom.sf(t, n, eps))


def per_weight_failure(H, weight: int, cfg: BitFlipConfig = BitFlipConfig()) -> float:
    """Fraction of all weight-w error patterns that flip-all-maximal decoding does not correct."""
    n = H.shape[1]
    total = math.comb(n, weight)
    if total > 1 << 22:
        raise ValidationError(f"{total} patterns is too many for an exhaustive run")
    dec = BatchBitFlip(H, cfg.max_iterations)
    failures = 0
    combos = itertools.combinations(range(n), weight)
    while True:
        block = np.array(list(itertools.islice(combos, 1 << 14)), dtype=np.int64)
        if block.size == 0:
            break
        E = np.zeros((block.shape[0], n), dtype=np.uint8)
        np.put_along_axis(E, block.reshape(block.shape[0], -1), 1, axis=1)
        residual, conv = dec.decode(E)
        failures += int(np.count_nonzero(residual.any(axis=1) | ~conv))
    return failures / total
