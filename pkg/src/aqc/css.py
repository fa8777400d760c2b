"""Asymmetric CSS codes [[n, k_x + k_z - n, d_x/d_z]] from nested classical codes."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Any

from aqc.codes import (DISTANCE_BUDGET, DistanceInfo, LinearCode, bch_narrow_sense, code_from_defining_set,
                       cyclic_eg_dual_root_set, eg_ldpc_type1, min_weight_outside)
from aqc.errors import BudgetExceeded, InternalCheckError, NestingError, ValidationError
from aqc.geometry import Geometry, a_eg

log = logging.getLogger(__name__)

EXACT_LENGTH_LIMIT = 64


@dataclass
class AsymmetricCSSCode:
    cx: LinearCode
    cz: LinearCode
    d_x: DistanceInfo
    d_z: DistanceInfo
    pure: bool | None = None
    construction: str = "manual"
    params: dict[str, Any] = field(default_factory=dict)

    @property
    def n(self) -> int:
        return self.cx.n

    @property
    def p(self) -> int:
        return self.cx.p

    @property
    def k(self) -> int:
        return self.cx.k + self.cz.k - self.n

    @property
    def rate(self) -> float:
        return self.k / self.n

    def label(self) -> str:
        def fmt(d: DistanceInfo) -> str:
            v = d.value
            if v is None:
                return "?"
            if v == math.inf:
                return "inf"
            return f"{v}" if d.kind == "exact" else f">={v}"
        return f"[[{self.n},{self.k},{fmt(self.d_x)}/{fmt(self.d_z)}]]_{self.p}"

    def short_label(self) -> str:
        """Label without bound markers, as codes are usually quoted."""
        vx, vz = self.d_x.value, self.d_z.value
        return f"[[{self.n},{self.k},{vx}/{vz}]]_{self.p}"


def check_nesting(cx: LinearCode, cz: LinearCode) -> bool:
    """C_x^perp <= C_z, i.e. H_z H_x^T = 0."""
    if cx.n != cz.n or cx.p != cz.p:
        raise ValidationError(f"length/characteristic mismatch: ({cx.n},{cx.p}) vs ({cz.n},{cz.p})")
    if cx.n - cx.k > cz.k:
        return False
    if cx.parity_check.shape[0] == 0 or cz.parity_check.shape[0] == 0:
        return True
    return not ((cz.parity_check @ cx.parity_check.T) % cx.p).any()


def _exact_allowed(cx: LinearCode, cz: LinearCode, budget: int) -> bool:
    return cx.n <= EXACT_LENGTH_LIMIT and cx.p ** min(cx.k, cz.k) <= budget


def css_construct(cx: LinearCode, cz: LinearCode, compute_exact_distances: bool = True,
                  bound_x: DistanceInfo | None = None, bound_z: DistanceInfo | None = None,
                  construction: str = "manual", params: dict | None = None,
                  budget: int = DISTANCE_BUDGET) -> AsymmetricCSSCode:
    if not check_nesting(cx, cz):
        raise NestingError("C_x^perp is not contained in C_z (H_z H_x^T != 0)")
    d_x = bound_x or DistanceInfo(lower_bound=cx.distance.value, provenance=cx.distance.provenance)
    d_z = bound_z or DistanceInfo(lower_bound=cz.distance.value, provenance=cz.distance.provenance)
    pure = None
    if compute_exact_distances and _exact_allowed(cx, cz, budget):
        try:
            ox = min_weight_outside(cx, cz.dual(), budget)
            oz = min_weight_outside(cz, cx.dual(), budget)
        except BudgetExceeded as exc:
            log.info("exact distances skipped: %s", exc)
        else:
            d_x = DistanceInfo(exact=ox.weight, lower_bound=d_x.lower_bound, provenance="enumeration")
            d_z = DistanceInfo(exact=oz.weight, lower_bound=d_z.lower_bound, provenance="enumeration")
            pure = ox.pure and oz.pure
            for d in (d_x, d_z):
                if d.lower_bound is not None and d.exact < d.lower_bound:
                    raise InternalCheckError(f"exact distance {d.exact} below bound {d.lower_bound}")
    code = AsymmetricCSSCode(cx, cz, d_x, d_z, pure, construction, dict(params or {}))
    if code.k < 0:
        raise InternalCheckError(f"negative dimension {code.k}")
    return code


def asymmetric_eg_ldpc(m: int, mu_x: int, mu_z: int, s: int, p: int, compute_exact_distances: bool = True,
                       primitive_poly=None) -> AsymmetricCSSCode:
    """Both codes from non-cyclic type-I EG-LDPC codes of EG(m, p^s)."""
    if not 1 < mu_z < m:
        raise ValidationError(f"need 1 < mu_z < m, got mu_z={mu_z}, m={m}")
    if not m - mu_z + 1 <= mu_x < m:
        raise ValidationError(f"need m - mu_z + 1 <= mu_x < m, got mu_x={mu_x}")
    cx = eg_ldpc_type1(m, mu_x, s, p, cyclic=False, primitive_poly=primitive_poly)
    cz = eg_ldpc_type1(m, mu_z, s, p, cyclic=False, primitive_poly=primitive_poly)
    if not check_nesting(cx, cz):
        raise InternalCheckError(f"EG codes mu_x={mu_x}, mu_z={mu_z} are not nested")
    bx = DistanceInfo(lower_bound=a_eg(m, mu_x, mu_x - 1, s, p) + 1, provenance="formula: A_EG+1")
    bz = DistanceInfo(lower_bound=a_eg(m, mu_z, mu_z - 1, s, p) + 1, provenance="formula: A_EG+1")
    params = dict(m=m, mu_x=mu_x, mu_z=mu_z, s=s, p=p)
    code = css_construct(cx, cz, compute_exact_distances, bx, bz, "eg-eg", params)
    if code.k == 0:
        log.warning("asymmetric EG-LDPC code with m=%d, mu_x=%d, mu_z=%d encodes no qubits", m, mu_x, mu_z)
    return code


def asymmetric_bch_ldpc(m: int, mu: int, s: int, p: int, delta: int, compute_exact_distances: bool = True,
                        primitive_poly=None) -> AsymmetricCSSCode:
    """C_x narrow-sense BCH(delta), C_z the cyclic (origin-free) EG-LDPC code."""
    delta0 = cyclic_eg_dual_root_set(m, mu, s, p).delta0
    if not 2 <= delta <= delta0:
        raise ValidationError(f"design distance {delta} outside [2, delta0={delta0}]")
    cz = eg_ldpc_type1(m, mu, s, p, cyclic=True, primitive_poly=primitive_poly)
    tower = Geometry(m, s, p, primitive_poly).tower
    cx = code_from_defining_set(bch_narrow_sense(p, m * s, delta, tower))
    cx.distance = DistanceInfo(lower_bound=delta, provenance="formula: BCH bound")
    if not check_nesting(cx, cz):
        raise InternalCheckError(f"BCH({delta}) dual is not inside the cyclic EG code")
    bx = DistanceInfo(lower_bound=delta, provenance="formula: design distance")
    bz = DistanceInfo(lower_bound=a_eg(m, mu, mu - 1, s, p), provenance="formula: A_EG")
    params = dict(m=m, mu=mu, s=s, p=p, delta=delta)
    return css_construct(cx, cz, compute_exact_distances, bx, bz, "bch-ldpc", params)


def corollary_2d_params(s: int, delta: int) -> tuple[int, int, int, int]:
    """(n, k, d_x, d_z) of the m = p = 2 BCH-LDPC family."""
    if delta % 2 == 0 or delta < 3 or delta > 2 ** s - 1:
        raise ValidationError(f"need odd 3 <= delta <= {2 ** s - 1}, got {delta}")
    n = 2 ** (2 * s) - 1
    return n, n + 1 - 3 ** s - s * (delta - 1), delta, 2 ** s + 1


TABLE1_DELTAS = (15, 13, 11, 9, 7, 5, 3)


def table1_rows(s: int = 4) -> list[dict[str, Any]]:
    rows = []
    for delta in TABLE1_DELTAS:
        code = asymmetric_bch_ldpc(2, 1, s, 2, delta, compute_exact_distances=False)
        dx, dz = code.d_x.value, code.d_z.value
        rows.append(dict(s=s, delta=delta, n=code.n, k=code.k, d_x=dx, d_z=dz,
                         asymmetry=dz / dx, rate=round(code.k / code.n, 3), code=code))
    return rows
