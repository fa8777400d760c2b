"""Euclidean geometry EG(m, q), q = p^s: flats, counting formulas, incidence matrices.

Points of GF(q)^m are identified with GF(q^m) through the GF(q)-basis
1, alpha, ..., alpha^(m-1).  A nonzero point alpha^i gets index i and the
origin gets the last index q^m - 1, so multiplication by alpha acts on the
origin-free points as the index rotation i -> i + 1 mod (q^m - 1).

Flats are enumerated subspace by subspace.  Linear subspaces come from
their reduced row echelon bases ordered by (pivot columns, free entries)
lexicographically, where a GF(q) entry is ordered as 0, beta^0, beta^1, ...
(beta the primitive element of the embedded GF(q)).  The cosets of one
subspace are ordered by their smallest point index.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np
import scipy.sparse as sp

from aqc.errors import BudgetExceeded, ValidationError
from aqc.fields import FieldTower, get_tower
from aqc.gfp import ext_rref

DEFAULT_FLAT_BUDGET = 1 << 22
_CHUNK_POINTS = 1 << 18


def n_eg(m: int, mu2: int, mu1: int, s: int, p: int) -> int:
    """Number of mu1-flats in a mu2-flat (all mu1-flats of EG(m, q) when mu2 = m)."""
    if not 0 <= mu1 < mu2 <= m:
        raise ValidationError(f"need 0 <= mu1 < mu2 <= m, got mu1={mu1}, mu2={mu2}, m={m}")
    q = p ** s
    num, den = q ** (mu2 - mu1), 1
    for i in range(1, mu1 + 1):
        num *= q ** (mu2 - i + 1) - 1
        den *= q ** (mu1 - i + 1) - 1
    out, rem = divmod(num, den)
    assert rem == 0
    return out


def a_eg(m: int, mu2: int, mu1: int, s: int, p: int) -> int:
    """Number of mu2-flats containing a given mu1-flat.

    ``mu1 == mu2`` is accepted and gives the empty product 1.
    """
    if not 0 <= mu1 <= mu2 <= m:
        raise ValidationError(f"need 0 <= mu1 <= mu2 <= m, got mu1={mu1}, mu2={mu2}, m={m}")
    q = p ** s
    num = den = 1
    for i in range(mu1 + 1, mu2 + 1):
        num *= q ** (m - i + 1) - 1
        den *= q ** (mu2 - i + 1) - 1
    out, rem = divmod(num, den)
    assert rem == 0
    return out


def subspace_count(m: int, mu: int, q: int) -> int:
    """Gaussian binomial [m, mu]_q."""
    num = den = 1
    for i in range(mu):
        num *= q ** (m - i) - 1
        den *= q ** (mu - i) - 1
    return num // den


def flat_count(m: int, mu: int, s: int, p: int, exclude_origin: bool = False) -> int:
    q = p ** s
    total = subspace_count(m, mu, q) * q ** (m - mu)
    if exclude_origin:
        total -= subspace_count(m, mu, q)
    return total


@dataclass(frozen=True)
class Flat:
    """A mu-flat: ``offset + span(basis)`` with GF(q) coordinates as tower elements."""

    mu: int
    basis: tuple[tuple[int, ...], ...]
    offset: tuple[int, ...]
    canonical_key: int
    points: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.points)

    def __contains__(self, point_index: int) -> bool:
        return point_index in self.points


@dataclass
class FlatBlock:
    keys: np.ndarray            # (B,) canonical keys (object dtype if very large)
    points: np.ndarray          # (B, q^mu) sorted point indices
    rref_digits: np.ndarray     # (B, mu, m) GF(q) digits of the direction space
    offsets: np.ndarray         # (B,) field element of the coset representative


class Geometry:
    """EG(m, p^s) realised inside GF(p^(m s))."""

    def __init__(self, m: int, s: int, p: int, primitive_poly: Sequence[int] | None = None) -> None:
        if m < 1:
            raise ValidationError("geometry dimension m must be >= 1")
        poly = None if primitive_poly is None else tuple(primitive_poly)
        self.tower: FieldTower = get_tower(p, s, m, poly)
        self.m, self.s, self.p = m, s, p
        self.q = q = p ** s
        self.point_count = N = q ** m
        self.sub = self.tower.subfield(q)
        self._sub_digit = {int(e): d for d, e in enumerate(self.sub)}
        # coordinate index sum_j digit_j q^j  ->  field element sum_j sub[digit_j] alpha^j
        digits = (np.arange(N)[:, None] // (q ** np.arange(m))[None, :]) % q
        terms = self.tower.mul_arr(self.sub[digits], self.tower.exp[np.arange(m) % (N - 1)][None, :])
        self.coord_elems = self.tower.sum_arr(terms, axis=1)
        if len(np.unique(self.coord_elems)) != N:
            raise ValidationError("1, alpha, ..., alpha^(m-1) is not a GF(q)-basis")
        self.elem_coord = np.empty(N, dtype=np.int64)
        self.elem_coord[self.coord_elems] = np.arange(N)
        self.point_index = np.where(self.tower.log >= 0, self.tower.log, N - 1).astype(np.int64)
        self.index_elem = np.empty(N, dtype=np.int64)
        self.index_elem[self.point_index] = np.arange(N)
        self._digit_pows = q ** np.arange(m)

    def __repr__(self) -> str:
        return f"Geometry(m={self.m}, s={self.s}, p={self.p})"

    @property
    def origin_index(self) -> int:
        return self.point_count - 1

    def coords_of(self, point_index: int) -> tuple[int, ...]:
        c = int(self.elem_coord[self.index_elem[point_index]])
        return tuple(int(self.sub[(c // self.q ** j) % self.q]) for j in range(self.m))

    def index_of(self, coords: Sequence[int]) -> int:
        if len(coords) != self.m:
            raise ValidationError(f"point needs {self.m} coordinates")
        c = sum(self._sub_digit[int(x)] * self.q ** j for j, x in enumerate(coords))
        return int(self.point_index[self.coord_elems[c]])

    def flat_count(self, mu: int, exclude_origin: bool = False) -> int:
        return flat_count(self.m, mu, self.s, self.p, exclude_origin)

    # -- enumeration --------------------------------------------------------

    def _key_dtype(self, mu: int):
        return np.int64 if self.q ** (mu * self.m) * self.point_count < (1 << 62) else object

    def flat_blocks(self, mu: int, exclude_origin: bool = False) -> Iterator[FlatBlock]:
        """Stream all mu-flats in canonical order as array blocks."""
        m, q, N, tower = self.m, self.q, self.point_count, self.tower
        if not 0 <= mu <= m:
            raise ValidationError(f"need 0 <= mu <= m, got mu={mu}")
        kdt = self._key_dtype(mu)
        qpow_code = np.array([q ** (r * m + j) for r in range(mu) for j in range(m)], dtype=object) \
            if kdt is object else (q ** np.arange(mu * m, dtype=np.int64))
        for pivots in itertools.combinations(range(m), mu):
            free = [(r, j) for r in range(mu) for j in range(pivots[r] + 1, m) if j not in pivots]
            others = [j for j in range(m) if j not in pivots]
            # coset representatives: GF(q)-combinations of alpha^j over non-pivot j
            if others:
                rep_digits = np.array(list(itertools.product(range(q), repeat=len(others))), dtype=np.int64)
                rep_coord = (rep_digits[:, ::-1] * (q ** np.array(others, dtype=np.int64))[None, :]).sum(1)
            else:
                rep_coord = np.zeros(1, dtype=np.int64)
            reps = self.coord_elems[rep_coord]
            if exclude_origin:
                reps = reps[1:]
            if reps.size == 0:
                continue
            total = q ** len(free)
            chunk = max(1, _CHUNK_POINTS // max(1, N))
            for start in range(0, total, chunk):
                idx = np.arange(start, min(total, start + chunk), dtype=np.int64)
                C = idx.size
                D = np.zeros((C, mu, m), dtype=np.int64)
                for r, c in enumerate(pivots):
                    D[:, r, c] = 1
                nf = len(free)
                for t, (r, j) in enumerate(free):
                    D[:, r, j] = (idx // q ** (nf - 1 - t)) % q
                basis = self.coord_elems[(D * self._digit_pows[None, None, :]).sum(-1)]  # (C, mu)
                span = np.zeros((C, 1), dtype=np.int64)
                for r in range(mu):
                    mult = tower.mul_arr(self.sub[None, None, :], basis[:, r][:, None, None])
                    span = tower.add_arr(span[:, :, None], mult).reshape(C, -1)
                flats = tower.add_arr(reps[None, :, None], span[:, None, :])  # (C, R, q^mu)
                pts = np.sort(self.point_index[flats], axis=-1)
                order = np.argsort(pts[:, :, 0], axis=1, kind="stable")
                pts = np.take_along_axis(pts, order[:, :, None], axis=1)
                offs = np.take_along_axis(np.broadcast_to(reps[None, :], order.shape), order, axis=1)
                R = pts.shape[1]
                code = (D.reshape(C, -1).astype(kdt) * qpow_code[None, :]).sum(1) if mu else \
                    np.zeros(C, dtype=kdt)
                keys = code[:, None] * N + pts[:, :, 0].astype(kdt)
                yield FlatBlock(
                    keys=keys.reshape(-1),
                    points=pts.reshape(C * R, -1),
                    rref_digits=np.repeat(D, R, axis=0),
                    offsets=offs.reshape(-1),
                )

    def flat_points(self, mu: int, exclude_origin: bool = False,
                    budget: int = DEFAULT_FLAT_BUDGET) -> tuple[np.ndarray, np.ndarray]:
        """(keys, points) of all mu-flats as two arrays."""
        count = self.flat_count(mu, exclude_origin)
        if count > budget:
            raise BudgetExceeded(f"{count} {mu}-flats exceed the enumeration budget {budget}")
        keys, pts = [], []
        for block in self.flat_blocks(mu, exclude_origin):
            keys.append(block.keys)
            pts.append(block.points)
        if not pts:
            return np.zeros(0, dtype=np.int64), np.zeros((0, self.q ** mu), dtype=np.int64)
        return np.concatenate(keys), np.concatenate(pts)

    def flat_from_basis(self, basis: Sequence[Sequence[int]], offset: Sequence[int]) -> Flat:
        """Build a :class:`Flat` from any basis/offset (GF(q) coordinates)."""
        tower, q, m = self.tower, self.q, self.m
        B = np.array(basis, dtype=np.int64).reshape(-1, m)
        for x in np.concatenate([B.ravel(), np.asarray(offset, dtype=np.int64)]):
            if int(x) not in self._sub_digit:
                raise ValidationError(f"coordinate {int(x)} is not an element of GF({q})")
        R, piv = ext_rref(B, tower) if B.shape[0] else (B, [])
        if len(piv) != B.shape[0]:
            raise ValidationError("basis vectors are linearly dependent")
        mu = len(piv)
        digits = np.array([[self._sub_digit[int(x)] for x in row] for row in R], dtype=np.int64).reshape(mu, m)
        basis_elems = self.coord_elems[(digits * self._digit_pows[None, :]).sum(-1)]
        span = np.zeros(1, dtype=np.int64)
        for b in basis_elems:
            span = tower.add_arr(span[:, None], tower.mul_arr(self.sub[None, :], b)).reshape(-1)
        off_elem = self.coord_elems[self.index_coord_of(offset)]
        pts = np.sort(self.point_index[tower.add_arr(span, off_elem)])
        code = sum(int(d) * q ** t for t, d in enumerate(digits.reshape(-1)))
        key = code * self.point_count + int(pts[0])
        return Flat(mu, tuple(tuple(int(x) for x in row) for row in R), tuple(int(x) for x in offset),
                    key, tuple(int(x) for x in pts))

    def index_coord_of(self, coords: Sequence[int]) -> int:
        return sum(self._sub_digit[int(x)] * self.q ** j for j, x in enumerate(coords))

    def _coords_of_elem(self, e: int) -> tuple[int, ...]:
        c = int(self.elem_coord[e])
        return tuple(int(self.sub[(c // self.q ** j) % self.q]) for j in range(self.m))


def enumerate_flats(g: Geometry, mu: int, exclude_origin_containing: bool = False,
                    budget: int = DEFAULT_FLAT_BUDGET) -> list[Flat]:
    """All mu-flats of ``g`` as :class:`Flat` objects, in canonical order."""
    count = g.flat_count(mu, exclude_origin_containing)
    if count > budget:
        raise BudgetExceeded(f"{count} {mu}-flats exceed the enumeration budget {budget}")
    out: list[Flat] = []
    for block in g.flat_blocks(mu, exclude_origin_containing):
        for key, pts, D, off in zip(block.keys, block.points, block.rref_digits, block.offsets):
            basis = tuple(tuple(int(g.sub[d]) for d in row) for row in D)
            out.append(Flat(mu, basis, g._coords_of_elem(int(off)), int(key), tuple(int(x) for x in pts)))
    assert len(out) == count
    return out


@dataclass
class IncidenceMatrix:
    """Rows: mu2-flats, columns: mu1-flats; entry 1 iff column flat is inside row flat."""

    matrix: sp.csr_array
    row_keys: np.ndarray
    col_keys: np.ndarray
    mu2: int
    mu1: int
    exclude_origin: bool
    transposed: bool = False

    @property
    def shape(self) -> tuple[int, int]:
        return self.matrix.shape

    def to_dense(self) -> np.ndarray:
        return self.matrix.toarray().astype(np.int64)

    def type2(self) -> "IncidenceMatrix":
        """The transpose, whose null space is the type-II code."""
        return IncidenceMatrix(self.matrix.T.tocsr(), self.col_keys, self.row_keys,
                               self.mu2, self.mu1, self.exclude_origin, not self.transposed)

    def row_weights(self) -> np.ndarray:
        return np.asarray(self.matrix.sum(axis=1)).ravel()

    def col_weights(self) -> np.ndarray:
        return np.asarray(self.matrix.sum(axis=0)).ravel()


def incidence_matrix(g: Geometry, mu2: int, mu1: int, exclude_origin_containing: bool = False,
                     budget: int = DEFAULT_FLAT_BUDGET) -> IncidenceMatrix:
    if not 0 <= mu1 < mu2 <= g.m:
        raise ValidationError(f"need 0 <= mu1 < mu2 <= m, got mu1={mu1}, mu2={mu2}, m={g.m}")
    row_keys, row_pts = g.flat_points(mu2, exclude_origin_containing, budget)
    J = row_pts.shape[0]
    if mu1 == 0:
        ncols = g.point_count - 1 if exclude_origin_containing else g.point_count
        w = row_pts.shape[1]
        mat = sp.csr_array((np.ones(J * w, dtype=np.int8), row_pts.reshape(-1).astype(np.int64),
                            np.arange(0, J * w + 1, w)), shape=(J, ncols))
        col_keys = np.arange(ncols, dtype=np.int64)
    else:
        col_keys, col_pts = g.flat_points(mu1, exclude_origin_containing, budget)
        if J * col_pts.shape[0] > budget * 16:
            raise BudgetExceeded("incidence matrix between positive-dimensional flats too large")
        rows, cols = [], []
        mask = np.zeros(g.point_count, dtype=bool)
        for i, pts in enumerate(row_pts):
            mask[pts] = True
            hit = np.flatnonzero(mask[col_pts].all(axis=1))
            mask[pts] = False
            rows.append(np.full(hit.size, i))
            cols.append(hit)
        r = np.concatenate(rows) if rows else np.zeros(0, dtype=np.int64)
        c = np.concatenate(cols) if cols else np.zeros(0, dtype=np.int64)
        mat = sp.csr_array((np.ones(r.size, dtype=np.int8), (r, c)), shape=(J, col_pts.shape[0]))
    return IncidenceMatrix(mat, row_keys, col_keys, mu2, mu1, exclude_origin_containing)
