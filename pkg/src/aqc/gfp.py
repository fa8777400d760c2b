"""Gaussian elimination over GF(p) and over subfields of a :class:`FieldTower`.

For p = 2 rows are bit-packed (``np.packbits``) and eliminated with XOR on
bytes; for odd p entries are int64 and reduced mod p after every step.
"""

from __future__ import annotations

import numpy as np

from aqc.fields import FieldTower


def _as_matrix(M, n: int | None = None) -> np.ndarray:
    M = np.asarray(M, dtype=np.int64)
    if M.ndim == 1:
        M = M.reshape(1, -1) if M.size else np.zeros((0, n or 0), dtype=np.int64)
    return M


def rref(M, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form over GF(p), zero rows dropped.

    Returns ``(R, pivots)`` with ``R`` of shape (rank, n).
    """
    M = _as_matrix(M) % p
    if p == 2:
        return _rref_gf2(M)
    return _rref_odd(M, p)


def _rref_gf2(M: np.ndarray) -> tuple[np.ndarray, list[int]]:
    rows, n = M.shape
    if rows == 0 or n == 0:
        return np.zeros((0, n), dtype=np.int64), []
    P = np.packbits(M.astype(np.uint8), axis=1)
    pivots: list[int] = []
    r = 0
    for c in range(n):
        if r == rows:
            break
        byte, shift = c >> 3, 7 - (c & 7)
        col = (P[r:, byte] >> shift) & 1
        hits = np.flatnonzero(col)
        if hits.size == 0:
            continue
        piv = r + hits[0]
        if piv != r:
            P[[r, piv]] = P[[piv, r]]
        mask = ((P[:, byte] >> shift) & 1).astype(bool)
        mask[r] = False
        P[mask] ^= P[r]
        pivots.append(c)
        r += 1
    R = np.unpackbits(P[:r], axis=1, count=n).astype(np.int64)
    return R, pivots


def _rref_odd(M: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    M = M.copy()
    rows, n = M.shape
    pivots: list[int] = []
    r = 0
    for c in range(n):
        if r == rows:
            break
        hits = np.flatnonzero(M[r:, c])
        if hits.size == 0:
            continue
        piv = r + hits[0]
        if piv != r:
            M[[r, piv]] = M[[piv, r]]
        M[r] = (M[r] * pow(int(M[r, c]), p - 2, p)) % p
        factors = M[:, c].copy()
        factors[r] = 0
        nz = np.flatnonzero(factors)
        if nz.size:
            M[nz] = (M[nz] - factors[nz, None] * M[r]) % p
        pivots.append(c)
        r += 1
    return M[:r], pivots


def rank(M, p: int) -> int:
    return len(rref(M, p)[1])


def nullspace(M, p: int, n: int | None = None) -> np.ndarray:
    """Basis (rows) of {x : M x^T = 0} over GF(p)."""
    M = _as_matrix(M, n)
    n = M.shape[1] if n is None else n
    if M.shape[0] == 0:
        return np.eye(n, dtype=np.int64)
    R, pivots = rref(M, p)
    pivset = set(pivots)
    free = [c for c in range(n) if c not in pivset]
    basis = np.zeros((len(free), n), dtype=np.int64)
    for i, f in enumerate(free):
        basis[i, f] = 1
        for j, pc in enumerate(pivots):
            basis[i, pc] = (-R[j, f]) % p
    return basis


def row_space_equal(A, B, p: int) -> bool:
    A = _as_matrix(A)
    B = _as_matrix(B)
    ra, rb = rank(A, p), rank(B, p)
    if ra != rb:
        return False
    return rank(np.vstack([A, B]), p) == ra


def in_row_space(V, M, p: int) -> bool:
    """True iff every row of V lies in the row space of M."""
    V = _as_matrix(V)
    M = _as_matrix(M, V.shape[1])
    if V.shape[0] == 0:
        return True
    return rank(np.vstack([M, V]), p) == rank(M, p)


class RowBasis:
    """Incrementally grown row space over GF(p) (for streaming rank checks)."""

    def __init__(self, n: int, p: int) -> None:
        self.n = n
        self.p = p
        self._gf2: dict[int, int] = {}
        self._R = np.zeros((0, n), dtype=np.int64)

    @property
    def rank(self) -> int:
        return len(self._gf2) if self.p == 2 else self._R.shape[0]

    def add(self, rows) -> int:
        rows = _as_matrix(rows, self.n) % self.p
        if self.p == 2:
            basis = self._gf2
            packed = np.packbits(rows.astype(np.uint8), axis=1)
            for row in packed:
                v = int.from_bytes(row.tobytes(), "big")
                while v:
                    top = v.bit_length() - 1
                    b = basis.get(top)
                    if b is None:
                        basis[top] = v
                        break
                    v ^= b
                if len(basis) == self.n:
                    break
        else:
            self._R, _ = rref(np.vstack([self._R, rows]), self.p)
        return self.rank


# -- linear algebra over a subfield GF(Q) of a tower --------------------------

def ext_rref(M, field: FieldTower) -> tuple[np.ndarray, list[int]]:
    """RREF over the field generated by the entries (all arithmetic in ``field``)."""
    M = np.array(M, dtype=np.int64, copy=True)
    if M.ndim == 1:
        M = M.reshape(1, -1)
    rows, n = M.shape
    pivots: list[int] = []
    r = 0
    for c in range(n):
        if r == rows:
            break
        hits = np.flatnonzero(M[r:, c])
        if hits.size == 0:
            continue
        piv = r + hits[0]
        if piv != r:
            M[[r, piv]] = M[[piv, r]]
        M[r] = field.mul_arr(M[r], field.inv(int(M[r, c])))
        factors = M[:, c].copy()
        factors[r] = 0
        nz = np.flatnonzero(factors)
        if nz.size:
            M[nz] = field.add_arr(M[nz], field.neg_arr(field.mul_arr(factors[nz, None], M[r][None, :])))
        pivots.append(c)
        r += 1
    return M[:r], pivots


def ext_rank(M, field: FieldTower) -> int:
    return len(ext_rref(M, field)[1])


def ext_nullspace(M, field: FieldTower, n: int | None = None) -> np.ndarray:
    M = np.asarray(M, dtype=np.int64)
    if M.ndim == 1:
        M = M.reshape(1, -1) if M.size else np.zeros((0, n or 0), dtype=np.int64)
    n = M.shape[1] if n is None else n
    if M.shape[0] == 0:
        return np.eye(n, dtype=np.int64)
    R, pivots = ext_rref(M, field)
    pivset = set(pivots)
    free = [c for c in range(n) if c not in pivset]
    basis = np.zeros((len(free), n), dtype=np.int64)
    for i, f in enumerate(free):
        basis[i, f] = 1
        for j, pc in enumerate(pivots):
            basis[i, pc] = field.neg(int(R[j, f]))
    return basis


def ext_row_space_equal(A, B, field: FieldTower) -> bool:
    ra, rb = ext_rank(A, field), ext_rank(B, field)
    return ra == rb and ext_rank(np.vstack([A, B]), field) == ra


def ext_in_row_space(V, M, field: FieldTower) -> bool:
    V = np.asarray(V, dtype=np.int64)
    if V.size == 0:
        return True
    return ext_rank(np.vstack([M, V]), field) == ext_rank(M, field)
