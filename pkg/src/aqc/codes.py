"""Classical codes: BCH and cyclic EG root sets, EG-LDPC codes, GRM bookkeeping,
subfield subcodes, trace codes and exact distances.

Cyclic codes of length n = p^(ms) - 1 use the coordinate convention
c(x) = sum_i c_i x^i, so a root alpha^h means sum_i c_i alpha^(i h) = 0.
This matches the point indexing of :mod:`aqc.geometry`.
"""

from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
import scipy.sparse as sp

from aqc.errors import BudgetExceeded, InternalCheckError, NestingError, ValidationError
from aqc.fields import (FieldTower, cyclotomic_closure, get_tower, poly_divmod, poly_from_roots,
                        q_ary_weight, trace_arr)
from aqc.geometry import DEFAULT_FLAT_BUDGET, Geometry, a_eg, incidence_matrix
from aqc.gfp import RowBasis, ext_nullspace, ext_rank, nullspace, rank, rref, row_space_equal

DISTANCE_BUDGET = 1 << 24


@dataclass
class DistanceInfo:
    exact: int | None = None
    lower_bound: int | None = None
    provenance: str = "formula"

    @property
    def value(self) -> int | None:
        return self.exact if self.exact is not None else self.lower_bound

    @property
    def kind(self) -> str:
        return "exact" if self.exact is not None else "bound"


class LinearCode:
    """A p-ary linear code given by its parity-check matrix (p prime)."""

    def __init__(self, parity_check, p: int = 2, n: int | None = None, name: str = "",
                 distance: DistanceInfo | None = None, sparse: sp.csr_array | None = None) -> None:
        H = np.asarray(parity_check, dtype=np.int64)
        if H.ndim == 1:
            H = H.reshape(0, n) if H.size == 0 else H.reshape(1, -1)
        self.parity_check = H % p
        self.p = p
        self.n = H.shape[1]
        self.name = name
        self.distance = distance or DistanceInfo()
        self._sparse = sparse

    def __repr__(self) -> str:
        return f"LinearCode({self.name or 'unnamed'}, [{self.n},{self.k}]_{self.p})"

    @classmethod
    def from_generator(cls, generator, p: int = 2, n: int | None = None, **kw) -> "LinearCode":
        G = np.asarray(generator, dtype=np.int64)
        if G.ndim == 1:
            G = G.reshape(0, n) if G.size == 0 else G.reshape(1, -1)
        code = cls(nullspace(G, p, G.shape[1]), p, **kw)
        code.__dict__["generator"] = _full_rank_rows(G, p)
        return code

    @functools.cached_property
    def check_rank(self) -> int:
        return rank(self.parity_check, self.p)

    @property
    def k(self) -> int:
        return self.n - self.check_rank

    dimension = k

    @functools.cached_property
    def generator(self) -> np.ndarray:
        return nullspace(self.parity_check, self.p, self.n)

    @property
    def sparse_parity_check(self) -> sp.csr_array:
        if self._sparse is None:
            self._sparse = sp.csr_array(self.parity_check.astype(np.int8))
        return self._sparse

    def syndrome(self, v) -> np.ndarray:
        return (np.asarray(v, dtype=np.int64) @ self.parity_check.T) % self.p

    def contains(self, v) -> bool:
        return not self.syndrome(v).any()

    def dual(self) -> "LinearCode":
        return LinearCode(self.generator, self.p, self.n, name=f"dual({self.name})")

    def contains_code(self, other: "LinearCode") -> bool:
        """other <= self."""
        if other.n != self.n or other.p != self.p:
            raise ValidationError("codes differ in length or characteristic")
        return not ((self.parity_check @ other.generator.T) % self.p).any()

    def same_code(self, other: "LinearCode") -> bool:
        return other.n == self.n and other.p == self.p and \
            row_space_equal(self.parity_check, other.parity_check, self.p)


def _full_rank_rows(G: np.ndarray, p: int) -> np.ndarray:
    R, _ = rref(G, p)
    return R


# -- cyclic codes -------------------------------------------------------------

class CyclicCode:
    """Cyclic code of length n = |GF(Q^m)*| over GF(q) defined by root exponents.

    ``tower`` supplies alpha; ``q`` (default p) is the alphabet size and must
    be a subfield of the tower.
    """

    def __init__(self, p: int, n: int, defining_set, tower: FieldTower | None = None,
                 q: int | None = None, name: str = "") -> None:
        if math.gcd(p, n) != 1:
            raise ValidationError(f"gcd({p}, {n}) != 1")
        self.p, self.n = p, n
        self.q = p if q is None else q
        if tower is None:
            degree = round(math.log(n + 1, p))
            if p ** degree != n + 1:
                raise ValidationError("only primitive lengths n = p^d - 1 are supported")
            tower = get_tower(p, 1, degree)
        if tower.order - 1 != n:
            raise ValidationError(f"tower GF({tower.order}) does not match length {n}")
        self.tower = tower
        D = sorted({int(h) % n for h in defining_set})
        if cyclotomic_closure(D, self.q, n) != D:
            raise ValidationError(f"defining set is not closed under multiplication by {self.q}")
        self.defining_set = tuple(D)
        self.name = name

    def __repr__(self) -> str:
        return f"CyclicCode({self.name or 'unnamed'}, [{self.n},{self.dimension}]_{self.q})"

    @property
    def dimension(self) -> int:
        return self.n - len(self.defining_set)

    @functools.cached_property
    def generator_poly(self) -> tuple[int, ...]:
        g = poly_from_roots((self.tower.alpha_pow(h) for h in self.defining_set), self.tower)
        if any(not self.tower.in_subfield(c, self.q) for c in g):
            raise InternalCheckError("generator polynomial has coefficients outside GF(q)")
        return g

    @functools.cached_property
    def check_poly(self) -> tuple[int, ...]:
        xn1 = [self.tower.neg(1)] + [0] * (self.n - 1) + [1]
        h, rem = poly_divmod(xn1, self.generator_poly, self.tower)
        if rem:
            raise InternalCheckError("generator polynomial does not divide x^n - 1")
        return h

    def generator_matrix(self) -> np.ndarray:
        k, g = self.dimension, self.generator_poly
        G = np.zeros((k, self.n), dtype=np.int64)
        for i in range(k):
            G[i, i:i + len(g)] = g
        return G

    def parity_check_matrix(self) -> np.ndarray:
        k = self.dimension
        rev = self.check_poly[::-1]
        H = np.zeros((self.n - k, self.n), dtype=np.int64)
        for i in range(self.n - k):
            H[i, i:i + len(rev)] = rev
        return H

    def to_linear_code(self) -> LinearCode:
        if self.q != self.p:
            raise ValidationError("use to_field_code() for codes over extension fields")
        return code_from_defining_set(self)

    def to_field_code(self) -> "FieldCode":
        return FieldCode(self.generator_matrix(), self.tower, self.q, name=self.name)


def code_from_defining_set(c: CyclicCode) -> LinearCode:
    """Materialise a p-ary cyclic code as a :class:`LinearCode`."""
    code = LinearCode(c.parity_check_matrix(), c.p, c.n, name=c.name)
    code.__dict__["generator"] = c.generator_matrix()
    code.__dict__["check_rank"] = c.n - c.dimension
    return code


def bch_narrow_sense(p: int, m_s: int, delta: int, tower: FieldTower | None = None) -> CyclicCode:
    """Narrow-sense primitive BCH code of length p^m_s - 1 and design distance delta."""
    n = p ** m_s - 1
    if not 2 <= delta <= n:
        raise ValidationError(f"design distance must satisfy 2 <= delta <= {n}, got {delta}")
    tower = tower or get_tower(p, 1, m_s)
    D = cyclotomic_closure(range(1, delta), p, n)
    return CyclicCode(p, n, D, tower, name=f"BCH({delta})")


def _check_eg_params(m: int, mu: int) -> None:
    if not 0 < mu < m:
        raise ValidationError(f"need 0 < mu < m, got mu={mu}, m={m}")


def _max_min_weights(h: int, p: int, s: int, n: int) -> tuple[int, int]:
    q = p ** s
    ws = [q_ary_weight((h * p ** l) % n, q) for l in range(s)]
    return max(ws), min(ws)


def cyclic_eg_root_set(m: int, mu: int, s: int, p: int) -> list[int]:
    """Exponents h of the roots of the origin-free EG code C_EG,c(m, mu, 0, s, p)."""
    _check_eg_params(m, mu)
    q = p ** s
    n = q ** m - 1
    bound = (q - 1) * (m - mu)
    return [h for h in range(1, n) if 0 < _max_min_weights(h, p, s, n)[0] <= bound]


class DualRootSet(NamedTuple):
    z_perp: list[int]
    delta0: int
    z_p: list[int]
    run: int          # length of the consecutive run alpha^1, alpha^2, ... found in z_perp


def cyclic_eg_dual_root_set(m: int, mu: int, s: int, p: int) -> DualRootSet:
    """Root exponents of the dual of C_EG,c(m, mu, 0, s, p) and the BCH limit delta0."""
    _check_eg_params(m, mu)
    q = p ** s
    n = q ** m - 1
    mins = {h: _max_min_weights(h, p, s, n)[1] for h in range(n)}
    z_perp = [h for h in range(n) if mins[h] < mu * (q - 1)]
    z_p = [h for h in range(n) if 0 < mins[h] < mu * (q - 1)]
    if sorted(set(z_p) | {0}) != z_perp:
        raise InternalCheckError("Z_perp != Z_p + {0}")
    Q, R = divmod(m * (q - 1) - (m - mu) * (q - 1), q - 1)
    if (Q, R) != (mu, 0):
        raise InternalCheckError(f"unexpected decomposition Q={Q}, R={R}")
    delta0 = (R + 1) * p ** (Q * s) - 1
    zs = set(z_perp)
    run = 0
    while run + 1 < n and run + 1 in zs:
        run += 1
    if run < delta0 - 1:
        raise InternalCheckError(f"consecutive run {run} shorter than delta0 - 1 = {delta0 - 1}")
    return DualRootSet(z_perp, delta0, z_p, run)


def eg_ldpc_type1(m: int, mu: int, s: int, p: int, cyclic: bool = False,
                  primitive_poly=None, budget: int = DEFAULT_FLAT_BUDGET) -> LinearCode:
    """Null space of the mu-flat / point incidence matrix of EG(m, p^s).

    With ``cyclic`` the origin and every flat through it are dropped, giving a
    cyclic code of length p^(ms) - 1.
    """
    _check_eg_params(m, mu)
    g = Geometry(m, s, p, primitive_poly)
    J = g.flat_count(mu, cyclic)
    n = g.point_count - (1 if cyclic else 0)
    if J * n > (1 << 27):
        raise BudgetExceeded(f"dense {J}x{n} incidence matrix is too large")
    inc = incidence_matrix(g, mu, 0, cyclic, budget)
    if cyclic:
        bound = DistanceInfo(lower_bound=a_eg(m, mu, mu - 1, s, p), provenance="formula: A_EG(m,mu,mu-1)")
    else:
        bound = DistanceInfo(lower_bound=a_eg(m, mu, mu - 1, s, p) + 1,
                             provenance="formula: A_EG(m,mu,mu-1)+1")
    tag = "EGc" if cyclic else "EG"
    code = LinearCode(inc.to_dense(), p, name=f"{tag}({m},{mu},0,{s},{p})", distance=bound,
                      sparse=inc.matrix)
    if cyclic:
        expected = n - len(cyclic_eg_root_set(m, mu, s, p))
        if code.k != expected:
            raise InternalCheckError(f"cyclic EG code dimension {code.k} != n - |Z| = {expected}")
    return code


# -- GRM codes, subfield subcodes, trace codes ------------------------------

def grm_dual_order(nu: int, m: int, q: int) -> int:
    top = m * (q - 1) - 1
    if not 0 <= nu <= top:
        raise ValidationError(f"GRM order must satisfy 0 <= nu <= {top}, got {nu}")
    return top - nu


def grm_cyclic(q: int, m: int, nu: int, tower: FieldTower | None = None) -> CyclicCode:
    """Cyclic GRM_q(nu, m) of length q^m - 1: roots alpha^j with 0 < W_q(j) <= m(q-1) - nu - 1."""
    grm_dual_order(nu, m, q)
    p = _prime_of(q)
    s = round(math.log(q, p))
    tower = tower or get_tower(p, s, m)
    n = q ** m - 1
    top = m * (q - 1) - nu - 1
    D = [j for j in range(1, n) if 0 < q_ary_weight(j, q) <= top]
    return CyclicCode(p, n, D, tower, q=q, name=f"GRM_{q}({nu},{m})")


def _prime_of(q: int) -> int:
    for d in range(2, q + 1):
        if q % d == 0:
            return d
    raise ValidationError(f"invalid field size {q}")


class FieldCode:
    """Linear code over GF(Q), a subfield of ``tower``, given by generator rows."""

    def __init__(self, generator, tower: FieldTower, Q: int, name: str = "") -> None:
        G = np.asarray(generator, dtype=np.int64)
        self.n = G.shape[1] if G.ndim == 2 else G.size
        self.generator = G.reshape(-1, self.n)
        if not tower.has_subfield(Q):
            raise ValidationError(f"GF({Q}) is not a subfield of {tower}")
        self.tower, self.Q, self.name = tower, Q, name

    def __repr__(self) -> str:
        return f"FieldCode({self.name or 'unnamed'}, [{self.n},{self.dimension}]_{self.Q})"

    @functools.cached_property
    def dimension(self) -> int:
        return ext_rank(self.generator, self.tower) if self.generator.shape[0] else 0

    @functools.cached_property
    def parity_check(self) -> np.ndarray:
        if self.generator.shape[0] == 0:
            return np.eye(self.n, dtype=np.int64)
        return ext_nullspace(self.generator, self.tower, self.n)

    def dual(self) -> "FieldCode":
        return FieldCode(self.parity_check, self.tower, self.Q, name=f"dual({self.name})")

    def same_code(self, other: "FieldCode") -> bool:
        if other.n != self.n:
            return False
        if self.dimension != other.dimension:
            return False
        if self.dimension == 0:
            return True
        return ext_rank(np.vstack([self.generator, other.generator]), self.tower) == self.dimension

    def contains_code(self, other: "FieldCode") -> bool:
        if other.dimension == 0:
            return True
        if self.dimension == 0:
            return False
        return ext_rank(np.vstack([self.generator, other.generator]), self.tower) == self.dimension

    def to_linear_code(self) -> LinearCode:
        if self.Q != self.tower.p:
            raise ValidationError("only codes over the prime field convert to LinearCode")
        return LinearCode.from_generator(self.generator, self.Q, self.n, name=self.name)

    @classmethod
    def from_linear_code(cls, code: LinearCode, tower: FieldTower) -> "FieldCode":
        return cls(code.generator, tower, code.p, name=code.name)


def _subfield_coordinates(tower: FieldTower, Q: int, q: int) -> tuple[np.ndarray, int]:
    """Table elem -> GF(q)-coordinates in the basis 1, gamma, ..., gamma^(l-1) of GF(Q)."""
    l = round(math.log(Q, q))
    gamma = tower.subfield_alpha(Q)
    small = tower.subfield(q)
    powers = np.array([tower.power(gamma, i) for i in range(l)], dtype=np.int64)
    combos = np.array(list(itertools.product(range(q), repeat=l)), dtype=np.int64).reshape(-1, l)
    elems = tower.sum_arr(tower.mul_arr(small[combos], powers[None, :]), axis=1)
    table = np.full((tower.order, l), -1, dtype=np.int64)
    table[elems] = small[combos]
    if len(np.unique(elems)) != Q:
        raise InternalCheckError("powers of gamma do not form a basis")
    return table, l


def subfield_subcode(C: FieldCode, q: int) -> FieldCode:
    """{c in C : every coordinate lies in GF(q)}."""
    tower, Q, n = C.tower, C.Q, C.n
    if not tower.has_subfield(q) or (Q != q and round(math.log(Q, q)) == 0):
        raise ValidationError(f"GF({q}) is not a subfield of GF({Q})")
    if C.n * C.Q > DISTANCE_BUDGET:
        raise BudgetExceeded("subfield subcode beyond desk scale")
    H = C.parity_check
    if H.shape[0] == 0:
        return FieldCode(np.eye(n, dtype=np.int64), tower, q, name=f"{C.name}|GF({q})")
    table, l = _subfield_coordinates(tower, Q, q)
    expanded = table[H]                            # (r, n, l)
    Hq = expanded.transpose(0, 2, 1).reshape(-1, n)
    G = ext_nullspace(Hq, tower, n)
    return FieldCode(G, tower, q, name=f"{C.name}|GF({q})")


def trace_code(C: FieldCode, q: int) -> FieldCode:
    """GF(q)-span of the coordinatewise traces Tr_{Q/q}(c), c in C."""
    tower, Q = C.tower, C.Q
    if C.n * C.Q > DISTANCE_BUDGET:
        raise BudgetExceeded("trace code beyond desk scale")
    l = round(math.log(Q, q))
    gamma = tower.subfield_alpha(Q)
    rows = []
    for i in range(l):
        beta = tower.power(gamma, i)
        for g in C.generator:
            rows.append(trace_arr(tower, Q, q, tower.mul_arr(g, beta)))
    G = np.array(rows, dtype=np.int64).reshape(-1, C.n)
    return FieldCode(G, tower, q, name=f"Tr({C.name})")


# -- exact distances ----------------------------------------------------------

class OutsideWeight(NamedTuple):
    weight: float              # min weight over C \ D (inf if empty)
    code_distance: float       # min weight over C \ {0}
    pure: bool                 # the minimiser of C already lies outside D


def min_distance_exact(C: LinearCode, budget: int = DISTANCE_BUDGET) -> float:
    """Minimum nonzero weight (inf for the zero code)."""
    return min_weight_outside(C, None, budget).code_distance


def min_weight_outside(C: LinearCode, D: LinearCode | None, budget: int = DISTANCE_BUDGET) -> OutsideWeight:
    """Minimum weight of codewords of C that are not in D (D must be a subcode of C)."""
    p, n = C.p, C.n
    if D is None:
        HD = np.eye(n, dtype=np.int64)
    else:
        if not C.contains_code(D):
            raise NestingError("D is not contained in C")
        HD = D.parity_check
        if D.k == C.k:
            return OutsideWeight(math.inf, min_distance_exact(C, budget), False)
    G = C.generator
    k = G.shape[0]
    if k == 0:
        return OutsideWeight(math.inf, math.inf, True)
    if p ** k <= budget:
        return _enumerate_codewords(G, HD, p)
    return _weight_search(C.parity_check, HD, p, n, budget)


def _enumerate_codewords(G: np.ndarray, HD: np.ndarray, p: int) -> OutsideWeight:
    k, n = G.shape
    S = (G @ HD.T) % p                         # D-syndromes of generator rows
    if p == 2:
        return _enumerate_gf2(G, S)
    best_c = best_o = math.inf
    chunk = 1 << 16
    total = p ** k
    pows = p ** np.arange(k - 1, -1, -1, dtype=np.int64)
    for start in range(0, total, chunk):
        idx = np.arange(start, min(total, start + chunk), dtype=np.int64)
        msgs = (idx[:, None] // pows[None, :]) % p
        cw = (msgs @ G) % p
        syn = (msgs @ S) % p
        w = np.count_nonzero(cw, axis=1)
        nz = idx != 0
        if nz.any():
            best_c = min(best_c, int(w[nz].min()))
        out = syn.any(axis=1)
        if out.any():
            best_o = min(best_o, int(w[out].min()))
    return OutsideWeight(best_o, best_c, best_c == best_o)


def _pack64(bits: np.ndarray) -> np.ndarray:
    bits = np.atleast_2d(bits).astype(np.uint8)
    width = -(-bits.shape[1] // 64) * 64
    padded = np.zeros((bits.shape[0], width), dtype=np.uint8)
    padded[:, :bits.shape[1]] = bits
    return np.packbits(padded, axis=1).view(np.uint64)


def _enumerate_gf2(G: np.ndarray, S: np.ndarray) -> OutsideWeight:
    k, n = G.shape
    rows = _pack64(np.hstack([G, S]))
    cw_mask = _pack64(np.hstack([np.ones(n), np.zeros(S.shape[1])]))[0]
    syn_mask = _pack64(np.hstack([np.zeros(n), np.ones(S.shape[1])]))[0]
    k_lo = min(k, 16)
    table = np.zeros((1, rows.shape[1]), dtype=np.uint64)
    for i in range(k_lo):
        table = np.vstack([table, table ^ rows[i]])
    best_c = best_o = math.inf
    hi = np.zeros(rows.shape[1], dtype=np.uint64)
    for step in range(1 << (k - k_lo)):
        if step:
            hi ^= rows[k_lo + (step & -step).bit_length() - 1]   # Gray-code update
        X = table ^ hi
        w = np.bitwise_count(X & cw_mask).sum(axis=1)
        if step == 0:
            if w.size > 1:
                best_c = min(best_c, int(w[1:].min()))
        else:
            best_c = min(best_c, int(w.min()))
        out = (X & syn_mask).any(axis=1)
        if out.any():
            best_o = min(best_o, int(w[out].min()))
    return OutsideWeight(best_o, best_c, best_c == best_o)


def _weight_search(HC: np.ndarray, HD: np.ndarray, p: int, n: int, budget: int) -> OutsideWeight:
    """Scan vectors by increasing weight; first value of each vector fixed to 1."""
    spent = 0
    best_c = best_o = math.inf
    for w in range(1, n + 1):
        count = math.comb(n, w) * (p - 1) ** (w - 1)
        spent += count
        if spent > budget:
            raise BudgetExceeded(f"weight search beyond weight {w - 1} exceeds budget {budget}")
        values = [np.ones((1, 1), dtype=np.int64)]
        if w > 1:
            values.append(np.array(list(itertools.product(range(1, p), repeat=w - 1)), dtype=np.int64))
        vals = np.hstack([np.ones((values[-1].shape[0], 1), dtype=np.int64), values[-1]]) if w > 1 \
            else values[0]
        combos_iter = itertools.combinations(range(n), w)
        while True:
            block = np.array(list(itertools.islice(combos_iter, 1 << 15)), dtype=np.int64)
            if block.size == 0:
                break
            # syndromes: sum_j v_j H[:, idx_j]
            synC = np.einsum("vj,rbj->vbr", vals, HC[:, block]) % p
            isc = ~synC.any(axis=2)
            if isc.any():
                best_c = min(best_c, w)
                synD = np.einsum("vj,rbj->vbr", vals, HD[:, block]) % p
                if (isc & synD.any(axis=2)).any():
                    best_o = w
                    break
        if best_o < math.inf:
            break
    return OutsideWeight(best_o, best_c, best_c == best_o)


# -- structural identity: incidence null space vs cyclic code from Z ---------

@dataclass
class CyclicIdentityReport:
    m: int
    mu: int
    s: int
    p: int
    n: int
    flats: int
    root_count: int
    row_rank: int
    method: str
    closed_under_shift: bool = True
    orthogonal: bool = True
    equal: bool = False
    notes: list[str] = field(default_factory=list)


def verify_cyclic_eg_identity(m: int, mu: int, s: int, p: int, budget: int = DEFAULT_FLAT_BUDGET,
                              primitive_poly=None, direct_limit: int = 1 << 22) -> CyclicIdentityReport:
    """Check null(origin-free incidence) == cyclic code with roots Z (row-space equality).

    Small instances compare the two parity checks directly.  Larger ones stream
    the flats: every incidence vector is orthogonal to g(x), the flat family
    is closed under the rotation x -> alpha x (so orthogonality to every shift
    of g follows), and the incidence rank reaches |Z|.
    """
    g = Geometry(m, s, p, primitive_poly)
    n = g.point_count - 1
    Z = cyclic_eg_root_set(m, mu, s, p)
    cyc = CyclicCode(p, n, Z, g.tower)
    if g.flat_count(mu, True) > budget and g.q == 2:
        return _verify_binary_by_monomials(g, mu, cyc)
    keys, pts = g.flat_points(mu, True, budget)
    J = pts.shape[0]
    if J * n <= direct_limit:
        H = np.zeros((J, n), dtype=np.int64)
        np.put_along_axis(H, pts, 1, axis=1)
        r = rank(H, p)
        eq = row_space_equal(H, cyc.parity_check_matrix(), p)
        return CyclicIdentityReport(m, mu, s, p, n, J, len(Z), r, "direct", equal=eq)

    gvec = np.zeros(n, dtype=np.int64)
    gpoly = cyc.generator_poly
    gvec[:len(gpoly)] = gpoly
    orthogonal = not (gvec[pts].sum(axis=1) % p).any()

    dt = np.int16 if n < (1 << 15) else np.int32
    w = pts.shape[1]
    enc = np.sort(np.ascontiguousarray(pts.astype(dt)).view(np.dtype((np.void, w * dt().itemsize))).ravel())
    shifted = np.sort((pts + 1) % n, axis=1).astype(dt)
    senc = np.ascontiguousarray(shifted).view(np.dtype((np.void, w * dt().itemsize))).ravel()
    pos = np.searchsorted(enc, senc)
    closed = bool(np.all(pos < enc.size) and np.all(enc[np.minimum(pos, enc.size - 1)] == senc))

    basis = RowBasis(n, p)
    target = len(Z)
    chunk = 2 * n
    for start in range(0, J, chunk):
        block = pts[start:start + chunk]
        H = np.zeros((block.shape[0], n), dtype=np.int64)
        np.put_along_axis(H, block, 1, axis=1)
        if basis.add(H) >= target:
            break
    r = basis.rank
    return CyclicIdentityReport(m, mu, s, p, n, J, target, r, "streaming", closed, orthogonal,
                                closed and orthogonal and r == target)


def _verify_binary_by_monomials(g: Geometry, mu: int, cyc: CyclicCode, seed: int = 0) -> CyclicIdentityReport:
    """Identity check for EG(m, 2) without enumerating every flat.

    The indicator of a flat a + V avoiding the origin is a product of m - mu
    affine functions whose constant terms multiply to zero, hence a GF(2)
    combination of coordinate monomials of degree 1..m-mu.  If all those
    monomials (restricted to the nonzero points) lie in C(Z)^perp, so does
    every incidence row.  Rank |Z| on a seeded sample of flats then forces
    equality, because dim C(Z)^perp = |Z|.
    """
    m, n = g.m, g.point_count - 1
    r = m - mu
    coords = g.elem_coord[g.tower.exp[np.arange(n)]]            # coordinate integer of point i
    bits = ((coords[:, None] >> np.arange(m)[None, :]) & 1).astype(np.int64)
    monos = [np.prod(bits[:, list(I)], axis=1) for t in range(1, r + 1)
             for I in itertools.combinations(range(m), t)]
    M = np.array(monos, dtype=np.int64)
    G = cyc.generator_matrix()
    orthogonal = not ((M @ G.T) % 2).any()

    rng = np.random.default_rng(seed)
    target = len(cyc.defining_set)
    basis = RowBasis(n, 2)
    sampled = 0
    combos = np.array(list(itertools.product((0, 1), repeat=mu)), dtype=np.int64)
    while basis.rank < target and sampled < 64 * n:
        rows = []
        while len(rows) < n:
            dirs = rng.integers(1, 1 << m, size=mu)
            span = np.bitwise_xor.reduce(combos * dirs[None, :], axis=1) if mu else np.zeros(1, np.int64)
            if len(np.unique(span)) != 1 << mu:
                continue
            a = int(rng.integers(1, 1 << m))
            if a in set(span.tolist()):
                continue
            pts = g.point_index[g.coord_elems[span ^ a]]
            row = np.zeros(n, dtype=np.int64)
            row[pts] = 1
            rows.append(row)
        H = np.array(rows)
        if ((H @ G.T) % 2).any():
            orthogonal = False
        basis.add(H)
        sampled += len(rows)
    rk = basis.rank
    flats = g.flat_count(mu, True)
    return CyclicIdentityReport(m, mu, 1, 2, n, flats, target, rk, "monomial", True, orthogonal,
                                orthogonal and rk == target,
                                notes=[f"{len(monos)} monomials, {sampled} sampled flats"])
