"""Finite-field tower arithmetic GF(p) < GF(p^s) < GF(p^(m s)).

Elements of GF(p^d) are plain integers whose base-p digits are the
coefficients of a polynomial in the primitive element ``alpha`` (lowest
digit = constant term).  The prime subfield is therefore {0, ..., p-1}
with its natural arithmetic.  Multiplication goes through exp/log tables;
``log[0]`` holds the sentinel ``-1``.

Primitive polynomials used when none is supplied (coefficients lowest
degree first; for every (p, d) this is the primitive polynomial of
smallest value when read as a base-p integer):

    p=2  d=1..20   e.g. d=4: x^4+x+1,  d=8: x^8+x^4+x^3+x^2+1
    p=3  d=1..12   e.g. d=2: x^2+x+2
    p=5  d=1..8
    p=7  d=1..7

Other fields up to 2^16 elements fall back to a search in the same order.
"""

from __future__ import annotations

import functools
import math
from typing import Iterable, Sequence

import numpy as np

from aqc.errors import ValidationError

MAX_FIELD_ORDER = 1 << 20
SEARCH_LIMIT = 1 << 16

PRIMITIVE_POLYS: dict[tuple[int, int], tuple[int, ...]] = {
    (2, 1): (1, 1),
    (2, 2): (1, 1, 1),
    (2, 3): (1, 1, 0, 1),
    (2, 4): (1, 1, 0, 0, 1),
    (2, 5): (1, 0, 1, 0, 0, 1),
    (2, 6): (1, 1, 0, 0, 0, 0, 1),
    (2, 7): (1, 1, 0, 0, 0, 0, 0, 1),
    (2, 8): (1, 0, 1, 1, 1, 0, 0, 0, 1),
    (2, 9): (1, 0, 0, 0, 1, 0, 0, 0, 0, 1),
    (2, 10): (1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 1),
    (2, 11): (1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1),
    (2, 12): (1, 1, 0, 0, 1, 0, 1, 0, 0, 0, 0, 0, 1),
    (2, 13): (1, 1, 0, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1),
    (2, 14): (1, 1, 0, 1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1),
    (2, 15): (1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1),
    (2, 16): (1, 0, 1, 1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1),
    (2, 17): (1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1),
    (2, 18): (1, 1, 1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1),
    (2, 19): (1, 1, 1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1),
    (2, 20): (1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1),
    (3, 1): (1, 1),
    (3, 2): (2, 1, 1),
    (3, 3): (1, 2, 0, 1),
    (3, 4): (2, 1, 0, 0, 1),
    (3, 5): (1, 2, 0, 0, 0, 1),
    (3, 6): (2, 1, 0, 0, 0, 0, 1),
    (3, 7): (1, 2, 1, 0, 0, 0, 0, 1),
    (3, 8): (2, 0, 0, 1, 0, 0, 0, 0, 1),
    (3, 9): (1, 0, 1, 2, 0, 0, 0, 0, 0, 1),
    (3, 10): (2, 1, 0, 1, 0, 0, 0, 0, 0, 0, 1),
    (3, 11): (1, 2, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1),
    (3, 12): (2, 2, 2, 1, 2, 0, 0, 0, 0, 0, 0, 0, 1),
    (5, 1): (2, 1),
    (5, 2): (2, 1, 1),
    (5, 3): (2, 3, 0, 1),
    (5, 4): (2, 2, 1, 0, 1),
    (5, 5): (2, 4, 0, 0, 0, 1),
    (5, 6): (2, 1, 0, 0, 0, 0, 1),
    (5, 7): (2, 3, 0, 0, 0, 0, 0, 1),
    (5, 8): (3, 2, 1, 0, 0, 0, 0, 0, 1),
    (7, 1): (2, 1),
    (7, 2): (3, 1, 1),
    (7, 3): (2, 3, 0, 1),
    (7, 4): (5, 3, 1, 0, 1),
    (7, 5): (4, 1, 0, 0, 0, 1),
    (7, 6): (5, 1, 3, 0, 0, 0, 1),
    (7, 7): (2, 6, 0, 0, 0, 0, 0, 1),
}


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % d for d in range(2, math.isqrt(n) + 1))


class FieldTower:
    """GF(p^(s*m)) with a distinguished primitive element and the subfield GF(p^s).

    Parameters
    ----------
    p : int
        Prime characteristic.
    s, m : int
        The "small" field is GF(q) with q = p^s, the big field is GF(q^m).
    primitive_poly : sequence of int, optional
        Monic degree-(s*m) polynomial over GF(p), lowest coefficient first.
        Defaults to the entry of :data:`PRIMITIVE_POLYS`.

    Instances are immutable after construction.
    """

    def __init__(self, p: int, s: int = 1, m: int = 1,
                 primitive_poly: Sequence[int] | None = None) -> None:
        if not is_prime(p):
            raise ValidationError(f"characteristic p={p} is not prime")
        if s < 1 or m < 1:
            raise ValidationError(f"extension degrees must be positive, got s={s}, m={m}")
        degree = s * m
        order = p ** degree
        if order > MAX_FIELD_ORDER:
            raise ValidationError(f"GF({p}^{degree}) exceeds the supported size 2^20")
        if primitive_poly is None:
            poly = PRIMITIVE_POLYS.get((p, degree)) or find_primitive_poly(p, degree)
        else:
            poly = tuple(int(c) for c in primitive_poly)
        _check_poly_shape(poly, p, degree)

        self.p = p
        self.s = s
        self.m = m
        self.q = p ** s
        self.degree = degree
        self.order = order
        self.primitive_poly = poly
        self._pw = [p ** i for i in range(degree)]
        self.exp, self.log = self._build_tables()
        self.alpha = int(self.exp[1 % (order - 1)])
        if p == 2:
            self._digits = None
        else:
            self._digits = ((np.arange(order)[:, None] // np.array(self._pw)[None, :]) % p).astype(np.int64)
            self._weights = np.array(self._pw, dtype=np.int64)

    def __repr__(self) -> str:
        return f"FieldTower(p={self.p}, s={self.s}, m={self.m}, poly={self.primitive_poly})"

    # -- construction ---------------------------------------------------

    def _mul_by_x(self, v: int) -> int:
        p, d, poly = self.p, self.degree, self.primitive_poly
        digits = [(v // self._pw[i]) % p for i in range(d)]
        top = digits[-1]
        shifted = [0] + digits[:-1]
        if top:
            shifted = [(shifted[i] - top * poly[i]) % p for i in range(d)]
        return sum(c * w for c, w in zip(shifted, self._pw))

    def _build_tables(self) -> tuple[np.ndarray, np.ndarray]:
        order, p = self.order, self.p
        n = order - 1
        exp = np.zeros(n, dtype=np.int64)
        log = np.full(order, -1, dtype=np.int64)
        if p == 2 and self.degree > 1:
            top = 1 << self.degree
            polyint = sum(c << i for i, c in enumerate(self.primitive_poly))
            v = 1
            for i in range(n):
                if v == 0 or log[v] >= 0:
                    self._not_primitive(i)
                exp[i] = v
                log[v] = i
                v <<= 1
                if v & top:
                    v ^= polyint
        else:
            v = 1
            for i in range(n):
                if v == 0 or log[v] >= 0:
                    self._not_primitive(i)
                exp[i] = v
                log[v] = i
                v = self._mul_by_x(v)
            if v != 1:
                self._not_primitive(n)
        exp.flags.writeable = False
        log.flags.writeable = False
        return exp, log

    def _not_primitive(self, order_found: int) -> None:
        raise ValidationError(
            f"polynomial {self.primitive_poly} is not primitive over GF({self.p}): "
            f"its root has multiplicative order {order_found} != {self.order - 1}"
        )

    # -- scalar arithmetic ---------------------------------------------

    def add(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        return int(((self._digits[a] + self._digits[b]) % self.p) @ self._weights)

    def neg(self, a: int) -> int:
        if self.p == 2:
            return a
        return int(((-self._digits[a]) % self.p) @ self._weights)

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return int(self.exp[(self.log[a] + self.log[b]) % (self.order - 1)])

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("zero has no inverse")
        return int(self.exp[(-self.log[a]) % (self.order - 1)])

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def power(self, a: int, e: int) -> int:
        if e == 0:
            return 1
        if a == 0:
            return 0
        return int(self.exp[(int(self.log[a]) * e) % (self.order - 1)])

    def alpha_pow(self, e: int) -> int:
        """alpha^e for any integer e."""
        return int(self.exp[e % (self.order - 1)])

    # -- vectorised arithmetic -----------------------------------------

    def add_arr(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.p == 2:
            return a ^ b
        return ((self._digits[a] + self._digits[b]) % self.p) @ self._weights

    def neg_arr(self, a) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        if self.p == 2:
            return a
        return ((-self._digits[a]) % self.p) @ self._weights

    def mul_arr(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        a, b = np.broadcast_arrays(a, b)
        out = np.zeros(a.shape, dtype=np.int64)
        nz = (a != 0) & (b != 0)
        out[nz] = self.exp[(self.log[a[nz]] + self.log[b[nz]]) % (self.order - 1)]
        return out

    def sum_arr(self, a, axis: int = -1) -> np.ndarray:
        """Field sum along an axis."""
        a = np.asarray(a, dtype=np.int64)
        if self.p == 2:
            return np.bitwise_xor.reduce(a, axis=axis)
        return (self._digits[a].sum(axis=axis) % self.p) @ self._weights

    # -- subfields ------------------------------------------------------

    def has_subfield(self, size: int) -> bool:
        e = round(math.log(size, self.p))
        return self.p ** e == size and e >= 1 and self.degree % e == 0

    def subfield_alpha(self, size: int) -> int:
        """Primitive element of the embedded GF(size): alpha^((N-1)/(size-1))."""
        if not self.has_subfield(size):
            raise ValidationError(f"GF({size}) is not a subfield of GF({self.order})")
        return self.alpha_pow((self.order - 1) // (size - 1))

    def subfield(self, size: int) -> np.ndarray:
        """Elements of GF(size) ordered 0, beta^0, beta^1, ..., beta^(size-2)."""
        if not self.has_subfield(size):
            raise ValidationError(f"GF({size}) is not a subfield of GF({self.order})")
        step = (self.order - 1) // (size - 1)
        powers = [self.alpha_pow(step * i) for i in range(size - 1)]
        return np.array([0] + powers, dtype=np.int64)

    def in_subfield(self, x: int, size: int) -> bool:
        return self.power(x, size) == x

    @property
    def small(self) -> np.ndarray:
        """The embedded GF(p^s)."""
        return self.subfield(self.q)


@functools.lru_cache(maxsize=None)
def find_primitive_poly(p: int, degree: int) -> tuple[int, ...]:
    """Smallest (as a base-p integer) primitive polynomial of the given degree."""
    if p ** degree > SEARCH_LIMIT:
        raise ValidationError(f"no built-in primitive polynomial for GF({p}^{degree})")
    for low in range(1, p ** degree):
        poly = tuple((low // p ** i) % p for i in range(degree)) + (1,)
        if poly[0] == 0:
            continue
        try:
            FieldTower(p, 1, degree, poly)
        except ValidationError:
            continue
        return poly
    raise ValidationError(f"no primitive polynomial of degree {degree} over GF({p})")


@functools.lru_cache(maxsize=64)
def get_tower(p: int, s: int = 1, m: int = 1,
              primitive_poly: tuple[int, ...] | None = None) -> FieldTower:
    """Cached :class:`FieldTower` constructor."""
    return FieldTower(p, s, m, primitive_poly)


def build_field(p: int, degree: int, primitive_poly: Sequence[int] | None = None) -> FieldTower:
    """GF(p^degree) as a tower over its prime field."""
    if degree < 1:
        raise ValidationError(f"degree must be >= 1, got {degree}")
    poly = None if primitive_poly is None else tuple(int(c) for c in primitive_poly)
    return get_tower(p, 1, degree, poly)


def _check_poly_shape(poly: tuple[int, ...], p: int, degree: int) -> None:
    if len(poly) != degree + 1:
        raise ValidationError(f"primitive polynomial must have degree {degree}, got {len(poly) - 1}")
    if any(c < 0 or c >= p for c in poly):
        raise ValidationError(f"coefficients must lie in 0..{p - 1}")
    if poly[-1] != 1:
        raise ValidationError("primitive polynomial must be monic")


def trace_map(tower: FieldTower, from_size: int, to_size: int, x: int) -> int:
    """Tr_{from/to}(x) = sum_{i<l} x^(to^i) where from = to^l."""
    if not tower.has_subfield(from_size) or not tower.has_subfield(to_size):
        raise ValidationError("trace endpoints must be subfields of the tower")
    l = round(math.log(from_size, to_size))
    if to_size ** l != from_size:
        raise ValidationError(f"GF({to_size}) is not a subfield of GF({from_size})")
    if not tower.in_subfield(x, from_size):
        raise ValidationError(f"element {x} does not lie in GF({from_size})")
    acc = 0
    y = x
    for _ in range(l):
        acc = tower.add(acc, y)
        y = tower.power(y, to_size)
    return acc


def trace_arr(tower: FieldTower, from_size: int, to_size: int, x) -> np.ndarray:
    """Vectorised :func:`trace_map` (no membership checks)."""
    l = round(math.log(from_size, to_size))
    x = np.asarray(x, dtype=np.int64)
    acc = np.zeros_like(x)
    y = x
    for _ in range(l):
        acc = tower.add_arr(acc, y)
        nz = y != 0
        y = y.copy()
        y[nz] = tower.exp[(tower.log[y[nz]] * to_size) % (tower.order - 1)]
    return acc


def q_ary_weight(h: int, q: int) -> int:
    """Sum of the base-q digits of h."""
    if q < 2:
        raise ValidationError("base must be >= 2")
    w = 0
    while h:
        h, r = divmod(h, q)
        w += r
    return w


def cyclotomic_coset(h: int, p: int, n: int) -> list[int]:
    """Sorted {h p^j mod n : j >= 0}."""
    if math.gcd(p, n) != 1:
        raise ValidationError(f"gcd({p}, {n}) != 1")
    h %= n
    seen = []
    x = h
    while x not in seen:
        seen.append(x)
        x = (x * p) % n
    return sorted(seen)


def cyclotomic_closure(exponents: Iterable[int], p: int, n: int) -> list[int]:
    out: set[int] = set()
    for h in exponents:
        if h % n not in out:
            out.update(cyclotomic_coset(h, p, n))
    return sorted(out)


# -- polynomials with coefficients in a tower (lowest degree first) --------

def poly_trim(a: Sequence[int]) -> tuple[int, ...]:
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return tuple(a)


def poly_mul(a: Sequence[int], b: Sequence[int], field: FieldTower) -> tuple[int, ...]:
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            if y:
                out[i + j] = field.add(out[i + j], field.mul(x, y))
    return poly_trim(out)


def poly_divmod(a: Sequence[int], b: Sequence[int], field: FieldTower) -> tuple[tuple[int, ...], tuple[int, ...]]:
    b = poly_trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    rem = list(poly_trim(a))
    if len(rem) < len(b):
        return (), tuple(rem)
    quot = [0] * (len(rem) - len(b) + 1)
    lead_inv = field.inv(b[-1])
    for shift in range(len(rem) - len(b), -1, -1):
        c = rem[shift + len(b) - 1]
        if c == 0:
            continue
        f = field.mul(c, lead_inv)
        quot[shift] = f
        for j, y in enumerate(b):
            rem[shift + j] = field.sub(rem[shift + j], field.mul(f, y))
    return poly_trim(quot), poly_trim(rem)


def poly_eval(a: Sequence[int], x: int, field: FieldTower) -> int:
    acc = 0
    for c in reversed(a):
        acc = field.add(field.mul(acc, x), c)
    return acc


def poly_from_roots(roots: Iterable[int], field: FieldTower) -> tuple[int, ...]:
    """prod (x - r)."""
    g: tuple[int, ...] = (1,)
    for r in roots:
        g = poly_mul(g, (field.neg(r), 1), field)
    return g


def minimal_polynomial(field: FieldTower, h: int, q: int | None = None) -> tuple[int, ...]:
    """Minimal polynomial of alpha^h over GF(q) (default: the prime field)."""
    q = field.p if q is None else q
    n = field.order - 1
    return poly_from_roots((field.alpha_pow(j) for j in cyclotomic_coset(h, q, n)), field)
