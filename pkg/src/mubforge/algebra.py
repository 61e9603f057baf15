"""Finite fields, finite abelian groups and complex roots of unity.

Every group element is handled through its canonical index in ``range(order)``.
Products of cyclic groups use a mixed-radix encoding with the first factor
most significant, so ``Z_2 x Z_6`` maps ``(i, j) -> 6*i + j``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from itertools import product as cartesian

import numpy as np

__all__ = [
    "FiniteField",
    "FiniteGroup",
    "gf_construct",
    "group_construct",
    "cyclic",
    "direct_product",
    "field_additive",
    "root_of_unity",
    "roots_of_unity",
    "prime_power",
    "is_prime",
    "smallest_prime_factor",
]


def smallest_prime_factor(n: int) -> int:
    if n < 2:
        raise ValueError(f"{n} has no prime factor")
    if n % 2 == 0:
        return 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return f
        f += 2
    return n


def is_prime(n: int) -> bool:
    return n >= 2 and smallest_prime_factor(n) == n


def prime_power(q: int) -> tuple[int, int] | None:
    """Return ``(p, n)`` with ``q == p**n`` or None if q is not a prime power."""
    if q < 2:
        return None
    p = smallest_prime_factor(q)
    n = 0
    while q % p == 0:
        q //= p
        n += 1
    return (p, n) if q == 1 else None


# ---------------------------------------------------------------------------
# polynomials over GF(p), coefficient tuples low -> high degree


def _poly_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a: list[int], m: tuple[int, ...], p: int) -> list[int]:
    # m is monic
    a = _poly_trim([c % p for c in a])
    dm = len(m) - 1
    while len(a) - 1 >= dm:
        coef = a[-1]
        shift = len(a) - 1 - dm
        for k, mk in enumerate(m):
            a[shift + k] = (a[shift + k] - coef * mk) % p
        _poly_trim(a)
    return a


def _poly_mul(a: tuple[int, ...], b: tuple[int, ...], p: int) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return out


def _monic_polys(p: int, n: int):
    """Monic degree-n polynomials in increasing order of their lower coefficients
    read as a base-p integer (x^{n-1} coefficient most significant)."""
    for v in range(p**n):
        coeffs = [(v // p**k) % p for k in range(n)]
        yield tuple(coeffs) + (1,)


def _is_irreducible(m: tuple[int, ...], p: int) -> bool:
    n = len(m) - 1
    for k in range(1, n // 2 + 1):
        for f in _monic_polys(p, k):
            if not _poly_mod(list(m), f, p):
                return False
    return True


@dataclass(frozen=True, eq=False)
class FiniteField:
    """GF(p^n) with elements enumerated by their base-p coefficient vectors.

    Element ``k`` is the polynomial ``sum_t c_t x^t`` with ``k = sum_t c_t p^t``,
    hence index 0 is zero and index 1 is one.
    """

    p: int
    n: int
    modulus: tuple[int, ...]
    add_table: np.ndarray = field(repr=False)
    mul_table: np.ndarray = field(repr=False)

    @property
    def q(self) -> int:
        return self.p**self.n

    @property
    def order(self) -> int:
        return self.q

    def coefficients(self, a: int) -> tuple[int, ...]:
        return tuple((a // self.p**t) % self.p for t in range(self.n))

    def from_coefficients(self, coeffs) -> int:
        return sum((c % self.p) * self.p**t for t, c in enumerate(coeffs))

    def add(self, a: int, b: int) -> int:
        return int(self.add_table[a, b])

    def mul(self, a: int, b: int) -> int:
        return int(self.mul_table[a, b])

    def neg(self, a: int) -> int:
        return int(self._neg[a])

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("zero has no multiplicative inverse")
        return int(self._inv[a])

    @cached_property
    def _neg(self) -> np.ndarray:
        return np.argmin(self.add_table, axis=1)

    @cached_property
    def _inv(self) -> np.ndarray:
        inv = np.zeros(self.q, dtype=np.int64)
        for a in range(1, self.q):
            inv[a] = int(np.flatnonzero(self.mul_table[a] == 1)[0])
        return inv

    def modulus_str(self) -> str:
        terms = []
        for t in range(self.n, -1, -1):
            c = self.modulus[t]
            if not c:
                continue
            if t == 0:
                terms.append(str(c))
            else:
                mono = "x" if t == 1 else f"x^{t}"
                terms.append(mono if c == 1 else f"{c}{mono}")
        return " + ".join(terms)

    def __repr__(self) -> str:
        return f"GF({self.q})[{self.modulus_str()}]"


@lru_cache(maxsize=None)
def gf_construct(q: int) -> FiniteField:
    """Build GF(q) using the smallest monic irreducible modulus of degree n."""
    pp = prime_power(q)
    if pp is None:
        raise ValueError(f"q={q} is not a prime power")
    p, n = pp
    modulus = next(m for m in _monic_polys(p, n) if _is_irreducible(m, p))

    digits = np.array([[(a // p**t) % p for t in range(n)] for a in range(q)], dtype=np.int64)
    weights = p ** np.arange(n, dtype=np.int64)
    add = ((digits[:, None, :] + digits[None, :, :]) % p) @ weights

    mul = np.zeros((q, q), dtype=np.int64)
    for a in range(q):
        for b in range(a, q):
            prod = _poly_mod(_poly_mul(tuple(digits[a]), tuple(digits[b]), p), modulus, p)
            v = sum(c * p**t for t, c in enumerate(prod))
            mul[a, b] = mul[b, a] = v
    add.setflags(write=False)
    mul.setflags(write=False)
    return FiniteField(p, n, modulus, add, mul)


# ---------------------------------------------------------------------------
# groups


@dataclass(frozen=True)
class FiniteGroup:
    """Finite abelian group Z_{f_0} x ... x Z_{f_{k-1}} acting on canonical indices."""

    kind: str
    factors: tuple[int, ...]
    q: int | None = None  # field order, only for kind == "field"

    def __post_init__(self):
        if not self.factors or any(f < 1 for f in self.factors):
            raise ValueError(f"group orders must be positive, got {self.factors}")

    @property
    def order(self) -> int:
        return math.prod(self.factors)

    @property
    def identity(self) -> int:
        return 0

    @cached_property
    def _weights(self) -> np.ndarray:
        w = np.ones(len(self.factors), dtype=np.int64)
        for k in range(len(self.factors) - 2, -1, -1):
            w[k] = w[k + 1] * self.factors[k + 1]
        return w

    def element(self, idx: int) -> tuple[int, ...]:
        if not 0 <= idx < self.order:
            raise ValueError(f"index {idx} outside group of order {self.order}")
        return tuple(int(idx // w) % f for w, f in zip(self._weights, self.factors))

    def index(self, elem) -> int:
        elem = tuple(elem)
        if len(elem) != len(self.factors):
            raise ValueError(f"element {elem} has wrong arity for {self.label}")
        return int(sum((e % f) * w for e, f, w in zip(elem, self.factors, self._weights)))

    @cached_property
    def _digits(self) -> np.ndarray:
        idx = np.arange(self.order, dtype=np.int64)
        return (idx[:, None] // self._weights[None, :]) % np.array(self.factors)

    @cached_property
    def op_table(self) -> np.ndarray:
        d = self._digits
        table = ((d[:, None, :] + d[None, :, :]) % np.array(self.factors)) @ self._weights
        table.setflags(write=False)
        return table

    @cached_property
    def inverse_table(self) -> np.ndarray:
        inv = ((-self._digits) % np.array(self.factors)) @ self._weights
        inv.setflags(write=False)
        return inv

    def op(self, a, b):
        return self.op_table[a, b]

    def inv(self, a):
        return self.inverse_table[a]

    @property
    def label(self) -> str:
        if self.kind == "field":
            return f"GF({self.q})+"
        return "×".join(f"Z{f}" for f in self.factors)

    def to_spec(self) -> dict:
        if self.kind == "cyclic":
            return {"kind": "cyclic", "d": self.factors[0]}
        if self.kind == "product":
            return {"kind": "product", "factors": list(self.factors)}
        return {"kind": "field", "q": self.q}


def cyclic(d: int) -> FiniteGroup:
    return FiniteGroup("cyclic", (int(d),))


def direct_product(factors) -> FiniteGroup:
    return FiniteGroup("product", tuple(int(f) for f in factors))


def field_additive(q: int) -> FiniteGroup:
    pp = prime_power(q)
    if pp is None:
        raise ValueError(f"q={q} is not a prime power")
    p, n = pp
    # index sum_t c_t p^t: the x^{n-1} coefficient is the most significant digit
    return FiniteGroup("field", (p,) * n, q=q)


def group_construct(spec) -> FiniteGroup:
    """Build a group from its JSON spec, e.g. ``{"kind": "product", "factors": [2, 6]}``."""
    if isinstance(spec, FiniteGroup):
        return spec
    try:
        kind = spec["kind"]
        if kind == "cyclic":
            d = spec["d"]
            if not isinstance(d, int) or d < 1:
                raise ValueError(f"cyclic order must be a positive integer, got {d!r}")
            return cyclic(d)
        if kind == "product":
            factors = spec["factors"]
            if not factors or not all(isinstance(f, int) and f >= 1 for f in factors):
                raise ValueError(f"product factors must be positive integers, got {factors!r}")
            return direct_product(factors)
        if kind == "field":
            return field_additive(spec["q"])
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed group spec {spec!r}") from exc
    raise ValueError(f"unknown group kind {kind!r}")


# ---------------------------------------------------------------------------
# roots of unity


@lru_cache(maxsize=None)
def roots_of_unity(n: int) -> np.ndarray:
    """Table ``[e^{2 pi i k / n} for k in range(n)]``, exact at multiples of 1/8 turn."""
    if n < 1:
        raise ValueError("n must be positive")
    table = np.array([cmath.exp(2j * math.pi * k / n) for k in range(n)], dtype=np.complex128)
    exact = {0: 1, 1: 1j, 2: -1, 3: -1j}
    for k in range(n):
        if (4 * k) % n == 0:
            table[k] = exact[4 * k // n]
    # conjugate symmetry makes w^k * w^{n-k} as close to 1 as rounding allows
    for k in range(1, (n + 1) // 2):
        table[n - k] = table[k].conjugate()
    table.setflags(write=False)
    return table


def root_of_unity(n: int, k: int) -> complex:
    if n < 1:
        raise ValueError("root_of_unity needs n >= 1")
    return complex(roots_of_unity(n)[k % n])
