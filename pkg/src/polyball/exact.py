"""Exact arithmetic: rationals, combinatorial numbers and sums of square roots.

Rationals are plain :class:`fractions.Fraction` objects. :class:`Surd` holds a
finite sum ``q_1*sqrt(n_1) + ... + q_r*sqrt(n_r)`` with rational ``q_i`` and
squarefree integer ``n_i`` (``n = 1`` is the rational part).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction
from functools import lru_cache
from numbers import Rational

__all__ = [
    "Params",
    "Surd",
    "as_rational",
    "binomial",
    "eulerian",
    "format_exact",
    "squarefree_part",
    "surd_add",
    "surd_eq",
    "surd_scale",
    "to_decimal",
]


def as_rational(value) -> Fraction:
    """Convert ``value`` to a Fraction without float rounding surprises.

    Strings may be ``"5/2"``, ``"2.5"`` or ``"1e-3"``. Floats go through their
    shortest repr, so ``0.1`` becomes ``1/10``.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError(f"non-finite value {value!r}")
        return Fraction(repr(value))
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not a rational number: {value!r}") from exc
    raise TypeError(f"cannot interpret {type(value).__name__} as a rational")


def binomial(n: int, r: int) -> int:
    if r < 0 or r > n or n < 0:
        return 0
    return math.comb(n, r)


_EULERIAN_ROWS: list[tuple[int, ...]] = [(), (1,)]


def _eulerian_row(n: int) -> tuple[int, ...]:
    while len(_EULERIAN_ROWS) <= n:
        size = len(_EULERIAN_ROWS)
        prev = _EULERIAN_ROWS[-1]
        row = []
        for m in range(size):
            left = (m + 1) * prev[m] if m < size - 1 else 0
            right = (size - m) * prev[m - 1] if m >= 1 else 0
            row.append(left + right)
        _EULERIAN_ROWS.append(tuple(row))
    return _EULERIAN_ROWS[n]


def eulerian(n: int, m: int) -> int:
    """Eulerian number A(n, m): permutations of n letters with m descents."""
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    if not 0 <= m < n:
        raise ValueError(f"need 0 <= m < n, got m={m}, n={n}")
    return _eulerian_row(n)[m]


def _icbrt(n: int) -> int:
    r = int(round(n ** (1.0 / 3.0)))
    while r**3 > n:
        r -= 1
    while (r + 1) ** 3 <= n:
        r += 1
    return r


@lru_cache(maxsize=4096)
def squarefree_part(n: int) -> tuple[int, int]:
    """Return ``(s, f)`` with ``n == s*s*f`` and ``f`` squarefree."""
    if n < 0:
        raise ValueError("radicand must be nonnegative")
    if n < 2:
        return (1, n) if n == 1 else (0, 0)
    s, f, m = 1, 1, n
    p = 2
    # after stripping primes up to cbrt(n) the cofactor has at most two prime factors
    limit = _icbrt(n)
    while p <= limit and m > 1:
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            s *= p ** (e // 2)
            if e % 2:
                f *= p
        p += 1 if p == 2 else 2
    if m > 1:
        r = math.isqrt(m)
        if r * r == m:
            s *= r
        else:
            f *= m
    return s, f


class Surd:
    """Exact value ``sum(q * sqrt(n))`` over squarefree radicands ``n``.

    Instances are immutable. Arithmetic with ints and Fractions is supported,
    as is multiplication of two surds (radicands are re-normalized).
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms=None):
        acc: dict[int, Fraction] = {}
        for radicand, coef in dict(terms or {}).items():
            radicand = int(radicand)
            coef = as_rational(coef)
            if coef == 0:
                continue
            s, f = squarefree_part(radicand)
            if f == 0:
                continue
            acc[f] = acc.get(f, Fraction(0)) + coef * s
        self._terms = tuple(sorted((n, q) for n, q in acc.items() if q != 0))
        self._hash = None

    @classmethod
    def rational(cls, q) -> "Surd":
        return cls({1: q})

    @classmethod
    def sqrt(cls, value) -> "Surd":
        """Exact square root of a nonnegative rational."""
        value = as_rational(value)
        if value < 0:
            raise ValueError("square root of a negative rational")
        p, q = value.numerator, value.denominator
        # sqrt(p/q) = sqrt(p*q)/q
        return cls({p * q: Fraction(1, q)})

    @staticmethod
    def coerce(value) -> "Surd":
        if isinstance(value, Surd):
            return value
        return Surd.rational(value)

    @property
    def terms(self) -> dict[int, Fraction]:
        return dict(self._terms)

    @property
    def rational_part(self) -> Fraction:
        return dict(self._terms).get(1, Fraction(0))

    def is_rational(self) -> bool:
        return all(n == 1 for n, _ in self._terms)

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is irrational")
        return self.rational_part

    def __add__(self, other):
        try:
            other = Surd.coerce(other)
        except TypeError:
            return NotImplemented
        merged = dict(self._terms)
        for n, q in other._terms:
            merged[n] = merged.get(n, Fraction(0)) + q
        return Surd(merged)

    __radd__ = __add__

    def __neg__(self):
        return Surd({n: -q for n, q in self._terms})

    def __sub__(self, other):
        try:
            return self + (-Surd.coerce(other))
        except TypeError:
            return NotImplemented

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Surd):
            out: dict[int, Fraction] = {}
            for n1, q1 in self._terms:
                for n2, q2 in other._terms:
                    s, f = squarefree_part(n1 * n2)
                    out[f] = out.get(f, Fraction(0)) + q1 * q2 * s
            return Surd(out)
        try:
            scale = as_rational(other)
        except TypeError:
            return NotImplemented
        return Surd({n: q * scale for n, q in self._terms})

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Surd):
            if not other.is_rational():
                return NotImplemented
            other = other.rational_part
        try:
            scale = as_rational(other)
        except TypeError:
            return NotImplemented
        return Surd({n: q / scale for n, q in self._terms})

    def __eq__(self, other):
        if isinstance(other, Surd):
            return self._terms == other._terms
        try:
            return self._terms == Surd.rational(other)._terms
        except TypeError:
            return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self._terms) if not self.is_rational() else hash(self.rational_part)
        return self._hash

    def __bool__(self):
        return bool(self._terms)

    def __float__(self):
        return float(sum(float(q) * math.sqrt(n) for n, q in self._terms))

    def __str__(self):
        return format_exact(self)

    def __repr__(self):
        return f"Surd({format_exact(self)!r})"


def surd_add(*values) -> Surd:
    total = Surd()
    for v in values:
        total = total + v
    return total


def surd_scale(value, factor) -> Surd:
    return Surd.coerce(value) * as_rational(factor)


def surd_eq(a, b) -> bool:
    return Surd.coerce(a) == Surd.coerce(b)


def _format_fraction(q: Fraction) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_exact(value) -> str:
    """Canonical text: ``p/q`` for rationals, ``p/q + r/s*sqrt(n)`` for surds."""
    if not isinstance(value, Surd):
        return _format_fraction(as_rational(value))
    if not value._terms:
        return "0"
    parts = []
    for idx, (n, q) in enumerate(value._terms):
        mag = abs(q)
        if n == 1:
            body = _format_fraction(mag)
        elif mag == 1:
            body = f"sqrt({n})"
        else:
            body = f"{_format_fraction(mag)}*sqrt({n})"
        if idx == 0:
            parts.append(("-" if q < 0 else "") + body)
        else:
            parts.append((" - " if q < 0 else " + ") + body)
    return "".join(parts)


def to_decimal(value, digits: int = 20) -> str:
    """Decimal rendering for display only, ``digits`` significant digits."""
    with localcontext() as ctx:
        ctx.prec = digits + 10
        if isinstance(value, Surd):
            total = Decimal(0)
            for n, q in value._terms:
                total += Decimal(q.numerator) / Decimal(q.denominator) * Decimal(n).sqrt()
        else:
            q = as_rational(value)
            total = Decimal(q.numerator) / Decimal(q.denominator)
        if total == 0:
            return "0"
        ctx.prec = digits
        total = +total
        text = format(total, f".{digits}g")
    if "e" not in text and "." in text:
        text = text.rstrip("0").rstrip(".")
    return text


@dataclass(frozen=True)
class Params:
    """Dimension ``d`` and exact parameter ``k`` with ``1 <= k <= d``."""

    d: int
    k: Fraction

    def __post_init__(self):
        if isinstance(self.d, bool) or not isinstance(self.d, int):
            raise TypeError(f"d must be an int, got {self.d!r}")
        if self.d < 1:
            raise ValueError(f"d must be positive, got {self.d}")
        k = as_rational(self.k)
        if not 1 <= k <= self.d:
            raise ValueError(f"k must lie in [1, d={self.d}], got {_format_fraction(k)}")
        object.__setattr__(self, "k", k)

    @property
    def floor_k(self) -> int:
        return self.k.numerator // self.k.denominator

    @property
    def k_is_integer(self) -> bool:
        return self.k.denominator == 1

    @property
    def frac_k(self) -> Fraction:
        return self.k - self.floor_k

    def __str__(self):
        return f"(d={self.d}, k={_format_fraction(self.k)})"
