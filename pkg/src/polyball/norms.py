"""The k-norm ``inf{|u|_1 + k|v|_inf : u + v = x}``, its dual, and ball membership.

Coordinates may be ints/Fractions (exact path, Fraction results) or floats
(float results). A vector mixing both is treated as float.
"""
from __future__ import annotations

import enum
from fractions import Fraction
from numbers import Rational
from typing import Sequence

from .exact import Params

__all__ = [
    "Membership",
    "classify",
    "dual_norm",
    "knorm",
    "knorm_variational",
    "member_rho",
    "member_rho_star",
    "sparsity_gap",
    "zero_norm",
]

DEFAULT_TOL = 1e-12


class Membership(enum.Enum):
    """Position of a point relative to a ball; truthy unless exterior."""

    INTERIOR = "interior"
    BOUNDARY = "boundary"
    EXTERIOR = "exterior"

    def __bool__(self):
        return self is not Membership.EXTERIOR


def _is_exact(x) -> bool:
    return all(isinstance(v, Rational) and not isinstance(v, bool) for v in x)


def _prepare(x: Sequence, p: Params):
    if len(x) != p.d:
        raise ValueError(f"vector has length {len(x)}, expected d={p.d}")
    if _is_exact(x):
        return [abs(Fraction(v)) for v in x], p.k
    return [abs(float(v)) for v in x], float(p.k)


def knorm(x: Sequence, p: Params):
    """Sum of the floor(k) largest |x_i| plus frac(k) times the next largest."""
    a, k = _prepare(x, p)
    a.sort(reverse=True)
    m = p.floor_k
    total = sum(a[:m], a[0] * 0)
    if m < p.d:
        total += (k - m) * a[m]
    return total


def knorm_variational(x: Sequence, p: Params):
    """Evaluate the infimal convolution directly, as a scan over breakpoints.

    Fix t = |v|_inf. The best u = x - v then clamps each v_i to [-t, t], which
    costs sum(max(|x_i| - t, 0)), so the norm is min over t >= 0 of
    g(t) = k*t + sum(max(|x_i| - t, 0)). g is convex and piecewise linear with
    kinks at the |x_i|, so its minimum sits at 0 or at one of them.
    """
    a, k = _prepare(x, p)
    zero = a[0] * 0
    best = None
    for t in {zero, *a}:
        g = k * t + sum((v - t for v in a if v > t), zero)
        if best is None or g < best:
            best = g
    return best


def dual_norm(x: Sequence, p: Params):
    """Gauge of (k * cross-polytope) intersected with the cube: max(|x|_inf, |x|_1 / k)."""
    a, k = _prepare(x, p)
    return max(max(a), sum(a) / k)


def zero_norm(x: Sequence) -> int:
    return sum(1 for v in x if v != 0)


def sparsity_gap(x: Sequence, k: int, l: int, d: int):
    """knorm(x, k) - knorm(x, l); zero exactly when x has at most k nonzeros."""
    if not (isinstance(k, int) and isinstance(l, int)):
        raise TypeError("k and l must be integers")
    if not 1 <= k < l <= d:
        raise ValueError(f"need 1 <= k < l <= d, got k={k}, l={l}, d={d}")
    return knorm(x, Params(d, k)) - knorm(x, Params(d, l))


def classify(gauge_value, tol: float = DEFAULT_TOL) -> Membership:
    """Compare a gauge value with 1: exactly for rationals, within ``tol`` for floats."""
    if isinstance(gauge_value, Rational):
        if gauge_value < 1:
            return Membership.INTERIOR
        return Membership.BOUNDARY if gauge_value == 1 else Membership.EXTERIOR
    if abs(gauge_value - 1.0) <= tol:
        return Membership.BOUNDARY
    return Membership.INTERIOR if gauge_value < 1.0 else Membership.EXTERIOR


def member_rho(x: Sequence, p: Params, tol: float = DEFAULT_TOL) -> Membership:
    return classify(knorm(x, p), tol)


def member_rho_star(x: Sequence, p: Params, tol: float = DEFAULT_TOL) -> Membership:
    return classify(dual_norm(x, p), tol)
