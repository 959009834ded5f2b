"""Closed-form volumes for rho(d, k), its polar, cube slabs and cube sections.

d-dimensional volumes are exact Fractions. (d-1)-dimensional measures that
carry a square root are :class:`~polyball.exact.Surd` values.

Facet and boundary measures of rho(d, k) come in two versions. ``corrected``
is the true measure, confirmed by exact triangulation. ``as_printed`` is the
closed form that circulates in the literature, 2^d k^(k-d+1/2) / k!. It is
smaller by a factor of d: it divides the facet measure by d! where the
(d-1)-dimensional pyramid formula needs (d-1)!. Both are kept so the
discrepancy stays visible.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from .exact import Params, Surd, as_rational, binomial, eulerian
from .combinatorics import facet_count

__all__ = [
    "ErratumValue",
    "MahlerReport",
    "MahlerRow",
    "alternating_binomial_sum",
    "apex_distance",
    "boundary_volume_rho",
    "boundary_volume_rho_star",
    "cube_section_volume",
    "eulerian_orthant_volume",
    "facet_volume_rho",
    "halfspace_cube_volume",
    "mahler_bound",
    "mahler_sweep",
    "mahler_volume",
    "orthant_volume_rho_star",
    "piece_volume",
    "slice_volume_delta",
    "telescoping_sum",
    "volume_rho",
    "volume_rho_star",
    "volume_rho_unsummed",
]

GRAY_CODE_MAX_DIM = 25


def apex_distance(k, l: int, i: int) -> Surd:
    """Distance from one pulled apex to the span of a (d-l)-cube face and i other apices.

    Measured in the dilate k*rho(d, k).
    """
    k = as_rational(k)
    if not (1 <= l <= k and 0 <= i <= l - 1):
        raise ValueError(f"need 1 <= l <= k and 0 <= i <= l-1, got k={k}, l={l}, i={i}")
    num = k * k - 2 * (i + 1) * k + (i + 1) * l
    den = k * k - 2 * i * k + i * l
    if den <= 0 or num < 0:
        raise ValueError(f"degenerate apex configuration at k={k}, l={l}, i={i}")
    return k * Surd.sqrt(num / den)


def piece_volume(d: int, k, l: int) -> Fraction:
    """Volume of conv(cube face of dim d-l, simplex of l pulled points) inside k*rho(d, k)."""
    k = as_rational(k)
    if not (0 <= l <= d and l <= k):
        raise ValueError(f"need 0 <= l <= min(d, k), got d={d}, k={k}, l={l}")
    return 2 ** (d - l) * k ** (l - 1) * (k - l) * Fraction(math.factorial(d - l), math.factorial(d))


def telescoping_sum(k, m: int) -> Fraction:
    """sum_{l=0}^{m} k^(l-1) (k-l) / l!, which collapses to k^m / m!."""
    k = as_rational(k)
    return sum((k ** (l - 1) * (k - l) / math.factorial(l) for l in range(m + 1)), Fraction(0))


def volume_rho_unsummed(p: Params) -> Fraction:
    """Volume from the subdivision into cube-face/simplex pieces, before telescoping."""
    return 2**p.d * telescoping_sum(p.k, p.floor_k) / p.k**p.d


def volume_rho(p: Params) -> Fraction:
    m = p.floor_k
    closed = 2**p.d * p.k ** (m - p.d) / math.factorial(m)
    if closed != volume_rho_unsummed(p):
        raise ArithmeticError(f"telescoped and summed volumes disagree at {p}")
    return closed


@dataclass(frozen=True)
class ErratumValue:
    """A measure together with the published closed form it corrects."""

    corrected: Surd
    as_printed: Surd
    factor: int  # corrected == factor * as_printed

    @property
    def note(self) -> str:
        return (f"the closed form 2^d k^(k-d+1/2)/k! gives {self.as_printed}, "
                f"short by a factor of d={self.factor}")


def _check_integer_k(d: int, k) -> int:
    k = as_rational(k)
    if k.denominator != 1:
        raise NotImplementedError("facet and boundary measures of rho(d, k) need integer k")
    k = int(k)
    Params(d, k)
    return k


def facet_volume_rho(d: int, k) -> ErratumValue:
    """(d-1)-volume of one facet of rho(d, k), integer k.

    In k*rho the facet is split into k pyramids over the cube face, each an
    iterated pyramid with apex heights from :func:`apex_distance`; their
    product telescopes to k^(k-3/2). Rescaling by k^(d-1) gives the value here.
    """
    k = _check_integer_k(d, k)
    base = Fraction(2 ** (d - k) * math.factorial(d - k)) * Fraction(k) ** (k - 1) / Fraction(k) ** (d - 1)
    root_k = Surd.sqrt(k)
    corrected = root_k * (base / math.factorial(d - 1))
    printed = root_k * (base / math.factorial(d))
    return ErratumValue(corrected, printed, d)


def boundary_volume_rho(p: Params) -> ErratumValue:
    k = _check_integer_k(p.d, p.k)
    facet = facet_volume_rho(p.d, k)
    n = facet_count(p)
    return ErratumValue(facet.corrected * n, facet.as_printed * n, p.d)


def _gray_code_vertices(d: int):
    """Yield (flipped coordinate or -1, index) while walking {0,1}^d in Gray-code order."""
    yield -1
    for i in range(1, 2**d):
        yield (i & -i).bit_length() - 1


def _check_normal(a) -> list[Fraction]:
    a = [as_rational(v) for v in a]
    if not a:
        raise ValueError("empty normal vector")
    if any(v == 0 for v in a):
        raise ValueError("every coordinate of the normal must be nonzero")
    if len(a) > GRAY_CODE_MAX_DIM:
        raise ValueError(f"dimension {len(a)} exceeds the 2^d guard ({GRAY_CODE_MAX_DIM})")
    return a


def halfspace_cube_volume(a, c) -> Fraction:
    """Volume of [0,1]^d intersected with {x : a.x <= c}, every a_i nonzero.

    Sum over cube vertices v with a.v <= c of (-1)^(sum v) (c - a.v)^d,
    divided by d! times the product of the a_i.
    """
    a = _check_normal(a)
    c = as_rational(c)
    d = len(a)
    bits = [0] * d
    dot = Fraction(0)
    parity = 0
    total = Fraction(0)
    for flip in _gray_code_vertices(d):
        if flip >= 0:
            bits[flip] ^= 1
            dot += a[flip] if bits[flip] else -a[flip]
            parity ^= 1
        if dot <= c:
            term = (c - dot) ** d
            total += -term if parity else term
    return total / (math.factorial(d) * math.prod(a))


def orthant_volume_rho_star(p: Params) -> Fraction:
    """Volume of rho*(d, k) within [0, 1]^d: the part of the unit cube with coordinate sum <= k."""
    d, k = p.d, p.k
    return sum(((-1) ** i * (k - i) ** d / (math.factorial(i) * math.factorial(d - i))
                for i in range(p.floor_k + 1)), Fraction(0))


def eulerian_orthant_volume(p: Params) -> Fraction:
    """Same volume for integer k as a stack of hypersimplex slabs: sum_{l<k} A(d, l) / d!."""
    if not p.k_is_integer:
        raise ValueError("the slab decomposition needs integer k")
    return Fraction(sum(eulerian(p.d, l) for l in range(min(p.floor_k, p.d))), math.factorial(p.d))


def volume_rho_star(p: Params) -> Fraction:
    return 2**p.d * orthant_volume_rho_star(p)


def cube_section_volume(a, c) -> Surd:
    """(d-1)-volume of [-1,1]^d intersected with the hyperplane {a.x = c}, d >= 2.

    |a|_2 * sum over all vertices v of h(a.v + c) * prod(v), divided by
    2 (d-1)! prod(a), where h(t) = t^(d-1) sign(t) and h(0) = 0.
    """
    a = _check_normal(a)
    c = as_rational(c)
    d = len(a)
    if d < 2:
        raise ValueError("sections are only defined here for d >= 2")
    signs = [1] * d
    dot = sum(a, Fraction(0))
    sign_prod = 1
    total = Fraction(0)
    for flip in _gray_code_vertices(d):
        if flip >= 0:
            signs[flip] = -signs[flip]
            dot += 2 * a[flip] * signs[flip]
            sign_prod = -sign_prod
        t = dot + c
        if t != 0:
            term = t ** (d - 1) * sign_prod
            total += term if t > 0 else -term
    scale = total / (2 * math.factorial(d - 1) * math.prod(a))
    return Surd.sqrt(sum((v * v for v in a), Fraction(0))) * scale


def alternating_binomial_sum(d: int, k, power: int | None = None) -> Fraction:
    """sum_{i=0}^{d} (-1)^i C(d, i) (k - i)^power, power defaulting to d-1 (a d-th difference, so 0)."""
    k = as_rational(k)
    power = d - 1 if power is None else power
    return sum(((-1) ** i * binomial(d, i) * (k - i) ** power for i in range(d + 1)), Fraction(0))


def slice_volume_delta(d: int, k) -> Surd:
    """(d-1)-volume of [0,1]^d intersected with {sum x_i = k}; zero at k = 0 and k = d."""
    k = as_rational(k)
    if not 0 <= k <= d:
        raise ValueError(f"slice level must lie in [0, d={d}], got {k}")
    if k in (0, d) and d > 1:
        return Surd()
    m = k.numerator // k.denominator
    s = sum(((-1) ** i * binomial(d, i) * (k - i) ** (d - 1) for i in range(m + 1)), Fraction(0))
    return Surd.sqrt(d) * (s / math.factorial(d - 1))


def boundary_volume_rho_star(p: Params) -> Surd:
    """Cube-facet part plus simplex-slice part of the boundary of rho*(d, k)."""
    d, k, m = p.d, p.k, p.floor_k
    cube_part = sum(((-1) ** i * (k - 1 - i) ** (d - 1)
                     / (math.factorial(i) * math.factorial(d - i - 1)) for i in range(m)),
                    Fraction(0))
    slice_part = sum(((-1) ** i * (k - i) ** (d - 1) / (math.factorial(i) * math.factorial(d - i))
                      for i in range(m + 1)), Fraction(0))
    return (Surd.rational(cube_part) + Surd.sqrt(d) * slice_part) * (2**d * d)


def mahler_volume(p: Params) -> Fraction:
    return volume_rho(p) * volume_rho_star(p)


def mahler_bound(d: int) -> Fraction:
    """Volume product of the cube and the cross-polytope."""
    return Fraction(4**d, math.factorial(d))


@dataclass(frozen=True)
class MahlerRow:
    d: int
    k: int
    value: Fraction
    bound: Fraction

    @property
    def ratio(self) -> Fraction:
        return self.value / self.bound

    @property
    def satisfied(self) -> bool:
        return self.value >= self.bound

    @property
    def equality(self) -> bool:
        return self.value == self.bound


@dataclass
class MahlerReport:
    d_max: int
    rows: list = field(default_factory=list)

    @property
    def violations(self) -> list[MahlerRow]:
        return [r for r in self.rows if not r.satisfied]

    @property
    def equality_cases(self) -> list[tuple[int, int]]:
        return [(r.d, r.k) for r in self.rows if r.equality]

    def minimizers(self) -> dict[int, list[int]]:
        """For each d, the k values attaining the smallest Mahler volume."""
        best: dict[int, list] = {}
        for r in self.rows:
            cur = best.get(r.d)
            if cur is None or r.value < cur[0]:
                best[r.d] = [r.value, [r.k]]
            elif r.value == cur[0]:
                cur[1].append(r.k)
        return {d: ks for d, (_, ks) in best.items()}


def _mahler_rows_for(d: int) -> list[MahlerRow]:
    bound = mahler_bound(d)
    return [MahlerRow(d, k, mahler_volume(Params(d, k)), bound) for k in range(1, d + 1)]


def mahler_sweep(d_max: int, workers: int = 1) -> MahlerReport:
    """Exact Mahler volumes for every integer 1 <= k <= d <= d_max."""
    if d_max < 1:
        raise ValueError("d_max must be at least 1")
    dims = range(1, d_max + 1)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(_mahler_rows_for, dims))
    else:
        chunks = [_mahler_rows_for(d) for d in dims]
    return MahlerReport(d_max, [row for chunk in chunks for row in chunk])
