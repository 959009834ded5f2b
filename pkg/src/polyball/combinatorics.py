"""Face counts and explicit vertex/facet descriptions of rho(d, k) and its polar.

Vertices of rho(d, k) are the 2d points +-e_i together with the 2^d points
(+-1/k, ..., +-1/k); at k = 1 only the latter are vertices and at k = d only
the former. The polar rho*(d, k) is (k * cross-polytope) intersected with
[-1, 1]^d.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .exact import Params, binomial

__all__ = [
    "DUAL",
    "FVector",
    "PRIMAL",
    "PolytopeRep",
    "f_star",
    "f_vector",
    "facet_count",
    "facet_vertex_sets",
    "hrep_rho",
    "polytope_rep",
    "rho_star_vertices",
    "rho_vertices",
    "total_faces_and_kalai",
    "vertex_count",
]

PRIMAL = "primal"
DUAL = "dual"


def _check_family(family: str) -> None:
    if family not in (PRIMAL, DUAL):
        raise ValueError(f"family must be 'primal' or 'dual', got {family!r}")


class FVector(tuple):
    """Face counts (f_0, ..., f_{d-1})."""

    @property
    def dim(self) -> int:
        return len(self)

    def euler_sum(self) -> int:
        return sum((-1) ** i * f for i, f in enumerate(self))

    def satisfies_euler(self) -> bool:
        return self.euler_sum() == 1 - (-1) ** len(self)

    def reversed(self) -> "FVector":
        return FVector(self[::-1])

    def total_faces(self) -> int:
        """Nonempty faces, the polytope itself included."""
        return 1 + sum(self)

    def __repr__(self):
        return f"FVector{tuple(self)!r}"


@dataclass(frozen=True)
class PolytopeRep:
    """Vertices plus facet inequalities ``normal . x <= rhs``, all exact."""

    vertices: tuple
    inequalities: tuple  # of (normal tuple, rhs)

    @property
    def dim(self) -> int:
        return len(self.vertices[0])


def vertex_count(p: Params, family: str = PRIMAL) -> int:
    _check_family(family)
    d, k = p.d, p.k
    if family == DUAL:
        if not p.k_is_integer:
            raise NotImplementedError("dual vertex count is only available for integer k")
        return 2**p.floor_k * binomial(d, p.floor_k)
    if k == 1:
        return 2**d
    if k == d:
        return 2 * d
    return 2**d + 2 * d


def facet_count(p: Params) -> int:
    """Facets of rho(d, k); by polarity also the vertex count of rho*(d, k)."""
    d, m = p.d, p.floor_k
    if p.k_is_integer:
        return 2**m * binomial(d, m)
    return 2 ** (m + 1) * binomial(d, m + 1) * (m + 1)


def f_star(d: int, k: int, i: int) -> int:
    """Number of i-faces of rho(d, k) lying neither on the cube k^-1*[-1,1]^d nor on the cross-polytope."""
    if not 1 < k < d:
        raise ValueError(f"f_star needs an integer 1 < k < d, got k={k}, d={d}")
    if not 1 <= i <= d - 2:
        raise ValueError(f"f_star needs 1 <= i <= d-2, got i={i}")
    lo, hi = max(0, i - k + 1), min(i - 1, d - k - 1)
    total = 0
    for j in range(lo, hi + 1):
        num = binomial(d, k) * 2 ** (d - j) * binomial(d - k, j) * binomial(k, i - j)
        den = binomial(d - i, d - k - j)
        q, r = divmod(num, den)
        if r:
            raise ArithmeticError(f"non-integral face count at d={d}, k={k}, i={i}, j={j}")
        total += q
    return total


def _cube_fvector(d: int) -> FVector:
    return FVector(2 ** (d - i) * binomial(d, i) for i in range(d))


def _cross_fvector(d: int) -> FVector:
    return FVector(2 ** (i + 1) * binomial(d, i + 1) for i in range(d))


def f_vector(p: Params, family: str = PRIMAL) -> FVector:
    _check_family(family)
    if not p.k_is_integer:
        raise NotImplementedError(
            "closed-form f-vector needs integer k; only facet_count is available otherwise")
    d, k = p.d, p.floor_k
    if k == 1:
        fv = _cube_fvector(d)
    elif k == d:
        fv = _cross_fvector(d)
    else:
        counts = []
        for i in range(d):
            if i == d - 1:
                counts.append(facet_count(p))
                continue
            f = f_star(d, k, i) if i >= 1 else 0
            if i < d - k:
                f += 2 ** (d - i) * binomial(d, i)
            if i < k - 1:
                f += 2 ** (i + 1) * binomial(d, i + 1)
            counts.append(f)
        fv = FVector(counts)
    return fv.reversed() if family == DUAL else fv


def total_faces_and_kalai(p: Params) -> tuple[int, bool]:
    total = f_vector(p).total_faces()
    return total, total >= 3**p.d


# ------------------------------------------------------------ explicit geometry


def _unit(d: int, i: int, sign: int) -> tuple:
    return tuple(Fraction(sign) if t == i else Fraction(0) for t in range(d))


def _cross_points(d: int) -> list[tuple]:
    return [_unit(d, i, s) for i in range(d) for s in (1, -1)]


def _cube_points(d: int, k: Fraction) -> list[tuple]:
    step = 1 / Fraction(k)
    return [tuple(s * step for s in signs) for signs in itertools.product((1, -1), repeat=d)]


def rho_vertices(p: Params) -> list[tuple]:
    """Vertex list of rho(d, k): cross-polytope points first, then cube points."""
    if p.d == 1:
        return _cube_points(1, Fraction(1))
    pts = []
    if p.k != 1:
        pts += _cross_points(p.d)
    if p.k != p.d:
        pts += _cube_points(p.d, p.k)
    return pts


def rho_star_vertices(p: Params) -> list[tuple]:
    """Vertices of rho*(d, k).

    floor(k) coordinates equal to +-1, one more equal to +-frac(k) when k is not
    an integer, the rest zero. This is the polar of the facet description of
    rho(d, k); for integer k it is the set of {0, +-1} points with k nonzeros.
    """
    d, m, frac = p.d, p.floor_k, p.frac_k
    pts = []
    for support in itertools.combinations(range(d), m):
        rest = [t for t in range(d) if t not in support]
        extras = [None] if frac == 0 else rest
        for extra in extras:
            idx = list(support) + ([] if extra is None else [extra])
            for signs in itertools.product((1, -1), repeat=len(idx)):
                v = [Fraction(0)] * d
                for t, s in zip(idx, signs):
                    v[t] = Fraction(s) if t != extra else s * frac
                pts.append(tuple(v))
    return pts


def _polar_inequalities(points) -> tuple:
    return tuple((tuple(v), Fraction(1)) for v in points)


def hrep_rho(p: Params) -> PolytopeRep:
    """Vertices plus the inequalities sum_{i in S} e_i x_i <= 1, |S| = k, e in {+-1}^S."""
    if not p.k_is_integer:
        raise NotImplementedError("explicit inequality description needs integer k")
    d, k = p.d, p.floor_k
    ineqs = []
    for subset in itertools.combinations(range(d), k):
        for signs in itertools.product((1, -1), repeat=k):
            normal = [Fraction(0)] * d
            for t, s in zip(subset, signs):
                normal[t] = Fraction(s)
            ineqs.append((tuple(normal), Fraction(1)))
    return PolytopeRep(tuple(rho_vertices(p)), tuple(ineqs))


def polytope_rep(p: Params, family: str = PRIMAL) -> PolytopeRep:
    """V- and H-description for any rational k, each side built from the other's polar vertices."""
    _check_family(family)
    if family == PRIMAL:
        return PolytopeRep(tuple(rho_vertices(p)), _polar_inequalities(rho_star_vertices(p)))
    return PolytopeRep(tuple(rho_star_vertices(p)), _polar_inequalities(rho_vertices(p)))


def facet_vertex_sets(p: Params) -> list[frozenset]:
    """Facets of rho(d, k) as sets of indices into :func:`rho_vertices`.

    Integer k: one facet per (d-k)-face of the cube, spanned by that face and
    the k pulled points +-e_j of the cube facets containing it. Otherwise one
    facet per (d-floor(k)-1)-face and per choice of floor(k) of its
    floor(k)+1 pulled points.
    """
    d, m = p.d, p.floor_k
    verts = rho_vertices(p)
    index = {v: i for i, v in enumerate(verts)}
    cube = _cube_points(d, p.k)
    fixed = m if p.k_is_integer else m + 1
    facets = []
    for coords in itertools.combinations(range(d), fixed):
        for signs in itertools.product((1, -1), repeat=fixed):
            face = [v for v in cube if all((v[t] > 0) == (s > 0) for t, s in zip(coords, signs))]
            pulled = [_unit(d, t, s) for t, s in zip(coords, signs)]
            choices = [pulled] if p.k_is_integer else itertools.combinations(pulled, m)
            for chosen in choices:
                members = {index[v] for v in list(face) + list(chosen) if v in index}
                facets.append(frozenset(members))
    return facets
