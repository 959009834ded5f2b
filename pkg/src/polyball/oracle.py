"""Independent checks: Monte Carlo volumes, exact simplex triangulations, gauge bisection.

Nothing here uses the closed-form volume or face-count formulas; the only
inputs are membership predicates and exact vertex/inequality descriptions.
"""
from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, NamedTuple, Sequence

import numpy as np

from . import _kernels
from ._linalg import affine_rank, det, nullspace, rank
from .combinatorics import PolytopeRep
from .exact import Params, Surd, as_rational
from .face_lattice import facet_defining_rep, lattice_for

__all__ = [
    "Body",
    "MonteCarloResult",
    "boundary_by_triangulation",
    "cube_body",
    "cube_section_polytope",
    "facet_triangulation_measure",
    "gauge_bisection",
    "halfspace_unit_cube_body",
    "monte_carlo_volume",
    "rho_body",
    "rho_star_body",
    "section_measure_by_triangulation",
    "simplex_measure",
    "support_max",
    "volume_by_triangulation",
]

MIN_SAMPLES = 10_000
MAX_TRIANGULATION_DIM = 6


# ------------------------------------------------------------------ Monte Carlo


@dataclass(frozen=True)
class Body:
    """Membership test the kernels can run without calling back into Python."""

    kind: int
    d: int
    k: float = 0.0
    a: tuple = ()
    c: float = 0.0

    def __call__(self, points) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(points, dtype=np.float64))
        a = np.asarray(self.a, dtype=np.float64) if self.a else None
        return _kernels._member_numpy(pts, self.kind, self.k, a, self.c)


def cube_body(d: int) -> Body:
    return Body(_kernels.CUBE, d)


def rho_body(p: Params) -> Body:
    return Body(_kernels.RHO, p.d, float(p.k))


def rho_star_body(p: Params) -> Body:
    return Body(_kernels.RHO_STAR, p.d, float(p.k))


def halfspace_unit_cube_body(a, c) -> Body:
    """[0,1]^d cut by a.x <= c, shifted to [-1/2, 1/2]^d: sample with box_halfwidth 1/2."""
    return Body(_kernels.HALFSPACE_UNIT_CUBE, len(a), 0.0, tuple(float(v) for v in a), float(c))


class MonteCarloResult(NamedTuple):
    estimate: float
    stderr: float


def _split(total: int, parts: int) -> list[int]:
    base, extra = divmod(total, parts)
    return [base + (1 if i < extra else 0) for i in range(parts)]


def monte_carlo_volume(member, d: int, box_halfwidth, samples: int, seed: int,
                       workers: int = 1, backend: str | None = None) -> MonteCarloResult:
    """Hit-or-miss volume estimate over the box [-w, w]^d.

    ``member`` is a :class:`Body` (runs inside the compiled kernel) or any
    callable mapping an (n, d) float array to a boolean array. Worker ``i``
    draws from stream ``seed + i``; results depend only on seed, samples and
    workers.
    """
    if samples < MIN_SAMPLES:
        raise ValueError(f"need at least {MIN_SAMPLES} samples, got {samples}")
    if workers < 1:
        raise ValueError("workers must be positive")
    w = float(as_rational(box_halfwidth))
    counts = _split(samples, workers)

    def run(i: int) -> int:
        if isinstance(member, Body):
            if member.d != d:
                raise ValueError(f"body dimension {member.d} != {d}")
            a = np.asarray(member.a, dtype=np.float64) if member.a else None
            return _kernels.count_hits(member.kind, member.k, a, member.c, d, w,
                                       counts[i], seed + i, backend=backend)
        return _kernels.count_hits_callable(member, d, w, counts[i], seed + i)

    if workers == 1:
        hits = [run(0)]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            hits = list(pool.map(run, range(workers)))
    box = (2.0 * w) ** d
    frac = sum(hits) / samples
    return MonteCarloResult(frac * box, math.sqrt(frac * (1.0 - frac) / samples) * box)


# ------------------------------------------------------------------ gauges


def gauge_bisection(member: Callable[[Sequence[float]], object], x: Sequence[float],
                    tol: float = 1e-9) -> float:
    """inf{t > 0 : x / t in body}, by doubling to a bracket and then bisecting."""
    x = [float(v) for v in x]
    if all(v == 0.0 for v in x):
        raise ValueError("the gauge bisection needs a nonzero vector")

    def inside(t):
        return bool(member([v / t for v in x]))

    hi = 1.0
    while not inside(hi):
        hi *= 2.0
    lo = hi / 2.0
    while inside(lo):
        hi, lo = lo, lo / 2.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if inside(mid):
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def support_max(x: Sequence, vertices) -> object:
    """max over vertices v of <x, v>; the support function of their convex hull."""
    return max(sum((a * b for a, b in zip(x, v)), 0 * x[0]) for v in vertices)


# ------------------------------------------------------------------ simplices


def simplex_measure(vertices) -> Surd:
    """m-volume of the simplex on m+1 points in R^d: sqrt(det Gram) / m!."""
    pts = [tuple(as_rational(c) for c in v) for v in vertices]
    m = len(pts) - 1
    if m < 0:
        raise ValueError("need at least one point")
    if m == 0:
        return Surd.rational(1)
    base = pts[0]
    edges = [[a - b for a, b in zip(p, base)] for p in pts[1:]]
    gram = [[sum((a * b for a, b in zip(u, v)), Fraction(0)) for v in edges] for u in edges]
    g = det(gram)
    if g <= 0:
        return Surd()
    return Surd.sqrt(g) / math.factorial(m)


def _fan(face: frozenset, dim: int, ridges_of, memo: dict, apex=None) -> list[tuple]:
    """Pulling triangulation of a face: cone from ``apex`` over its facets not containing it."""
    if dim == 0:
        return [tuple(face)]
    key = (face, apex)
    if key in memo:
        return memo[key]
    a = min(face) if apex is None else apex
    out = []
    for ridge in ridges_of(face, dim):
        if a in ridge:
            continue
        for simplex in _fan(ridge, dim - 1, ridges_of, memo):
            out.append((a,) + simplex)
    memo[key] = out
    return out


def _ridges_from_faces(faces):
    by_dim: dict[int, list[frozenset]] = {}
    for vs, dim in faces:
        by_dim.setdefault(dim, []).append(frozenset(vs))

    def ridges_of(face, dim):
        return [g for g in by_dim.get(dim - 1, ()) if g <= face]

    return ridges_of


def _projection_coords(points, idx) -> list[int]:
    """Coordinates on which the affine hull of ``points[idx]`` projects injectively."""
    base = points[idx[0]]
    diffs = [[a - b for a, b in zip(points[i], base)] for i in idx[1:]]
    r = rank(diffs)
    chosen: list[int] = []
    for c in range(len(base)):
        trial = chosen + [c]
        if rank([[row[t] for t in trial] for row in diffs]) == len(trial):
            chosen = trial
            if len(chosen) == r:
                break
    return chosen


def _brute_force_faces(points) -> list[tuple[frozenset, int]]:
    """All faces of conv(points), points in convex position, by supporting-hyperplane search."""
    found: dict[frozenset, int] = {}

    def visit(idx: tuple, dim: int):
        key = frozenset(idx)
        if key in found:
            return
        found[key] = dim
        if dim == 0:
            return
        if dim == 1:
            for i in idx:
                visit((i,), 0)
            return
        coords = _projection_coords(points, idx)
        proj = {i: [points[i][c] for c in coords] for i in idx}
        facets: list[frozenset] = []
        for combo in itertools.combinations(idx, dim):
            if any(set(combo) <= f for f in facets):
                continue
            base = proj[combo[0]]
            diffs = [[a - b for a, b in zip(proj[i], base)] for i in combo[1:]]
            ns = nullspace(diffs, dim)
            if len(ns) != 1:
                continue
            n = ns[0]
            vals = {i: sum((a * b for a, b in zip(n, proj[i])), Fraction(0)) for i in idx}
            level = vals[combo[0]]
            if all(v <= level for v in vals.values()) or all(v >= level for v in vals.values()):
                facets.append(frozenset(i for i in idx if vals[i] == level))
        for f in facets:
            visit(tuple(sorted(f)), dim - 1)

    visit(tuple(range(len(points))), affine_rank(points))
    return list(found.items())


def facet_triangulation_measure(facet_vertices, faces=None, apex: int = 0) -> Surd:
    """Exact (d-1)-measure of a convex facet in R^d by fan triangulation.

    ``faces`` optionally gives the facet's own face lattice as
    (vertex-index set, dim) pairs, indices into ``facet_vertices``; without it
    the faces are found by a brute-force supporting-hyperplane search.
    """
    pts = [tuple(as_rational(c) for c in v) for v in facet_vertices]
    ambient = len(pts[0])
    top = affine_rank(pts)
    if top != ambient - 1:
        raise ValueError(f"facet spans dimension {top}, expected {ambient - 1}")
    if faces is None:
        faces = _brute_force_faces(pts)
    ridges_of = _ridges_from_faces(faces)
    simplices = _fan(frozenset(range(len(pts))), top, ridges_of, {}, apex=apex)
    total = Surd()
    for s in simplices:
        total = total + simplex_measure([pts[i] for i in s])
    return total


# ------------------------------------------------------------ whole polytopes


def _lattice_faces(lattice):
    return [(frozenset(f.vertex_set), f.dim) for f in lattice.faces]


def volume_by_triangulation(rep: PolytopeRep) -> Fraction:
    """Exact d-volume by pulling triangulation over the oracle face lattice."""
    if rep.dim > MAX_TRIANGULATION_DIM:
        raise ValueError(f"triangulation guarded to d <= {MAX_TRIANGULATION_DIM}")
    lattice = lattice_for(rep)
    ridges_of = _ridges_from_faces(_lattice_faces(lattice))
    full = frozenset(range(len(rep.vertices)))
    total = Fraction(0)
    for s in _fan(full, rep.dim, ridges_of, {}):
        base = rep.vertices[s[0]]
        rows = [[a - b for a, b in zip(rep.vertices[i], base)] for i in s[1:]]
        total += abs(det(rows))
    return total / math.factorial(rep.dim)


@dataclass(frozen=True)
class BoundaryTriangulation:
    total: Surd
    facet_measures: tuple  # (vertex-index tuple, Surd) per facet


def boundary_by_triangulation(rep: PolytopeRep, apex_choice: str = "first") -> BoundaryTriangulation:
    """Sum of exact facet measures, each facet triangulated over its own sub-lattice.

    ``apex_choice`` picks the fan apex inside each facet: ``"first"`` or ``"last"`` vertex.
    """
    if rep.dim > MAX_TRIANGULATION_DIM:
        raise ValueError(f"triangulation guarded to d <= {MAX_TRIANGULATION_DIM}")
    lattice = lattice_for(rep)
    all_faces = _lattice_faces(lattice)
    out = []
    total = Surd()
    for facet in lattice.facets:
        members = set(facet.vertex_set)
        local = {g: i for i, g in enumerate(facet.vertex_set)}
        sub = [(frozenset(local[v] for v in vs), dim) for vs, dim in all_faces if vs <= members]
        apex = 0 if apex_choice == "first" else len(facet.vertex_set) - 1
        m = facet_triangulation_measure([rep.vertices[i] for i in facet.vertex_set], sub, apex)
        out.append((facet.vertex_set, m))
        total = total + m
    return BoundaryTriangulation(total, tuple(out))


# ------------------------------------------------------------ cube sections


def cube_section_polytope(a, c) -> list[tuple]:
    """Vertices of [-1,1]^d intersected with {a.x = c}: hyperplane hits on cube edges."""
    a = [as_rational(v) for v in a]
    c = as_rational(c)
    d = len(a)
    pts = set()
    for j in range(d):
        others = [i for i in range(d) if i != j]
        for signs in itertools.product((1, -1), repeat=d - 1):
            rest = sum((a[i] * s for i, s in zip(others, signs)), Fraction(0))
            xj = (c - rest) / a[j]
            if -1 <= xj <= 1:
                v = [Fraction(0)] * d
                for i, s in zip(others, signs):
                    v[i] = Fraction(s)
                v[j] = xj
                pts.add(tuple(v))
    return sorted(pts)


def section_measure_by_triangulation(a, c) -> Surd:
    """(d-1)-measure of a cube section, from its vertices and an exact triangulation.

    The section is parametrized by its first d-1 coordinates, where the cube
    walls give its inequalities; the face lattice found there drives a fan
    triangulation of the original points in R^d.
    """
    a = [as_rational(v) for v in a]
    c = as_rational(c)
    d = len(a)
    if any(v == 0 for v in a):
        raise ValueError("every coordinate of the normal must be nonzero")
    pts = cube_section_polytope(a, c)
    if len(pts) < d or affine_rank(pts) < d - 1:
        return Surd()
    if d == 2:
        return simplex_measure(pts)
    proj = [p[:-1] for p in pts]
    ineqs = []
    for i in range(d - 1):
        for s in (1, -1):
            normal = [Fraction(0)] * (d - 1)
            normal[i] = Fraction(s)
            ineqs.append((tuple(normal), Fraction(1)))
    # x_d = (c - sum a_i x_i) / a_d must stay in [-1, 1]
    for s in (1, -1):
        normal = tuple(-s * ai / a[-1] for ai in a[:-1])
        ineqs.append((normal, 1 - s * c / a[-1]))
    rep = facet_defining_rep(proj, ineqs)
    lattice = lattice_for(rep)
    faces = _lattice_faces(lattice)
    return facet_triangulation_measure(pts, faces)
