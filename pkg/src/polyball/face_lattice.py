"""Brute-force face lattice from an exact vertex/facet description.

Faces are the Galois-closed vertex sets of the vertex-facet incidence
relation, i.e. all nonempty intersections of facet vertex sets. They are found
by closing the set of facets under intersection with facets until nothing new
appears. Vertex sets are stored as int bitmasks.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from ._linalg import affine_rank, dot
from .combinatorics import FVector, PolytopeRep

__all__ = [
    "FaceLattice",
    "FaceLatticeTooLarge",
    "FaceRecord",
    "IncidenceMatrix",
    "InconsistentRepError",
    "build_incidence",
    "enumerate_faces",
    "facet_defining_rep",
    "lattice_for",
]

DEFAULT_MAX_DIM = 6


class InconsistentRepError(ValueError):
    """Vertex and inequality lists do not describe the same polytope."""


class FaceLatticeTooLarge(RuntimeError):
    """Raised instead of enumerating faces above the dimension guard."""


def _bits(mask: int) -> list[int]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


@dataclass(frozen=True)
class IncidenceMatrix:
    n_vertices: int
    n_facets: int
    facet_masks: tuple  # facet j -> bitmask of incident vertices
    vertex_masks: tuple  # vertex i -> bitmask of incident facets

    def __getitem__(self, key) -> bool:
        v, f = key
        return bool(self.facet_masks[f] >> v & 1)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.n_vertices, self.n_facets)

    def to_array(self) -> np.ndarray:
        out = np.zeros(self.shape, dtype=bool)
        for f, mask in enumerate(self.facet_masks):
            out[_bits(mask), f] = True
        return out


def build_incidence(rep: PolytopeRep, check_facets: bool = True) -> IncidenceMatrix:
    """Exact tightness table. With ``check_facets`` every inequality must be facet-defining."""
    d = rep.dim
    nv, nf = len(rep.vertices), len(rep.inequalities)
    facet_masks = [0] * nf
    vertex_masks = [0] * nv
    for j, (normal, rhs) in enumerate(rep.inequalities):
        for i, v in enumerate(rep.vertices):
            val = dot(normal, v)
            if val > rhs:
                raise InconsistentRepError(f"vertex {i} violates inequality {j}: {val} > {rhs}")
            if val == rhs:
                facet_masks[j] |= 1 << i
                vertex_masks[i] |= 1 << j
    for i, mask in enumerate(vertex_masks):
        if bin(mask).count("1") < d:
            raise InconsistentRepError(f"vertex {i} lies on fewer than d={d} facets")
    for j, mask in enumerate(facet_masks):
        if bin(mask).count("1") < d:
            raise InconsistentRepError(f"inequality {j} is tight at fewer than d={d} vertices")
        if check_facets and affine_rank(rep.vertices[i] for i in _bits(mask)) != d - 1:
            raise InconsistentRepError(f"inequality {j} does not define a facet")
    if check_facets and len(set(facet_masks)) != nf:
        raise InconsistentRepError("two inequalities define the same facet")
    return IncidenceMatrix(nv, nf, tuple(facet_masks), tuple(vertex_masks))


@dataclass(frozen=True)
class FaceRecord:
    vertex_set: tuple
    facet_set: frozenset
    dim: int


@dataclass
class FaceLattice:
    d: int
    faces: list = field(default_factory=list)  # proper faces plus the polytope itself

    def faces_of_dim(self, i: int) -> list[FaceRecord]:
        return [f for f in self.faces if f.dim == i]

    @property
    def f_vector(self) -> FVector:
        counts = [0] * self.d
        for f in self.faces:
            if 0 <= f.dim < self.d:
                counts[f.dim] += 1
        return FVector(counts)

    @property
    def facets(self) -> list[FaceRecord]:
        return self.faces_of_dim(self.d - 1)

    def subfaces(self, face: FaceRecord) -> list[FaceRecord]:
        """Faces contained in ``face`` (itself included)."""
        s = set(face.vertex_set)
        return [f for f in self.faces if set(f.vertex_set) <= s]

    def to_json(self) -> str:
        by_dim: dict[str, list] = {}
        for f in self.faces:
            if f.dim < self.d:
                by_dim.setdefault(str(f.dim), []).append(list(f.vertex_set))
        return json.dumps({"d": self.d, "f_vector": list(self.f_vector), "faces": by_dim},
                          sort_keys=True)


def enumerate_faces(m: IncidenceMatrix, rep: PolytopeRep,
                    max_dim: int = DEFAULT_MAX_DIM) -> FaceLattice:
    d = rep.dim
    if d > max_dim:
        raise FaceLatticeTooLarge(
            f"refusing to enumerate faces in dimension {d} > {max_dim}: "
            f"{m.n_vertices} vertices, {m.n_facets} facets, at least 3^{d} = {3**d} faces "
            f"and up to {m.n_vertices * m.n_facets} closure steps per level")
    facets = list(dict.fromkeys(m.facet_masks))
    seen = set(facets)
    frontier = list(facets)
    while frontier:
        fresh = []
        for face in frontier:
            for g in facets:
                inter = face & g
                if inter and inter not in seen:
                    seen.add(inter)
                    fresh.append(inter)
        frontier = fresh
    full = (1 << m.n_vertices) - 1
    records = []
    for mask in seen | {full}:
        verts = _bits(mask)
        on = frozenset(j for j, g in enumerate(m.facet_masks) if g & mask == mask)
        dim = affine_rank(rep.vertices[i] for i in verts)
        records.append(FaceRecord(tuple(verts), on, dim))
    records.sort(key=lambda r: (r.dim, r.vertex_set))
    return FaceLattice(d, records)


def lattice_for(rep: PolytopeRep, max_dim: int = DEFAULT_MAX_DIM) -> FaceLattice:
    return enumerate_faces(build_incidence(rep), rep, max_dim=max_dim)


def facet_defining_rep(vertices, inequalities) -> PolytopeRep:
    """Drop redundant and duplicate inequalities, keeping one per facet.

    ``vertices`` must be exactly the vertices of a full-dimensional polytope
    satisfying every inequality.
    """
    vertices = tuple(tuple(v) for v in vertices)
    d = len(vertices[0])
    kept = []
    seen = set()
    for normal, rhs in inequalities:
        tight = []
        for i, v in enumerate(vertices):
            val = dot(normal, v)
            if val > rhs:
                raise InconsistentRepError(f"vertex {i} violates an inequality")
            if val == rhs:
                tight.append(i)
        key = frozenset(tight)
        if key in seen or len(tight) < d:
            continue
        if affine_rank(vertices[i] for i in tight) == d - 1:
            seen.add(key)
            kept.append((tuple(normal), rhs))
    return PolytopeRep(vertices, tuple(kept))
