import math
from fractions import Fraction

import pytest

from polyball.combinatorics import (
    DUAL, PRIMAL, FVector, f_star, f_vector, facet_count, facet_vertex_sets, hrep_rho,
    polytope_rep, rho_star_vertices, rho_vertices, total_faces_and_kalai, vertex_count,
)
from polyball.exact import Params, binomial
from polyball.norms import dual_norm, knorm

# face-lattice oracle values, frozen
FROZEN = {
    (4, 2): (24, 96, 96, 24),
    (4, 3): (24, 88, 96, 32),
    (5, 2): (42, 240, 400, 240, 40),
    (5, 3): (42, 280, 640, 480, 80),
    (5, 4): (42, 200, 400, 320, 80),
    (6, 3): (76, 636, 2160, 2880, 1440, 160),
}


@pytest.mark.parametrize("dk, expected", FROZEN.items())
def test_frozen_f_vectors(dk, expected):
    p = Params(*dk)
    assert f_vector(p) == expected
    assert f_vector(p, DUAL) == expected[::-1]


@pytest.mark.parametrize("d", range(1, 9))
def test_extreme_k_gives_cube_and_cross(d):
    cube = tuple(2 ** (d - i) * binomial(d, i) for i in range(d))
    cross = tuple(2 ** (i + 1) * binomial(d, i + 1) for i in range(d))
    assert f_vector(Params(d, 1)) == cube
    assert f_vector(Params(d, d)) == cross


def test_small_examples():
    assert f_vector(Params(3, 1)) == (8, 12, 6)
    assert f_vector(Params(3, 2), DUAL) == (12, 24, 14)
    assert vertex_count(Params(3, 2)) == 14
    assert vertex_count(Params(4, 2), DUAL) == 24
    assert facet_count(Params(3, "3/2")) == 24
    assert facet_count(Params(4, "5/2")) == 96


@pytest.mark.parametrize("d", range(2, 13))
def test_euler_and_kalai(d):
    for k in range(1, d + 1):
        fv = f_vector(Params(d, k))
        assert fv.satisfies_euler()
        total, ok = total_faces_and_kalai(Params(d, k))
        assert ok and total == fv.total_faces() >= 3**d


def test_kalai_tight_only_for_cube_and_cross():
    for d in range(2, 10):
        tight = [k for k in range(1, d + 1) if total_faces_and_kalai(Params(d, k))[0] == 3**d]
        assert tight == [1, d]


def test_f_star_integrality_and_values():
    assert f_star(5, 3, 2) == 640 and f_star(6, 3, 3) == 2880
    for d in range(3, 16):
        for k in range(2, d):
            for i in range(1, d - 1):
                assert f_star(d, k, i) >= 0
    with pytest.raises(ValueError):
        f_star(4, 1, 1)
    with pytest.raises(ValueError):
        f_star(4, 2, 3)


def test_non_integer_k_limits():
    p = Params(4, "5/2")
    with pytest.raises(NotImplementedError):
        f_vector(p)
    with pytest.raises(NotImplementedError):
        vertex_count(p, DUAL)
    with pytest.raises(NotImplementedError):
        hrep_rho(p)
    with pytest.raises(ValueError):
        f_vector(Params(3, 2), "other")


def test_fvector_helpers():
    fv = FVector((8, 12, 6))
    assert fv.dim == 3 and fv.euler_sum() == 2 and fv.reversed() == (6, 12, 8)
    assert fv.total_faces() == 27


@pytest.mark.parametrize("dk", [(1, 1), (2, 1), (2, 2), (3, "3/2"), (4, 2), (4, "7/2"), (5, 5)])
def test_vertices_are_on_the_unit_spheres(dk):
    p = Params(*dk)
    prim, dual = rho_vertices(p), rho_star_vertices(p)
    assert len(set(prim)) == len(prim) and len(set(dual)) == len(dual)
    assert all(knorm(v, p) == 1 for v in prim)
    assert all(dual_norm(v, p) == 1 for v in dual)
    assert len(dual) == facet_count(p)
    if p.d > 1:
        assert len(prim) == vertex_count(p)


def test_rho_star_vertices_non_integer_shape():
    verts = rho_star_vertices(Params(3, "3/2"))
    assert (1, Fraction(1, 2), 0) in verts and (0, -1, Fraction(-1, 2)) in verts
    assert len(verts) == 24


@pytest.mark.parametrize("d", range(2, 6))
def test_hrep_matches_polar_rep_for_integer_k(d):
    for k in range(1, d + 1):
        p = Params(d, k)
        assert set(hrep_rho(p).inequalities) == set(polytope_rep(p).inequalities)


def test_polytope_rep_dims():
    rep = polytope_rep(Params(3, 2), DUAL)
    assert rep.dim == 3 and len(rep.vertices) == 12 and len(rep.inequalities) == 14
    assert polytope_rep(Params(3, 2), PRIMAL).inequalities[0][1] == 1


@pytest.mark.parametrize("dk", [(3, 2), (4, 2), (4, 3), (3, "3/2"), (4, "5/2"), (5, "7/2")])
def test_facet_vertex_sets_are_tight_sets(dk):
    p = Params(*dk)
    verts = rho_vertices(p)
    facets = facet_vertex_sets(p)
    assert len(facets) == len(set(facets)) == facet_count(p)
    for normal in rho_star_vertices(p):
        tight = frozenset(i for i, v in enumerate(verts) if sum(a * b for a, b in zip(normal, v)) == 1)
        assert tight in set(facets)


def test_facet_count_formula_values():
    for d in range(2, 10):
        for twice in range(3, 2 * d, 2):
            m = twice // 2
            assert facet_count(Params(d, Fraction(twice, 2))) == 2 ** (m + 1) * math.comb(d, m + 1) * (m + 1)
