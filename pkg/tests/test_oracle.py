import math
from fractions import Fraction

import numpy as np
import pytest

from polyball.combinatorics import DUAL, PolytopeRep, polytope_rep, rho_vertices
from polyball.exact import Params, Surd
from polyball.norms import dual_norm, knorm, member_rho, member_rho_star
from polyball.oracle import (
    Body, boundary_by_triangulation, cube_body, cube_section_polytope, facet_triangulation_measure,
    gauge_bisection, halfspace_unit_cube_body, monte_carlo_volume, rho_body, rho_star_body,
    section_measure_by_triangulation, simplex_measure, support_max, volume_by_triangulation,
)
from polyball.volume import (
    boundary_volume_rho, boundary_volume_rho_star, cube_section_volume, halfspace_cube_volume,
    volume_rho, volume_rho_star,
)


def test_simplex_measure():
    assert simplex_measure([(0, 0)]) == 1
    assert simplex_measure([(0, 0), (3, 4)]) == 5
    assert simplex_measure([(0, 0, 0), (1, 0, 0), (0, 1, 0)]) == Fraction(1, 2)
    assert simplex_measure([(1, 0, 0), (0, 1, 0), (0, 0, 1)]) == Surd.sqrt(3) / 2
    assert simplex_measure([(0, 0), (1, 1), (2, 2)]) == 0


def test_facet_measure_brute_force():
    rhombus = [(1, 0, 0), (0, 1, 0), (Fraction(1, 2), Fraction(1, 2), Fraction(1, 2)),
               (Fraction(1, 2), Fraction(1, 2), Fraction(-1, 2))]
    assert facet_triangulation_measure(rhombus) == Surd({2: Fraction(1, 2)})
    square = [(1, 0, 0), (1, 1, 0), (1, 0, 1), (1, 1, 1)]
    assert facet_triangulation_measure(square) == 1
    with pytest.raises(ValueError):
        facet_triangulation_measure([(0, 0, 0), (1, 0, 0), (2, 0, 0)])


@pytest.mark.parametrize("dk", [(2, 1), (2, 2), (3, "3/2"), (3, 2), (3, "5/2"), (4, "3/2"), (4, 3)])
def test_triangulated_volumes(dk):
    p = Params(*dk)
    assert volume_by_triangulation(polytope_rep(p)) == volume_rho(p)
    assert volume_by_triangulation(polytope_rep(p, DUAL)) == volume_rho_star(p)


@pytest.mark.parametrize("dk", [(2, 2), (3, 1), (3, 2), (3, 3), (4, 2), (4, 3), (4, 4)])
def test_triangulated_boundary_is_d_times_printed(dk):
    p = Params(*dk)
    val = boundary_volume_rho(p)
    first = boundary_by_triangulation(polytope_rep(p))
    last = boundary_by_triangulation(polytope_rep(p), apex_choice="last")
    assert first.total == last.total == val.corrected == val.as_printed * p.d


@pytest.mark.parametrize("dk", [(2, "3/2"), (3, 2), (3, "3/2"), (3, "5/2"), (4, 2), (4, "7/2")])
def test_triangulated_dual_boundary(dk):
    p = Params(*dk)
    assert boundary_by_triangulation(polytope_rep(p, DUAL)).total == boundary_volume_rho_star(p)


def test_dual_boundary_pieces_at_three_two():
    tri = boundary_by_triangulation(polytope_rep(Params(3, 2), DUAL))
    measures = sorted((m for _, m in tri.facet_measures), key=float)
    assert measures[:8] == [Surd.sqrt(3) / 2] * 8 and measures[8:] == [Surd.rational(2)] * 6


@pytest.mark.parametrize("a, c", [([1, 1], 0), ([1, 1, 1], 0), ([1, 2, 3], 1), ([2, -1, 1, 1], 1),
                                  ([1, 1], 2), ([1, 1, 1], 3)])
def test_section_triangulation(a, c):
    assert section_measure_by_triangulation(a, c) == cube_section_volume(a, c)


def test_section_polytope_hexagon():
    pts = cube_section_polytope([1, 1, 1], 0)
    assert len(pts) == 6 and all(sum(p) == 0 for p in pts)


def test_gauge_bisection_recovers_norms():
    p = Params(4, "5/2")
    x = [0.3, -1.2, 0.7, 2.0]
    assert abs(gauge_bisection(lambda y: member_rho(y, p), x) - knorm(x, p)) <= 1e-9
    assert abs(gauge_bisection(lambda y: member_rho_star(y, p), x) - dual_norm(x, p)) <= 1e-9
    with pytest.raises(ValueError):
        gauge_bisection(lambda y: True, [0, 0])


def test_support_function_is_dual_norm():
    p = Params(3, "3/2")
    x = (Fraction(1), Fraction(-2), Fraction(1, 3))
    assert support_max(x, rho_vertices(p)) == dual_norm(x, p)


def test_monte_carlo_cube_and_validation():
    est, err = monte_carlo_volume(cube_body(3), 3, 1, 10**4, 0)
    assert est == 8 and err == 0
    with pytest.raises(ValueError):
        monte_carlo_volume(cube_body(3), 3, 1, 10**3, 0)
    with pytest.raises(ValueError):
        monte_carlo_volume(cube_body(2), 3, 1, 10**4, 0)


def test_monte_carlo_is_deterministic_and_workers_reproducible():
    body = rho_body(Params(3, 2))
    assert monte_carlo_volume(body, 3, 1, 10**5, 3) == monte_carlo_volume(body, 3, 1, 10**5, 3)
    r4 = monte_carlo_volume(body, 3, 1, 10**5, 3, workers=4)
    assert r4 == monte_carlo_volume(body, 3, 1, 10**5, 3, workers=4)


def test_callable_and_kernel_bodies_agree():
    body = rho_star_body(Params(3, 2))
    fast = monte_carlo_volume(body, 3, 1, 10**5, 5)
    slow = monte_carlo_volume(lambda pts: body(pts), 3, 1, 10**5, 5)
    assert fast == slow


def test_monte_carlo_rho_two_within_four_sigma():
    est, err = monte_carlo_volume(rho_body(Params(3, 2)), 3, 1, 10**6, 1)
    assert abs(est - 2) <= 4 * err


def test_halfspace_body():
    a, c = [1, -2, 3], Fraction(1, 2)
    body = halfspace_unit_cube_body(a, c)
    est, err = monte_carlo_volume(body, 3, Fraction(1, 2), 10**6, 2)
    assert abs(est - float(halfspace_cube_volume(a, c))) <= 4 * err
    assert body(np.array([[-0.5, -0.5, -0.5]]))[0]


def test_body_membership_matches_exact_membership():
    p = Params(3, "5/2")
    pts = np.array([[0.5, 0.5, 0.0], [0.4, 0.4, 0.4], [0.9, 0.2, 0.0], [1.0, 0.5, 0.3]])
    expected = [bool(member_rho(list(map(Fraction, map(str, row))), p)) for row in pts]
    assert rho_body(p)(pts).tolist() == expected


def test_degenerate_rep_guard():
    rep = PolytopeRep(tuple(rho_vertices(Params(7, 1))), ())
    with pytest.raises(ValueError):
        volume_by_triangulation(rep)
