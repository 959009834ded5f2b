"""Closed form versus oracle suites, shared by the CLI ``verify`` command and the tests."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction


from . import _kernels
from .combinatorics import (
    DUAL, PRIMAL, f_vector, facet_count, facet_vertex_sets, polytope_rep, rho_vertices,
    total_faces_and_kalai,
)
from .exact import Params, Surd, binomial, format_exact
from .face_lattice import lattice_for
from .norms import dual_norm, knorm, knorm_variational, member_rho, member_rho_star
from .oracle import (
    boundary_by_triangulation, gauge_bisection, monte_carlo_volume, rho_body, rho_star_body,
    support_max, volume_by_triangulation,
)
from .volume import (
    alternating_binomial_sum, boundary_volume_rho, boundary_volume_rho_star,
    eulerian_orthant_volume, halfspace_cube_volume, orthant_volume_rho_star, piece_volume,
    slice_volume_delta, telescoping_sum, volume_rho, volume_rho_star,
)

SUITES = ("fvector", "volume", "boundary", "norm")
ARBITRATION_CASES = ((2, 2), (3, 1), (3, 2), (3, 3), (4, 2), (4, 4))


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class Report:
    suite: str
    checks: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name: str, passed: bool, detail: str = "") -> bool:
        self.checks.append(Check(name, bool(passed), detail))
        return bool(passed)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def to_dict(self) -> dict:
        return {"suite": self.suite, "passed": self.passed,
                "checks": [asdict(c) for c in self.checks]}


def k_grid(d: int) -> list[Fraction]:
    """1, 3/2, 2, ..., d."""
    return [Fraction(j, 2) for j in range(2, 2 * d + 1)]


# ------------------------------------------------------------------ f-vectors


def fvector_suite(dmax: int = 6, dual_dmax: int | None = None, kalai_dmax: int = 12) -> Report:
    rep = Report("fvector")
    dmax = min(dmax, 6)
    dual_dmax = dmax if dual_dmax is None else min(dual_dmax, dmax)
    for d in range(1, dmax + 1):
        for k in range(1, d + 1):
            p = Params(d, k)
            closed = f_vector(p)
            oracle = lattice_for(polytope_rep(p)).f_vector
            rep.add(f"f_vector{p}", closed == oracle,
                    f"closed {tuple(closed)} oracle {tuple(oracle)}")
            rep.add(f"euler{p}", closed.satisfies_euler(), f"alternating sum {closed.euler_sum()}")
            if d <= dual_dmax:
                dual_oracle = lattice_for(polytope_rep(p, DUAL)).f_vector
                rep.add(f"dual_reversal{p}",
                        dual_oracle == closed.reversed() == f_vector(p, DUAL),
                        f"dual oracle {tuple(dual_oracle)}")
    for d in range(2, min(dmax, 5) + 1):
        for k in k_grid(d):
            if k.denominator == 1:
                continue
            p = Params(d, k)
            lattice = lattice_for(polytope_rep(p))
            oracle_facets = {frozenset(f.vertex_set) for f in lattice.facets}
            built = facet_vertex_sets(p)
            rep.add(f"facets{p}",
                    len(built) == facet_count(p) == len(oracle_facets) and set(built) == oracle_facets,
                    f"formula {facet_count(p)} constructed {len(built)} oracle {len(oracle_facets)}")
            rep.add(f"euler{p}", lattice.f_vector.satisfies_euler(),
                    f"oracle f-vector {tuple(lattice.f_vector)}")
    for d in range(1, kalai_dmax + 1):
        for k in range(1, d + 1):
            total, ok = total_faces_and_kalai(Params(d, k))
            rep.add(f"kalai(d={d}, k={k})", ok, f"{total} faces vs 3^d = {3**d}")
    return rep


# ------------------------------------------------------------------ volumes


def identity_checks(rep: Report, dmax: int = 10, pure_dmax: int = 30) -> None:
    ks = [Fraction(n, q) for q in (1, 2, 3, 7) for n in range(q, 4 * q + 1)]
    ok = all(telescoping_sum(k, m) == k**m / math.factorial(m) for k in ks for m in range(pure_dmax + 1))
    rep.add(f"telescoping m<={pure_dmax}", ok)
    ok = all(alternating_binomial_sum(d, k) == 0 for d in range(1, pure_dmax + 1) for k in ks)
    rep.add(f"alternating binomial d<={pure_dmax}", ok)
    for d in range(1, dmax + 1):
        for k in k_grid(d):
            p = Params(d, k)
            pieces = sum(2**l * binomial(d, l) * piece_volume(d, k, l) for l in range(p.floor_k + 1))
            rep.add(f"piece_decomposition{p}", pieces == k**d * volume_rho(p))
            rep.add(f"orthant_vs_halfspace{p}",
                    orthant_volume_rho_star(p) == halfspace_cube_volume([1] * d, k))
            if p.k_is_integer:
                rep.add(f"eulerian{p}", orthant_volume_rho_star(p) == eulerian_orthant_volume(p))
            if p.k_is_integer and k >= 2:
                lower = volume_rho_star(Params(d - 1, k - 1)) if d >= 2 else 0
                decomposed = Surd.rational(2 * d * lower) + slice_volume_delta(d, k) * 2**d
                rep.add(f"dual_boundary_decomposition{p}", boundary_volume_rho_star(p) == decomposed,
                        f"{boundary_volume_rho_star(p)} vs {decomposed}")


def volume_suite(dmax: int = 6, seed: int = 0, samples: int = 10**6,
                 sigmas: float = 4.0, exact_dmax: int = 3) -> Report:
    rep = Report("volume")
    identity_checks(rep)
    for d in range(1, min(dmax, 6) + 1):
        for k in k_grid(d):
            p = Params(d, k)
            for family, body, exact in ((PRIMAL, rho_body(p), volume_rho(p)),
                                        (DUAL, rho_star_body(p), volume_rho_star(p))):
                est, err = monte_carlo_volume(body, d, 1, samples, seed)
                dev = abs(est - float(exact))
                rep.add(f"montecarlo_{family}{p}", dev <= sigmas * err,
                        f"estimate {est:.6f} +- {err:.2g}, exact {format_exact(exact)}")
            if 2 <= d <= exact_dmax:
                rep.add(f"triangulated_volume{p}",
                        volume_by_triangulation(polytope_rep(p)) == volume_rho(p)
                        and volume_by_triangulation(polytope_rep(p, DUAL)) == volume_rho_star(p))
    return rep


# ------------------------------------------------------------------ boundaries


def boundary_suite(dmax: int = 4) -> Report:
    rep = Report("boundary")
    for d, k in ARBITRATION_CASES:
        p = Params(d, k)
        tri = boundary_by_triangulation(polytope_rep(p)).total
        val = boundary_volume_rho(p)
        rep.add(f"boundary_rho{p}", tri == val.corrected and tri == val.as_printed * d,
                f"triangulated {tri}, corrected {val.corrected}, printed formula "
                f"{val.as_printed} (deviation factor d={d})")
    for d in range(2, 11):
        rep.add(f"boundary_cube(d={d})", boundary_volume_rho(Params(d, 1)).corrected == d * 2**d)
        cross = Surd.sqrt(d) * Fraction(2**d, math.factorial(d - 1))
        rep.add(f"boundary_cross(d={d})", boundary_volume_rho(Params(d, d)).corrected == cross)
    for d in range(2, dmax + 1):
        for k in k_grid(d):
            p = Params(d, k)
            tri = boundary_by_triangulation(polytope_rep(p, DUAL)).total
            closed = boundary_volume_rho_star(p)
            rep.add(f"boundary_rho_star{p}", tri == closed, f"triangulated {tri}, closed {closed}")
            if p.k_is_integer and d <= 4:
                tri_p = boundary_by_triangulation(polytope_rep(p)).total
                rep.add(f"boundary_rho_triangulated{p}", tri_p == boundary_volume_rho(p).corrected,
                        f"triangulated {tri_p}")
    return rep


# ------------------------------------------------------------------ norms


def random_vectors(seed: int, count: int, dmax: int = 8):
    """Deterministic (d, k, rational vector) triples from the package random stream."""
    u = _kernels.uniforms(seed, 0, count * (dmax + 3))
    rows = u.reshape(count, dmax + 3)
    out = []
    for r in rows:
        d = 1 + int(r[0] * dmax)
        grid = k_grid(d)
        k = grid[int(r[1] * len(grid))]
        denom = 1 + int(r[2] * 12)
        x = tuple(Fraction(int(v * 41) - 20, denom) for v in r[3:3 + d])
        out.append((d, k, x))
    return out


def norm_suite(seed: int = 7, count: int = 1000, dmax: int = 8, tol: float = 1e-9) -> Report:
    rep = Report("norm")
    exact_ok = float_ok = gauge_ok = dual_ok = True
    worst_gauge = 0.0
    for d, k, x in random_vectors(seed, count, dmax):
        p = Params(d, k)
        closed = knorm(x, p)
        exact_ok &= closed == knorm_variational(x, p)
        xf = [float(v) for v in x]
        float_ok &= abs(knorm(xf, p) - knorm_variational(xf, p)) <= 1e-12 * max(1.0, float(closed))
        dn = dual_norm(x, p)
        dual_ok &= dn == support_max(x, rho_vertices(p))
        if any(x):
            g = gauge_bisection(lambda y: member_rho(y, p), xf, tol)
            gd = gauge_bisection(lambda y: member_rho_star(y, p), xf, tol)
            err = max(abs(g - float(closed)), abs(gd - float(dn)))
            worst_gauge = max(worst_gauge, err)
            gauge_ok &= err <= tol
    rep.add("knorm == variational (exact)", exact_ok, f"{count} vectors, d <= {dmax}")
    rep.add("knorm ~ variational (float, 1e-12)", float_ok)
    rep.add("dual_norm == support function over vertices of rho", dual_ok)
    rep.add(f"gauge bisection within {tol:g}", gauge_ok, f"worst deviation {worst_gauge:.3g}")
    return rep


def run_suite(name: str, dmax: int | None = None, seed: int = 0, samples: int = 10**6) -> list[Report]:
    if name == "all":
        return [r for s in SUITES for r in run_suite(s, dmax, seed, samples)]
    if name == "fvector":
        return [fvector_suite(dmax or 6)]
    if name == "volume":
        return [volume_suite(dmax or 6, seed=seed, samples=samples)]
    if name == "boundary":
        return [boundary_suite(dmax or 4)]
    if name == "norm":
        return [norm_suite(seed=seed, dmax=dmax or 8)]
    raise ValueError(f"unknown suite {name!r}")
