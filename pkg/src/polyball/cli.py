"""``polyball`` command line: norms, face counts, volumes, Mahler sweep, OFF export, verification."""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from fractions import Fraction

from .combinatorics import (
    DUAL, PRIMAL, f_vector, facet_count, polytope_rep, total_faces_and_kalai,
)
from .exact import Params, Surd, as_rational, format_exact, to_decimal
from .face_lattice import FaceLatticeTooLarge, lattice_for
from .norms import dual_norm, knorm, knorm_variational, member_rho, member_rho_star
from .oracle import (
    boundary_by_triangulation, monte_carlo_volume, rho_body, rho_star_body,
    volume_by_triangulation,
)
from .verify import SUITES, run_suite
from .volume import (
    boundary_volume_rho, boundary_volume_rho_star, mahler_sweep, volume_rho, volume_rho_star,
)

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3
DEFAULT_SAMPLES = 10**6
SEED_ENV = "POLYBALL_SEED"
MAHLER_FIELDS = ("d", "k", "mahler_volume", "bound", "ratio", "satisfied")
TRIANGULATION_DMAX = 4


class UsageError(Exception):
    pass


def parse_rational(text: str) -> Fraction:
    """``"5/2"``, ``"2.5"`` or ``"3"`` to an exact Fraction; decimals stay exact."""
    try:
        return as_rational(text.strip())
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise UsageError(f"not a rational number: {text!r}") from exc


def parse_vector(text: str) -> list[Fraction]:
    items = [t for t in text.split(",")]
    if not text.strip() or any(not t.strip() for t in items):
        raise UsageError(f"malformed vector: {text!r}")
    return [parse_rational(t) for t in items]


def make_params(d: int, k: Fraction) -> Params:
    try:
        return Params(d, k)
    except (ValueError, TypeError) as exc:
        raise UsageError(str(exc)) from exc


def default_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError as exc:
        raise UsageError(f"{SEED_ENV} must be an integer, got {raw!r}") from exc


def quantity_record(p: Params, family: str, quantity: str, exact, decimal: str,
                    method: str, erratum_note: str | None = None) -> dict:
    return {
        "d": p.d,
        "k": format_exact(p.k),
        "family": family,
        "quantity": quantity,
        "exact": exact,
        "decimal": decimal,
        "method": method,
        "erratum_note": erratum_note,
    }


def _family(args) -> str:
    return DUAL if args.dual else PRIMAL


def _write_text(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
        return
    with open(out, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


# ---------------------------------------------------------------- norm


def cmd_norm(args) -> int:
    x = parse_vector(args.vector)
    d = len(x) if args.d is None else args.d
    if d != len(x):
        raise UsageError(f"--d {d} but the vector has {len(x)} coordinates")
    p = make_params(d, parse_rational(args.k))
    if args.dual:
        value = dual_norm(x, p)
        member = member_rho_star(x, p)
    else:
        value = knorm_variational(x, p) if args.variational else knorm(x, p)
        member = member_rho(x, p)
    body = "rho*" if args.dual else "rho"
    print(format_exact(value))
    print(f"{member.name.lower()} of {body}(d={p.d}, k={format_exact(p.k)})")
    return EXIT_OK


# ---------------------------------------------------------------- fvector


def cmd_fvector(args) -> int:
    p = make_params(args.d, parse_rational(args.k))
    family = _family(args)
    if not p.k_is_integer and not args.oracle:
        print(f"facets: {facet_count(p)}")
        print("closed-form f-vector needs integer k; only the facet count is available "
              "(use --oracle for the full enumeration)", file=sys.stderr)
        return EXIT_OK
    oracle = None
    if args.oracle:
        try:
            oracle = lattice_for(polytope_rep(p, family)).f_vector
        except FaceLatticeTooLarge as exc:
            raise UsageError(str(exc)) from exc
    if p.k_is_integer:
        fv = f_vector(p, family)
        total, kalai = total_faces_and_kalai(p)
        print(" ".join(map(str, fv)))
        print(f"total faces: {total} (3^d = {3**p.d}, Kalai bound "
              f"{'satisfied' if kalai else 'VIOLATED'})")
        if oracle is None:
            return EXIT_OK
        ok = tuple(oracle) == tuple(fv)
    else:
        print(" ".join(map(str, oracle)))
        expected = facet_count(p)
        got = oracle[0] if family == DUAL else oracle[-1]
        print(f"facets by formula: {expected}")
        ok = got == expected
    if ok:
        print("VERIFIED")
        return EXIT_OK
    print(f"MISMATCH: oracle {' '.join(map(str, oracle))}")
    return EXIT_MISMATCH


# ---------------------------------------------------------------- volume / boundary


def _emit(record: dict, lines: list[str], as_json: bool) -> None:
    if as_json:
        print(json.dumps(record, sort_keys=True))
    else:
        print("\n".join(lines))


def cmd_volume(args) -> int:
    p = make_params(args.d, parse_rational(args.k))
    family = _family(args)
    if args.method == "montecarlo":
        samples = DEFAULT_SAMPLES if args.samples is None else args.samples
        seed = default_seed() if args.seed is None else args.seed
        body = rho_star_body(p) if args.dual else rho_body(p)
        try:
            est, err = monte_carlo_volume(body, p.d, 1, samples, seed)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        method = f"montecarlo(samples={samples}, seed={seed}, stderr={err:.6g})"
        record = quantity_record(p, family, "volume", None, f"{est:.10g}", method)
        _emit(record, [f"{est:.10g} +- {err:.3g}"], args.json)
        return EXIT_OK
    if args.method == "triangulate":
        if p.d > TRIANGULATION_DMAX:
            raise UsageError(f"triangulation is limited to d <= {TRIANGULATION_DMAX}")
        value = volume_by_triangulation(polytope_rep(p, family))
    else:
        value = volume_rho_star(p) if args.dual else volume_rho(p)
    text = format_exact(value)
    record = quantity_record(p, family, "volume", text, to_decimal(value), args.method)
    _emit(record, [text], args.json)
    return EXIT_OK


def cmd_boundary(args) -> int:
    p = make_params(args.d, parse_rational(args.k))
    family = _family(args)
    if args.method == "triangulate":
        if p.d > TRIANGULATION_DMAX:
            raise UsageError(f"triangulation is limited to d <= {TRIANGULATION_DMAX}")
        value = boundary_by_triangulation(polytope_rep(p, family)).total
        text = format_exact(value)
        _emit(quantity_record(p, family, "boundary", text, to_decimal(value), "triangulate"),
              [text], args.json)
        return EXIT_OK
    if args.dual:
        value = boundary_volume_rho_star(p)
        text = format_exact(value)
        _emit(quantity_record(p, family, "boundary", text, to_decimal(value), "closed"),
              [text], args.json)
        return EXIT_OK
    try:
        val = boundary_volume_rho(p)
    except NotImplementedError as exc:
        raise UsageError(str(exc)) from exc
    text = format_exact(val.corrected)
    note = val.note
    record = quantity_record(p, family, "boundary", text, to_decimal(val.corrected), "closed", note)
    lines = [text, f"printed formula: {format_exact(val.as_printed)}",
             f"ERRATUM: corrected value is {val.factor} x the printed formula; {note}"]
    _emit(record, lines, args.json)
    return EXIT_OK


# ---------------------------------------------------------------- mahler


def mahler_records(report) -> list[dict]:
    return [{
        "d": str(r.d),
        "k": str(r.k),
        "mahler_volume": format_exact(r.value),
        "bound": format_exact(r.bound),
        "ratio": to_decimal(r.ratio),
        "satisfied": "true" if r.satisfied else "false",
    } for r in report.rows]


def render_mahler_csv(records: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=MAHLER_FIELDS, lineterminator="\n")
    writer.writeheader()
    writer.writerows(records)
    return buf.getvalue()


def parse_mahler_csv(text: str) -> list[dict]:
    return list(csv.DictReader(io.StringIO(text)))


def render_mahler_json(records: list[dict], d_max: int) -> str:
    violations = [r for r in records if r["satisfied"] != "true"]
    doc = {"d_max": d_max, "rows": records, "violations": len(violations)}
    return json.dumps(doc, indent=1, sort_keys=True) + "\n"


def parse_mahler_json(text: str) -> tuple[list[dict], int]:
    doc = json.loads(text)
    return doc["rows"], doc["d_max"]


def cmd_mahler(args) -> int:
    if args.dmax < 1:
        raise UsageError("--dmax must be at least 1")
    report = mahler_sweep(args.dmax, workers=args.workers)
    records = mahler_records(report)
    text = (render_mahler_json(records, args.dmax) if args.format == "json"
            else render_mahler_csv(records))
    try:
        _write_text(text, args.out)
    except OSError as exc:
        print(f"error: cannot write {args.out}: {exc}", file=sys.stderr)
        return EXIT_IO
    minim = report.minimizers()
    non_trivial = {d: ks for d, ks in minim.items() if any(k not in (1, d) for k in ks)}
    print(f"{len(report.rows)} rows, {len(report.violations)} violations, "
          f"{len(report.equality_cases)} equality cases, "
          f"minimizers outside k in {{1, d}}: {non_trivial or 'none'}", file=sys.stderr)
    return EXIT_OK if not report.violations else EXIT_MISMATCH


# ---------------------------------------------------------------- OFF export


def _cross(u, v):
    return (u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0])


def _sub(u, v):
    return tuple(a - b for a, b in zip(u, v))


def _dot(u, v):
    return sum(a * b for a, b in zip(u, v))


def order_facet(vertices, idx, normal) -> list[int]:
    """Cyclic order of a planar convex polygon, counterclockwise seen from outside."""
    pts = [vertices[i] for i in idx]
    centre = tuple(sum(c) / len(pts) for c in zip(*pts))
    ref = _sub(pts[0], centre)
    side = _cross(normal, ref)

    def angle(i):
        w = _sub(vertices[i], centre)
        return math.atan2(float(_dot(w, side)), float(_dot(w, ref)))

    ordered = sorted(idx, key=angle)
    a, b, c = (vertices[i] for i in ordered[:3])
    if _dot(_cross(_sub(b, a), _sub(c, a)), normal) < 0:
        ordered.reverse()
    return ordered


def off_text(p: Params, family: str) -> str:
    rep = polytope_rep(p, family)
    lattice = lattice_for(rep)
    verts = rep.vertices
    polys = []
    for facet in lattice.facets:
        (j,) = [j for j in facet.facet_set]
        normal = rep.inequalities[j][0]
        polys.append(order_facet(verts, list(facet.vertex_set), normal))
    n_edges = lattice.f_vector[1]
    lines = ["OFF", f"{len(verts)} {len(polys)} {n_edges}"]
    lines += [" ".join(f"{float(c):.17g}" for c in v) for v in verts]
    lines += [" ".join(map(str, [len(f), *f])) for f in polys]
    return "\n".join(lines) + "\n"


def cmd_export_off(args) -> int:
    if args.d != 3:
        raise UsageError("OFF export supports d = 3 only")
    p = make_params(3, parse_rational(args.k))
    text = off_text(p, _family(args))
    try:
        _write_text(text, args.out)
    except OSError as exc:
        print(f"error: cannot write {args.out}: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


# ---------------------------------------------------------------- verify


def cmd_verify(args) -> int:
    seed = default_seed() if args.seed is None else args.seed
    reports = run_suite(args.suite, dmax=args.dmax, seed=seed, samples=args.samples)
    passed = all(r.passed for r in reports)
    doc = {"suite": args.suite, "seed": seed, "passed": passed,
           "reports": [r.to_dict() for r in reports]}
    print(json.dumps(doc, indent=1, sort_keys=True))
    for r in reports:
        for c in r.failures():
            print(f"MISMATCH {r.suite}: {c.name}: {c.detail}", file=sys.stderr)
    return EXIT_OK if passed else EXIT_MISMATCH


# ---------------------------------------------------------------- parser


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="polyball", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def shape(sp, d_required=True):
        sp.add_argument("--d", type=int, required=d_required)
        sp.add_argument("--k", required=True, help='rational, e.g. "5/2" or "2.5"')
        sp.add_argument("--dual", action="store_true", help="use the polar rho*(d, k)")

    sp = sub.add_parser("norm", help="k-norm or dual norm of a vector")
    shape(sp, d_required=False)
    sp.add_argument("--vector", required=True, help="comma-separated coordinates")
    sp.add_argument("--variational", action="store_true",
                    help="evaluate by breakpoint minimisation instead of sorting")
    sp.set_defaults(func=cmd_norm)

    sp = sub.add_parser("fvector", help="face counts")
    shape(sp)
    sp.add_argument("--oracle", action="store_true", help="cross-check by face enumeration (d <= 6)")
    sp.set_defaults(func=cmd_fvector)

    for name, func in (("volume", cmd_volume), ("boundary", cmd_boundary)):
        sp = sub.add_parser(name, help=f"{name} measure")
        shape(sp)
        methods = ("closed", "montecarlo", "triangulate") if name == "volume" else ("closed", "triangulate")
        sp.add_argument("--method", choices=methods, default="closed")
        if name == "volume":
            sp.add_argument("--samples", type=int)
            sp.add_argument("--seed", type=int)
        sp.add_argument("--json", action="store_true")
        sp.set_defaults(func=func)

    sp = sub.add_parser("mahler", help="exact Mahler volumes for integer k")
    sp.add_argument("--dmax", type=int, required=True)
    sp.add_argument("--format", choices=("csv", "json"), default="csv")
    sp.add_argument("--out")
    sp.add_argument("--workers", type=int, default=1)
    sp.set_defaults(func=cmd_mahler)

    sp = sub.add_parser("export-off", help="OFF mesh of a 3-dimensional member")
    shape(sp)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_export_off)

    sp = sub.add_parser("verify", help="closed forms against oracles")
    sp.add_argument("--suite", choices=(*SUITES, "all"), default="all")
    sp.add_argument("--dmax", type=int)
    sp.add_argument("--seed", type=int)
    sp.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
    sp.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"polyball {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
