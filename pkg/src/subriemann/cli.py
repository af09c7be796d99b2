"""Command-line entry point.

Subcommands: analyze, nu, nsw, dist, ballvol, growth, verify-auto,
probe-exponent, sobolev.  Exit codes: 0 success, 1 usage error,
2 structural-hypothesis failure, 3 property-check failure.  All floats
print with 12 significant digits; exact rationals print as p/q.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from .fields import (
    FieldError,
    check_h1,
    check_h2,
    enumerate_commutators,
    flag_at,
    homogeneous_dimension,
    parse_system,
)
from .metric import (
    LatticeSpec,
    MetricError,
    ball_volume,
    distance_field,
    growth_exponent_scan,
)
from .nsw import (
    build_nsw,
    eval_lambda,
    evaluation_table_csv,
    parse_domain_spec,
    pointwise_nu,
)
from .automorph import parse_family, verify_transitive_family
from .polynomials import PolynomialError
from .sobolev import GridDomain, SobolevError, bump, exponent_probe, minimize_quotient

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_HYPOTHESIS = 2
EXIT_PROPERTY = 3


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage; the contract here is 1
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _fmt(x) -> str:
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, float):
        return f"{x:.12g}"
    return str(x)


def _load_system(path: str):
    try:
        return parse_system(Path(path).read_text())
    except (OSError, FieldError, PolynomialError, ValueError) as exc:
        _fail_usage(f"cannot load system spec {path!r}: {exc}")


def _fail_usage(msg: str):
    print(json.dumps({"schema_version": SCHEMA_VERSION, "error": "usage", "message": msg}),
          file=sys.stderr)
    raise SystemExit(EXIT_USAGE)


def _fail_property(msg: str):
    print(json.dumps({"schema_version": SCHEMA_VERSION, "error": "property", "message": msg}),
          file=sys.stderr)
    raise SystemExit(EXIT_PROPERTY)


def _read_points(path: str, dim: int):
    pts = []
    with open(path, newline="") as fh:
        for row in csv.reader(fh):
            if not row or row[0].lstrip().startswith("#"):
                continue
            if len(row) < dim:
                _fail_usage(f"point row {row} has fewer than {dim} columns")
            pts.append(tuple(Fraction(v.strip()) for v in row[:dim]))
    return pts


def _parse_floats(text: str):
    return [float(v) for v in text.split(",") if v.strip()]


def _parse_spacing(text: str):
    """Per-axis spacings; a single value broadcasts over all axes."""
    vals = _parse_floats(text)
    return vals[0] if len(vals) == 1 else vals


def _parse_box(text: str):
    out = []
    for part in text.split(";"):
        lo, hi = (float(v) for v in part.split(","))
        out.append((lo, hi))
    return out


def _write(path_opt, text: str):
    if path_opt:
        Path(path_opt).write_text(text)
    else:
        sys.stdout.write(text)


# ------------------------------------------------------------------
# subcommands


def cmd_analyze(args) -> int:
    system = _load_system(args.system)
    h1 = check_h1(system)
    basis = enumerate_commutators(system)
    h2 = check_h2(system, basis)
    Q = homogeneous_dimension(system)
    nsw = build_nsw(basis)
    points = [tuple(Fraction(0) for _ in range(system.dim))]
    if args.points:
        points = _read_points(args.points, system.dim)
    nu_rows = [(pt, pointwise_nu(nsw, pt)) for pt in points]
    report = {
        "schema_version": SCHEMA_VERSION,
        "name": system.name,
        "dim": system.dim,
        "m": system.m,
        "weights": list(system.weights),
        "Q": Q,
        "h1": h1.ok,
        "h2": h2.ok,
        "basis_degrees": basis.degrees(),
        "basis_degrees_canonical": basis.canonical_degrees(),
        "nsw_tuple_counts": nsw.degree_counts(),
        "nu_table": [
            {"point": [str(v) for v in pt], "nu": nu} for pt, nu in nu_rows
        ],
    }
    print(f"system: {system.name or args.system}")
    print(f"dim = {system.dim}, fields = {system.m}, weights = "
          + ",".join(map(str, system.weights)))
    print(f"Q = {Q}")
    print(str(h1))
    print(str(h2))
    print("bracket basis entries per degree (canonical): "
          + ", ".join(f"{k}:{v}" for k, v in sorted(basis.canonical_degrees().items())))
    print("ball-volume polynomial ordered-tuple counts per degree: "
          + ", ".join(f"{k}:{v}" for k, v in sorted(nsw.degree_counts().items())))
    for pt, nu in nu_rows:
        print("nu(" + ",".join(str(v) for v in pt) + f") = {nu}")
    if args.json:
        Path(args.json).write_text(json.dumps(report, indent=2) + "\n")
    if not (h1.ok and h2.ok):
        return EXIT_HYPOTHESIS
    return EXIT_OK


def cmd_nu(args) -> int:
    system = _load_system(args.system)
    nsw = build_nsw(enumerate_commutators(system))
    points = _read_points(args.points, system.dim)
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow([f"x{i+1}" for i in range(system.dim)] + ["nu"])
    for pt in points:
        writer.writerow([str(v) for v in pt] + [pointwise_nu(nsw, pt)])
    _write(args.out, buf.getvalue())
    return EXIT_OK


def cmd_nsw(args) -> int:
    system = _load_system(args.system)
    nsw = build_nsw(enumerate_commutators(system))
    if args.json:
        Path(args.json).write_text(nsw.to_json() + "\n")
    else:
        print(nsw.to_json())
    if args.eval:
        rows = []
        with open(args.eval, newline="") as fh:
            for row in csv.reader(fh):
                if not row or row[0].lstrip().startswith("#"):
                    continue
                x = [Fraction(v) for v in row[: system.dim]]
                r = Fraction(row[system.dim])
                rows.append((x, r))
        _write(args.out, evaluation_table_csv(nsw, rows))
    return EXIT_OK


def _lattice_from_args(args) -> LatticeSpec:
    return LatticeSpec(
        box=_parse_box(args.box),
        spacing=_parse_spacing(args.spacing),
        n_random_controls=args.controls,
        tau=args.tau,
    )


def cmd_dist(args) -> int:
    system = _load_system(args.system)
    lattice = _lattice_from_args(args)
    source = _parse_floats(args.source)
    dfield = distance_field(system, source, lattice, seed=args.seed)
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow([f"x{i+1}" for i in range(system.dim)] + ["distance"])
    if args.query:
        targets = [[float(v) for v in pt] for pt in _read_points(args.query, system.dim)]
        for pt in targets:
            writer.writerow([_fmt(float(v)) for v in pt] + [_fmt(dfield.query(pt))])
    else:
        for idx in np.ndindex(*lattice.shape):
            coords = [lattice.axes()[k][idx[k]] for k in range(system.dim)]
            writer.writerow([_fmt(float(c)) for c in coords] + [_fmt(float(dfield.values[idx]))])
    _write(args.out, buf.getvalue())
    return EXIT_OK


def cmd_ballvol(args) -> int:
    system = _load_system(args.system)
    lattice = _lattice_from_args(args)
    center = _parse_floats(args.center)
    dfield = distance_field(system, center, lattice, seed=args.seed)
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["radius", "volume", "method", "standard_error"])
    method = "monte-carlo" if args.mc else "grid"
    for r in _parse_floats(args.radii):
        est = ball_volume(system, center, r, dfield=dfield, method=method,
                          n_samples=args.mc or 20000, seed=args.seed)
        writer.writerow([_fmt(r), _fmt(est.estimate), est.method,
                         _fmt(est.standard_error) if est.standard_error is not None else ""])
    _write(args.out, buf.getvalue())
    return EXIT_OK


def cmd_growth(args) -> int:
    system = _load_system(args.system)
    nsw = build_nsw(enumerate_commutators(system))
    try:
        domain = parse_domain_spec(Path(args.domain).read_text())
    except (OSError, ValueError) as exc:
        _fail_usage(f"cannot load domain spec: {exc}")
    kappas = _parse_floats(args.kappa)
    if args.plan:
        plan = []
        with open(args.plan, newline="") as fh:
            for row in csv.reader(fh):
                if not row or row[0].lstrip().startswith("#"):
                    continue
                x = [Fraction(v) for v in row[: system.dim]]
                plan.append((x, Fraction(row[system.dim])))
    else:
        radii = [Fraction(1, 2 ** k) for k in range(1, 9)]
        plan = [(list(pt), r) for pt in domain.sample_points() for r in radii]
    report = growth_exponent_scan(system, nsw, domain, kappas, plan, mode="lambda")
    _write(args.out, report.to_csv())
    summary = {
        "schema_version": SCHEMA_VERSION,
        "kappa_infima": {f"{k:.12g}": f"{v:.12g}" for k, v in report.kappa_infima.items()},
    }
    print(json.dumps(summary, indent=2))
    return EXIT_OK


def cmd_verify_auto(args) -> int:
    system = _load_system(args.system)
    try:
        family = parse_family(Path(args.family).read_text())
    except (OSError, FieldError, PolynomialError) as exc:
        _fail_usage(f"cannot load family spec: {exc}")
    nsw = build_nsw(enumerate_commutators(system))
    pairs = []
    if args.pairs:
        with open(args.pairs, newline="") as fh:
            for row in csv.reader(fh):
                if not row or row[0].lstrip().startswith("#"):
                    continue
                vals = [Fraction(v) for v in row]
                n = system.dim
                pairs.append((vals[:n], vals[n: 2 * n]))
    report = verify_transitive_family(system, nsw, family, pairs)
    print(str(report))
    return EXIT_OK if report.ok else EXIT_PROPERTY


def cmd_probe_exponent(args) -> int:
    system = _load_system(args.system)
    dom = GridDomain(_parse_box(args.box), _parse_spacing(args.spacing))
    center = [0.5 * (lo + hi) for lo, hi in dom.box]
    widths = [(hi - lo) / 8.0 for lo, hi in dom.box]
    seed_fn = bump(dom, center, widths)
    ts = _parse_floats(args.t)
    report = exponent_probe(system, None, args.kappa, seed_fn, ts)
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["t", "R"])
    for t, r in zip(report.t_values, report.ratios):
        writer.writerow([_fmt(t), _fmt(r)])
    _write(args.out, buf.getvalue())
    print(json.dumps({
        "schema_version": SCHEMA_VERSION,
        "kappa": f"{report.kappa:.12g}",
        "slope": f"{report.slope:.12g}",
        "spread": f"{report.spread:.12g}",
    }, indent=2))
    return EXIT_OK


def cmd_sobolev(args) -> int:
    system = _load_system(args.system)
    dom = GridDomain(_parse_box(args.box), _parse_spacing(args.spacing))
    res = minimize_quotient(
        system, dom, p=args.p, n_starts=args.starts,
        max_iter=args.max_iter, rel_tol=args.tol, seed=args.seed,
    )
    summary = {
        "schema_version": SCHEMA_VERSION,
        "constant": f"{res.constant:.12g}",
        "iterations": res.iterations,
        "converged": res.converged,
        "start_quotients": [f"{q:.12g}" for q in res.start_quotients],
        "p": f"{args.p:.12g}",
        "p_star": f"{res.report.p_star:.12g}",
        "box": dom.box,
        "spacing": dom.spacing,
    }
    print(json.dumps(summary, indent=2))
    if args.trace:
        Path(args.trace).write_text(
            "iteration,quotient\n"
            + "".join(f"{i},{q:.12g}\n" for i, q in enumerate(res.trace))
        )
    if args.dump_grid:
        raw = Path(args.dump_grid)
        res.minimizer.values.astype("<f8").tofile(raw)
        raw.with_suffix(raw.suffix + ".json").write_text(json.dumps({
            "schema_version": SCHEMA_VERSION,
            "dtype": "<f8",
            "order": "C",
            "shape": list(dom.shape),
            "box": dom.box,
            "spacing": dom.spacing,
        }, indent=2) + "\n")
    return EXIT_OK


# ------------------------------------------------------------------


def build_parser() -> _Parser:
    parser = _Parser(prog="subriemann", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--jobs", type=int, default=1,
                       help="worker-parallelism cap (sweeps are currently sequential)")
        p.add_argument("--out", default=None, help="output file (default: stdout)")

    p = sub.add_parser("analyze", help="hypothesis checks, Q, bracket basis, nu table")
    p.add_argument("system")
    p.add_argument("--points", help="CSV of rational sample points for the nu table")
    p.add_argument("--json", help="write the JSON report here")
    common(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("nu", help="pointwise homogeneous dimension at sample points")
    p.add_argument("system")
    p.add_argument("--points", required=True)
    common(p)
    p.set_defaults(func=cmd_nu)

    p = sub.add_parser("nsw", help="ball-volume polynomial dump and evaluation")
    p.add_argument("system")
    p.add_argument("--json", help="write the polynomial JSON here")
    p.add_argument("--eval", help="CSV of x...,r rows to evaluate")
    common(p)
    p.set_defaults(func=cmd_nsw)

    def lattice_opts(p):
        p.add_argument("--box", required=True, help="lo,hi;lo,hi;...")
        p.add_argument("--spacing", required=True, help="h per axis, comma separated")
        p.add_argument("--tau", type=float, default=None)
        p.add_argument("--controls", type=int, default=None,
                       help="extra random control directions")

    p = sub.add_parser("dist", help="lattice subunit distance field")
    p.add_argument("system")
    p.add_argument("--source", required=True)
    lattice_opts(p)
    p.add_argument("--query", help="CSV of target points (default: dump all nodes)")
    common(p)
    p.set_defaults(func=cmd_dist)

    p = sub.add_parser("ballvol", help="subunit ball volume estimates")
    p.add_argument("system")
    p.add_argument("--center", required=True)
    p.add_argument("--radii", required=True)
    lattice_opts(p)
    p.add_argument("--mc", type=int, default=0,
                   help="Monte-Carlo sample count (default: grid counting)")
    common(p)
    p.set_defaults(func=cmd_ballvol)

    p = sub.add_parser("growth", help="volume-growth exponent scan (Lambda proxy)")
    p.add_argument("system")
    p.add_argument("--domain", required=True)
    p.add_argument("--kappa", required=True)
    p.add_argument("--plan", help="CSV of x...,r evaluation rows")
    common(p)
    p.set_defaults(func=cmd_growth)

    p = sub.add_parser("verify-auto", help="certify a transitive automorphism family")
    p.add_argument("system")
    p.add_argument("family")
    p.add_argument("--pairs", help="CSV rows p...,q... of level-set sample pairs")
    common(p)
    p.set_defaults(func=cmd_verify_auto)

    p = sub.add_parser("probe-exponent", help="R(t) scaling probe for one kappa")
    p.add_argument("system")
    p.add_argument("--kappa", type=float, required=True)
    p.add_argument("--t", required=True, help="comma-separated t values")
    p.add_argument("--box", required=True)
    p.add_argument("--spacing", required=True)
    common(p)
    p.set_defaults(func=cmd_probe_exponent)

    p = sub.add_parser("sobolev", help="minimize the discrete Sobolev quotient")
    p.add_argument("system")
    p.add_argument("--box", required=True)
    p.add_argument("--spacing", required=True)
    p.add_argument("--p", type=float, default=2.0)
    p.add_argument("--max-iter", type=int, default=20000)
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--starts", type=int, default=3)
    p.add_argument("--trace", help="write the per-iterate quotient CSV here")
    p.add_argument("--dump-grid", help="write the raw minimizer grid (little-endian f8)")
    common(p)
    p.set_defaults(func=cmd_sobolev)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SystemExit:
        raise
    except (FieldError, PolynomialError, MetricError, SobolevError, ValueError) as exc:
        _fail_property(str(exc))


if __name__ == "__main__":
    sys.exit(main())
