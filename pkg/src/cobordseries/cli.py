"""Command-line entry point: run the verification suites and emit reports.

Subcommands: series, expmap, cosurface {markov-check, cut-paste, series},
nonregular.  Reports are JSON (default) or CSV with the fields command,
params, cases[], max_residual, pass; exit status is 0 exactly when every
case passes.  All randomness is drawn from a seeded generator recorded in
the report (default seed 0).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import random
import sys
from fractions import Fraction

from . import nonregular
from .cells import CellComplex, domain_box, point_cell, edge_cell
from .groupoids import from_spec
from .groups import builtin_group, load_cayley_file
from .matrices import RationalMatrix
from .measures import (
    CobordismBox, ComplexMeasure, SemigroupDensity, cut, factorization_check,
    markov_check, measure_series, measure_series_multiplicativity, paste,
)
from .paths import convergence_suite_paths, convergence_table, error_ratios
from .series import FormalSeries

REPORT_SCHEMA = 1


def random_series(groupoid, order, rng, n=2, max_support=5):
    unit = RationalMatrix.identity(n)
    elems = [e for e in groupoid.elements_up_to(order)
             if groupoid.ord(e) >= 1]
    support = rng.sample(elems, min(max_support, len(elems)))
    coeffs = {}
    for elem in support:
        coeffs[elem] = RationalMatrix(
            [[Fraction(rng.randint(-4, 4), rng.randint(1, 4)) for _ in range(n)]
             for _ in range(n)])
    return FormalSeries(groupoid, order, coeffs, unit)


def run_series(args):
    groupoid = from_spec(args.groupoid)
    rng = random.Random(args.seed)
    cases = []
    for idx in range(args.count):
        a = random_series(groupoid, args.trunc, rng)
        u = a.exp()
        round_trip = u.log() == a
        one = FormalSeries.one(groupoid, args.trunc, a.unit)
        exp_log = (one + a).log().exp() == one + a
        inv_ok = u * u.inverse() == one
        ok = round_trip and exp_log and inv_ok
        cases.append({"name": f"series-{idx}", "residual": 0.0 if ok else 1.0,
                      "pass": ok})
    return {"groupoid": groupoid.name, "trunc": args.trunc}, cases


def suite_paths(order):
    return convergence_suite_paths(order)


def run_expmap(args):
    ns = [int(x) for x in args.n.split(",")]
    rows = []
    ratio_rows = []
    for name, path in suite_paths(args.grade).items():
        table = convergence_table(path, ns)
        for row in table:
            rows.append({"n": row["n"], "grade": row["grade"],
                         "error": row["error"]})
        for row in error_ratios(table):
            ratio_rows.append({"path": name, **row})
    lo, hi = args.ratio_band
    cases = [{"name": f"{r['path']}-grade{r['grade']}-n{r['n']}",
              "residual": abs(r["ratio"] - 2.0),
              "ratio": r["ratio"],
              "pass": lo <= r["ratio"] <= hi}
             for r in ratio_rows]
    params = {"grade": args.grade, "n": ns, "ratio_band": [lo, hi],
              "paths": list(suite_paths(args.grade))}
    return params, cases, rows


def _load_group(args):
    if args.table_file:
        return load_cayley_file(args.table_file)
    return builtin_group(args.group)


def chain_instance(length, density):
    cells = [point_cell((i,)) for i in range(length)]
    domains = [domain_box(((i, i + 1),)) for i in range(length - 1)]
    return ComplexMeasure(CellComplex(cells), domains, density)


def strip_instance(density):
    """Two unit squares side by side; the shared edge splits the strip."""
    cells = [
        edge_cell((0, 0), 1),   # left side
        edge_cell((0, 0), 0),   # bottom left
        edge_cell((0, 1), 0),   # top left
        edge_cell((1, 0), 1),   # shared middle edge
        edge_cell((1, 0), 0),   # bottom right
        edge_cell((1, 1), 0),   # top right
        edge_cell((2, 0), 1),   # right side
    ]
    domains = [domain_box(((0, 1), (0, 1))), domain_box(((1, 2), (0, 1)))]
    return ComplexMeasure(CellComplex(cells), domains, density)


def run_markov(args):
    group = _load_group(args)
    density = SemigroupDensity(group)
    cases = []
    for length in (3, 4):
        measure = chain_instance(length, density)
        mid = length // 2
        f_plus = lambda vals: 1.0 if vals[max(vals)] == 0 else 0.0
        f_minus = lambda vals: 1.0 if vals[min(vals)] == 0 else 0.0
        _, residual = markov_check(measure, mid, mid, f_plus, f_minus)
        cases.append({"name": f"chain-{length}", "residual": residual,
                      "pass": residual <= args.tol})
    measure = strip_instance(density)
    f_plus = lambda vals: 1.0 if vals[max(vals)] == 0 else 0.0
    f_minus = lambda vals: 1.0 if vals[min(vals)] == 0 else 0.0
    _, residual = markov_check(measure, 3, 3, f_plus, f_minus)
    cases.append({"name": "two-plaquette-strip", "residual": residual,
                  "pass": residual <= args.tol})
    return {"group": group.name, "tol": args.tol}, cases


def run_cut_paste(args):
    group = _load_group(args)
    density = SemigroupDensity(group)
    cases = []

    # interval: [0,2] cut at 1
    cob = CobordismBox(((0, 2),))
    complex_ = CellComplex([point_cell((0,)), point_cell((1,)), point_cell((2,))])
    result = cut(cob, complex_, 1)
    doms_later = [domain_box(((1, 2),))]
    doms_earlier = [domain_box(((0, 1),))]
    ok, residual = factorization_check(result.k, result.k_prime, complex_,
                                       doms_later, doms_earlier, density,
                                       tol=args.tol)
    pasted = paste(result.k, result.k_prime)
    round_trip = (cut(cob, pasted, 1).k == result.k
                  and cut(cob, pasted, 1).k_prime == result.k_prime)
    cases.append({"name": "interval", "residual": residual,
                  "pass": ok and round_trip})

    # two plaquettes glued along an edge
    cob2 = CobordismBox(((0, 2), (0, 1)))
    cells = [
        edge_cell((0, 0), 1), edge_cell((0, 0), 0), edge_cell((0, 1), 0),
        edge_cell((1, 0), 1), edge_cell((1, 0), 0), edge_cell((1, 1), 0),
        edge_cell((2, 0), 1),
    ]
    complex2 = CellComplex(cells)
    result2 = cut(cob2, complex2, 1)
    doms_later2 = [domain_box(((1, 2), (0, 1)))]
    doms_earlier2 = [domain_box(((0, 1), (0, 1)))]
    ok2, residual2 = factorization_check(result2.k, result2.k_prime, complex2,
                                         doms_later2, doms_earlier2, density,
                                         tol=args.tol)
    pasted2 = paste(result2.k, result2.k_prime)
    round2 = (cut(cob2, pasted2, 1).k == result2.k
              and cut(cob2, pasted2, 1).k_prime == result2.k_prime)
    cases.append({"name": "plaquette", "residual": residual2,
                  "pass": ok2 and round2})
    return {"group": group.name, "tol": args.tol}, cases


def run_cosurface_series(args):
    group = _load_group(args)
    groupoid = from_spec(args.groupoid)
    density = SemigroupDensity(group)
    series = measure_series(groupoid, density, args.trunc)
    ok, worst = measure_series_multiplicativity(series, tol=args.tol)
    cases = [{"name": "multiplicativity", "residual": worst, "pass": ok}]
    return {"group": group.name, "groupoid": groupoid.name,
            "trunc": args.trunc}, cases


def run_nonregular(args):
    ts = [float(x) for x in args.t.split(",")]
    rows = nonregular.full_report(ts=ts, grid_size=args.grid)
    cases = []
    for row in rows:
        cases.append({
            "name": f"t={row['t']}",
            "residual": max(row["fd_cross_check"], row["dt_closed_residual"],
                            -min(0.0, row["lower_slack"]),
                            -min(0.0, row["upper_slack"])),
            "min_bound_slack": min(row["lower_slack"], row["upper_slack"]),
            "derivative_residual": row["dt_fd_residual"],
            "escape": row["escape_for_positive_t"],
            "pass": row["pass"],
        })
    return {"t": ts, "grid": args.grid}, cases


def write_report(report, args, csv_rows=None):
    if args.format == "csv":
        buf = io.StringIO()
        rows = csv_rows if csv_rows is not None else report["cases"]
        if rows:
            writer = csv.DictWriter(buf, fieldnames=list(rows[0].keys()))
            writer.writeheader()
            writer.writerows(rows)
        text = buf.getvalue()
    else:
        text = json.dumps(report, indent=1, default=float) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def add_common(parser):
    parser.add_argument("--group", default="Z3", help="built-in group name")
    parser.add_argument("--table-file", default=None,
                        help="Cayley table JSON file overriding --group")
    parser.add_argument("--groupoid", default="nat",
                        help="nat | interval:a..b | box:d:spans")
    parser.add_argument("--trunc", type=int, default=4, help="truncation order")
    parser.add_argument("--tol", type=float, default=1e-12)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--out", default=None, help="report file (default stdout)")
    parser.add_argument("--format", choices=("json", "csv"), default="json")


def build_parser():
    parser = argparse.ArgumentParser(prog="cobordseries")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("series", help="exp/log round trips on random series")
    add_common(p)
    p.add_argument("--count", type=int, default=20)

    p = sub.add_parser("expmap", help="product-integral convergence table")
    add_common(p)
    p.add_argument("--grade", type=int, default=3)
    p.add_argument("--n", default="8,16,32,64")
    p.add_argument("--ratio-band", type=float, nargs=2, default=(1.7, 2.3))

    p = sub.add_parser("cosurface", help="measure suites")
    cos_sub = p.add_subparsers(dest="cosurface_command", required=True)
    for name in ("markov-check", "cut-paste", "series"):
        q = cos_sub.add_parser(name)
        add_common(q)
        if name == "series":
            q.set_defaults(groupoid="interval:0..5", trunc=5)

    p = sub.add_parser("nonregular", help="interval diffeomorphism checks")
    add_common(p)
    p.add_argument("--t", default="0.1,-0.1,0.5,-0.5,0.9,-0.9")
    p.add_argument("--grid", type=int, default=1_000_000)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    csv_rows = None
    if args.command == "series":
        params, cases = run_series(args)
    elif args.command == "expmap":
        params, cases, csv_rows = run_expmap(args)
    elif args.command == "cosurface":
        if args.cosurface_command == "markov-check":
            params, cases = run_markov(args)
        elif args.cosurface_command == "cut-paste":
            params, cases = run_cut_paste(args)
        else:
            params, cases = run_cosurface_series(args)
    elif args.command == "nonregular":
        params, cases = run_nonregular(args)
    else:  # pragma: no cover
        parser.error(f"unknown command {args.command!r}")
    command = args.command
    if getattr(args, "cosurface_command", None):
        command = f"{args.command} {args.cosurface_command}"
    report = {
        "schema_version": REPORT_SCHEMA,
        "command": command,
        "params": {**params, "seed": args.seed},
        "cases": cases,
        "max_residual": max((c.get("residual", 0.0) for c in cases), default=0.0),
        "pass": all(c["pass"] for c in cases),
    }
    write_report(report, args, csv_rows)
    return 0 if report["pass"] else 1


if __name__ == "__main__":
    raise SystemExit(main())
