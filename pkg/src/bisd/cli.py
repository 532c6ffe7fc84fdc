"""Command-line interface.

Exit status: 0 when the requested conclusion holds (or a campaign is clean),
1 when it is withheld (or a campaign found violations), 2 on input or usage
errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

import numpy as np

from .distribution import DEFAULT_TOL, SampleSet, build_common_frame, build_cdf, merge_grids
from .errors import BisdError, InvalidInputError, ParseError
from .first_order import k_sheet
from .inference import bootstrap_pvalues, selected_checks, univariate_checks
from .report import ConditionReport
from .second_order import h_surface, l_surface
from .stieltjes import exact_expectation
from .testfuncs import resolve
from .verify import CONDITIONS, GENERATORS, CampaignConfig, run_campaign

EXIT_OK, EXIT_WITHHELD, EXIT_USAGE = 0, 1, 2


def _split(line, delim):
    return [c.strip() for c in (line.split(delim) if delim else line.split())]


def _is_number(text):
    try:
        float(text)
    except ValueError:
        return False
    return True


def ingest(path):
    """Read ``x,y[,w]`` rows from a delimited text file.

    The delimiter is the first of ``,``, ``;`` or tab found on the first
    data line, else whitespace.  A first row with no numeric cell is a
    header.  Blank lines and lines starting with ``#`` are skipped.  A
    missing weight counts as 1; weights are normalized and duplicate points
    merged, while ``size`` keeps the number of rows.
    """
    text = Path(path).read_text(encoding="utf-8-sig")
    rows, weights, delim, first = [], [], None, True
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if delim is None:
            delim = next((d for d in (",", ";", "\t") if d in line), "")
        cells = _split(line, delim)
        if first:
            first = False
            if not any(_is_number(c) for c in cells):
                continue
        if len(cells) not in (2, 3):
            raise ParseError(f"expected 2 or 3 columns, got {len(cells)}", line=lineno)
        try:
            vals = [float(c) for c in cells]
        except ValueError:
            bad = next(c for c in cells if not _is_number(c))
            raise ParseError(f"non-numeric value {bad!r}", line=lineno) from None
        if not all(np.isfinite(vals)):
            raise ParseError("values must be finite", line=lineno)
        w = vals[2] if len(vals) == 3 else 1.0
        if w < 0:
            raise InvalidInputError(f"line {lineno}: negative weight {w!r}")
        rows.append(vals[:2])
        weights.append(w)
    if not rows:
        raise InvalidInputError(f"{path}: no data rows")
    return SampleSet.from_points(rows, weights, size=len(rows)).merged()


def _emit(text, out):
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _checks(args):
    if args.uni_j is not None:
        return univariate_checks(args.uni_j)
    return selected_checks(args.order or 1, args.cls)


def _condition_report(args, command, pvalues_for=None):
    a, b = ingest(args.first), ingest(args.second)
    frame = build_common_frame(a, b)
    f1, f2 = build_cdf(a, frame), build_cdf(b, frame)
    checks = _checks(args)
    results = [(name, checker(f1, f2, args.tol)) for name, checker in checks]
    pvalues = None
    if pvalues_for is not None:
        pvalues = bootstrap_pvalues(a, b, frame, checks, pvalues_for, args.seed, args.tol)
    report = ConditionReport.from_checks(
        command, frame.as_dict(), args.tol, results, pvalues,
        seed=args.seed if pvalues_for is not None else None,
    )
    identical = (
        np.array_equal(f1.xs, f2.xs) and np.array_equal(f1.ys, f2.ys) and np.array_equal(f1.F, f2.F)
    )
    return report, len(report.conclusions) == len(checks), identical


def _write_report(args, report, identical):
    if args.format == "json":
        _emit(report.to_json() + "\n", args.out)
    else:
        text = report.to_text()
        if identical:
            text += "note: the two distributions are identical; every condition holds with equality\n"
        _emit(text, args.out)


def cmd_check(args):
    report, ok, identical = _condition_report(args, "check")
    _write_report(args, report, identical)
    return EXIT_OK if ok else EXIT_WITHHELD


def cmd_infer(args):
    if args.bootstrap < 1:
        raise _Usage("infer needs --bootstrap B with B >= 1")
    report, ok, identical = _condition_report(args, "infer", pvalues_for=args.bootstrap)
    _write_report(args, report, identical)
    return EXIT_OK if ok else EXIT_WITHHELD


def cmd_expectation(args):
    phi = resolve(args.phi)
    s = ingest(args.file)
    cdf = build_cdf(s, build_common_frame(s))
    value = exact_expectation(phi, cdf)
    if args.format == "json":
        doc = {"phi": phi.descriptor, "expectation": value, "frame": cdf.frame.as_dict()}
        _emit(json.dumps(doc, indent=2, sort_keys=True) + "\n", args.out)
    else:
        _emit(f"{phi.descriptor}\t{value!r}\n", args.out)
    return EXIT_OK


def surface_matrix(cdf, which):
    """``(xs, ys, values)`` of surface ``which`` on the evaluation lattice."""
    grid = merge_grids(cdf, cdf)
    xs, ys = grid.lattice()
    if which == "F":
        vals = cdf.on_lattice(xs, ys)
    elif which == "K":
        vals = k_sheet(cdf, grid).K
    elif which == "H":
        vals = h_surface(cdf, grid).V
    elif which == "L":
        vals = l_surface(cdf, grid).V
    else:
        raise InvalidInputError(f"unknown surface {which!r}")
    return xs, ys, np.asarray(vals)


def surface_csv(cdf, which):
    """Matrix with y coordinates across the first row and x down the first column."""
    xs, ys, vals = surface_matrix(cdf, which)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([f"{which}:x\\y"] + [repr(float(y)) for y in ys])
    for x, row in zip(xs, vals):
        w.writerow([repr(float(x))] + [repr(float(v)) for v in row])
    return buf.getvalue()


def cmd_surface(args):
    s = ingest(args.file)
    _emit(surface_csv(build_cdf(s, build_common_frame(s)), args.which), args.out)
    return EXIT_OK


def cmd_verify(args):
    cfg = CampaignConfig(
        conditions=args.conditions,
        generator=args.generator,
        seed=args.seed,
        trials=args.trials,
        atoms=(args.atoms_min, args.atoms_max),
        phis_per_trial=args.phis,
        tolerance=args.tol,
        workers=args.workers,
    )
    report = run_campaign(cfg)
    if args.format == "json":
        _emit(report.to_json() + "\n", args.out)
    else:
        _emit(
            f"{report.conditions} via {report.generator}: {report.satisfied}/{report.trials} "
            f"pairs satisfied the conditions, {report.comparisons} comparisons, "
            f"{len(report.violations)} violations, min margin {report.min_margin!r}\n",
            args.out,
        )
    return EXIT_OK if report.clean else EXIT_WITHHELD


class _Usage(Exception):
    pass


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=DEFAULT_TOL, help="tolerance for every inequality")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", help="write output to this path instead of stdout")

    cond = argparse.ArgumentParser(add_help=False)
    cond.add_argument("first", help="sample file of the candidate dominating distribution")
    cond.add_argument("second", help="sample file of the dominated distribution")
    which = cond.add_mutually_exclusive_group()
    which.add_argument("--order", type=int, choices=(1, 2))
    which.add_argument("--uni-j", dest="uni_j", type=int, metavar="N",
                       help="univariate order-N checks on both marginals")
    cond.add_argument("--class", dest="cls", choices=("sub", "super", "both"), default="both")
    cond.add_argument("--format", choices=("json", "text"), default="text")

    p = argparse.ArgumentParser(prog="bisd", description="Bivariate stochastic dominance checks.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", parents=[common, cond], help="check dominance conditions")
    c.set_defaults(func=cmd_check)

    i = sub.add_parser("infer", parents=[common, cond], help="conditions plus bootstrap p-values")
    i.add_argument("--bootstrap", type=int, default=0, metavar="B")
    i.set_defaults(func=cmd_infer)

    e = sub.add_parser("expectation", parents=[common], help="exact expectation of a test function")
    e.add_argument("file")
    e.add_argument("phi", help='descriptor, e.g. "cobb_douglas:1,1"')
    e.add_argument("--format", choices=("json", "text"), default="text")
    e.set_defaults(func=cmd_expectation)

    s = sub.add_parser("surface", parents=[common], help="dump F, K, H or L on the lattice as CSV")
    s.add_argument("file")
    s.add_argument("which", choices=("F", "K", "H", "L"))
    s.add_argument("--format", choices=("csv",), default="csv")
    s.set_defaults(func=cmd_surface)

    v = sub.add_parser("verify", parents=[common], help="randomized expectation-ordering campaign")
    v.add_argument("--conditions", choices=sorted(CONDITIONS), default="first-sub")
    v.add_argument("--generator", choices=GENERATORS)
    v.add_argument("--trials", type=int, default=200)
    v.add_argument("--phis", type=int, default=20, help="test functions per trial")
    v.add_argument("--atoms-min", type=int, default=1)
    v.add_argument("--atoms-max", type=int, default=8)
    v.add_argument("--workers", type=int, default=1)
    v.add_argument("--format", choices=("json", "text"), default="text")
    v.set_defaults(func=cmd_verify)
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (BisdError, _Usage, OSError) as exc:
        print(f"bisd {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
