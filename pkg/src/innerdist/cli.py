"""innerdist command line.

Exit status: 0 when every check passes, 1 when a checked inequality fails,
2 on invalid input.  INNERDIST_THREADS sets the worker count for batch
verification (default: all available CPUs).
"""
from __future__ import annotations

import argparse
import csv
import os
import re
import sys

from . import io
from .errors import DomainValidationError, InfeasibleTolerance, InvalidInput, Unreachable
from .fractal import fractal_level, fractal_stats, hull_lower_probe, sibling_gap_check
from .geodesic import inner_distance
from .grid import grid_oracle
from .painleve import ConnectedSet, painleve_cover
from .svg import render_svg
from .verifier import TOL, batch_status, random_pairs, ratios_nondecreasing, sharpness_sweep, verify_main_theorem

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2
REPORT_COLUMNS = ["x1", "y1", "x2", "y2", "distance", "euclidean", "h1_E", "q", "bound", "classic_bound", "margin", "satisfied"]


class UsageError(InvalidInput):
    pass


class _Parser(argparse.ArgumentParser):
    def __init__(self, *a, **kw):
        super().__init__(*a, **kw)
        # let points such as "-1,0" through as positionals
        self._negative_number_matcher = re.compile(r"^-[\d.][\d.eE+,-]*$")

    def error(self, message):
        raise UsageError(message)


def thread_count() -> int:
    raw = os.environ.get("INNERDIST_THREADS")
    if raw is None:
        return os.cpu_count() or 1
    try:
        n = int(raw)
    except ValueError:
        raise InvalidInput(f"INNERDIST_THREADS must be an integer, got {raw!r}") from None
    if n < 1:
        raise InvalidInput("INNERDIST_THREADS must be at least 1")
    return n


def _fmt(v) -> str:
    return io.format_number(v)


def cmd_distance(args, out) -> int:
    dom = io.load_domain(args.domain)
    x, y = io.parse_point_arg(args.x), io.parse_point_arg(args.y)
    (rep,) = verify_main_theorem(dom, [(x, y)])
    if rep.error:
        raise InvalidInput(rep.error)
    print(f"distance {_fmt(rep.distance)}", file=out)
    print(f"euclidean {_fmt(rep.euclidean)}", file=out)
    print(f"h1_E {_fmt(rep.h1_E)}", file=out)
    print(f"bound {_fmt(rep.bound_value)} classic_bound {_fmt(rep.classic_bound)}", file=out)
    print(f"margin {_fmt(rep.margin)} satisfied {rep.satisfied and rep.classic_satisfied}", file=out)
    ok = rep.ok
    if args.oracle is not None:
        val = grid_oracle(dom, x, y, args.oracle)
        gap = val - rep.distance
        print(f"oracle {_fmt(val)} gap {_fmt(gap)} relative {_fmt(gap / rep.distance if rep.distance else 0.0)}", file=out)
        ok &= gap >= -TOL
    if args.emit_path or args.svg:
        _, path = inner_distance(dom, x, y)
        if args.emit_path:
            with open(args.emit_path, "w", encoding="utf-8") as fh:
                fh.write(io.path_document(path))
        if args.svg:
            with open(args.svg, "w", encoding="utf-8") as fh:
                fh.write(render_svg(dom, path, points=(x, y)))
    return EXIT_OK if ok else EXIT_FAIL


def cmd_verify(args, out) -> int:
    dom = io.load_domain(args.domain)
    if args.random is not None:
        if args.pairs:
            raise InvalidInput("give either a pairs file or --random, not both")
        if args.random < 0:
            raise InvalidInput("--random must be non-negative")
        pairs = random_pairs(dom, args.random, args.seed)
    elif args.pairs:
        try:
            with open(args.pairs, newline="", encoding="utf-8") as fh:
                pairs = io.read_pairs_csv(fh)
        except OSError as exc:
            raise InvalidInput(f"cannot read {args.pairs}: {exc.strerror}") from None
    else:
        raise InvalidInput("need a pairs file or --random n")
    reports = verify_main_theorem(dom, pairs, workers=thread_count())
    bad = [r for r in reports if r.error]
    if bad:
        raise InvalidInput(f"pair {bad[0].pair}: {bad[0].error}")
    w = csv.writer(out, lineterminator="\n")
    w.writerow(REPORT_COLUMNS)
    for r in reports:
        (x1, y1), (x2, y2) = r.pair
        vals = [x1, y1, x2, y2, r.distance, r.euclidean, r.h1_E, r.q, r.bound_value, r.classic_bound, r.margin]
        w.writerow([_fmt(v) for v in vals] + [str(r.satisfied and r.classic_satisfied).lower()])
    return batch_status(reports)


def _int_list(text: str) -> list:
    try:
        vals = [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise InvalidInput(f"expected comma-separated integers, got {text!r}") from None
    if not vals:
        raise InvalidInput("empty list")
    return vals


def cmd_comb(args, out) -> int:
    ns = _int_list(args.n_list)
    if any(n < 2 for n in ns):
        raise InvalidInput("every n must be at least 2")
    rows = sharpness_sweep(ns)
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["n", "h1_E", "distance", "ratio"])
    for r in rows:
        w.writerow([r.n, _fmt(r.h1_E), _fmt(r.distance), _fmt(r.ratio)])
    ok = ratios_nondecreasing(rows) and all(r.ratio <= 1 + TOL for r in rows)
    return EXIT_OK if ok else EXIT_FAIL


def _print_certificate(cert, out) -> None:
    print(f"pieces {len(cert.pieces)}", file=out)
    print(f"sum_boundary {_fmt(cert.sum_boundary)}", file=out)
    print(f"bound {_fmt(cert.bound)}", file=out)
    print(f"contains_K {cert.contains_K} inside_U {cert.inside_U}", file=out)
    print(f"satisfied {cert.satisfied}", file=out)


def cmd_painleve(args, out) -> int:
    try:
        with open(args.segments, encoding="utf-8") as fh:
            segs = io.parse_segments(fh.read())
    except OSError as exc:
        raise InvalidInput(f"cannot read {args.segments}: {exc.strerror}") from None
    K = ConnectedSet(tuple(segs))
    try:
        cert = painleve_cover(K, args.clearance, args.epsilon)
    except InfeasibleTolerance as exc:
        print(f"infeasible: {exc}", file=out)
        if exc.certificate is not None:
            _print_certificate(exc.certificate, out)
        return EXIT_FAIL
    _print_certificate(cert, out)
    return EXIT_OK if cert.satisfied else EXIT_FAIL


def cmd_fractal(args, out) -> int:
    if args.level is not None:
        s = fractal_stats(fractal_level(args.level))
        print(f"{s.count} balls, radius {s.radius:.17g}, diameter_sum {s.diameter_sum:.17g}, min_gap {s.min_gap:.17g}", file=out)
        return EXIT_OK if s.min_gap > 0 else EXIT_FAIL
    if args.gap_check is not None:
        actual, bound, ok = sibling_gap_check(args.gap_check)
        rel = ">=" if ok else "<"
        print(f"actual {actual:.17g} {rel} bound {bound:.17g}", file=out)
        return EXIT_OK if ok else EXIT_FAIL
    k0, idx = args.hull_probe
    try:
        k0 = int(k0)
    except ValueError:
        raise InvalidInput(f"k0 must be an integer, got {k0!r}") from None
    probe = hull_lower_probe(k0, _int_list(idx), args.resolution)
    print(f"hull_perimeter {probe.hull_perimeter:.17g} measure_weight {probe.measure_weight:.17g} satisfied {probe.satisfied}", file=out)
    return EXIT_OK if probe.satisfied else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="innerdist", description="Inner distance in polygonal domains and length bounds.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    d = sub.add_parser("distance", help="inner distance between two points")
    d.add_argument("domain")
    d.add_argument("x", help="x,y")
    d.add_argument("y", help="x,y")
    d.add_argument("--oracle", type=float, metavar="H", help="also report the grid upper bound at spacing H")
    d.add_argument("--emit-path", metavar="FILE")
    d.add_argument("--svg", metavar="FILE")
    d.set_defaults(func=cmd_distance)

    v = sub.add_parser("verify", help="check the length bounds on many pairs (CSV output)")
    v.add_argument("domain")
    v.add_argument("pairs", nargs="?", help="CSV file with x1,y1,x2,y2 rows")
    v.add_argument("--random", type=int, metavar="N")
    v.add_argument("--seed", type=int, default=0)
    v.set_defaults(func=cmd_verify)

    c = sub.add_parser("comb", help="ratio sweep over comb domains")
    c.add_argument("--n-list", default="2,4,6,8,10")
    c.set_defaults(func=cmd_comb)

    pc = sub.add_parser("painleve", help="certified convex cover of a connected segment set")
    pc.add_argument("segments")
    pc.add_argument("--clearance", type=float, required=True)
    pc.add_argument("--epsilon", type=float, required=True)
    pc.set_defaults(func=cmd_painleve)

    f = sub.add_parser("fractal", help="construction balls of the self-similar example")
    g = f.add_mutually_exclusive_group(required=True)
    g.add_argument("--level", type=int)
    g.add_argument("--gap-check", type=int, metavar="K0")
    g.add_argument("--hull-probe", nargs=2, metavar=("K0", "INDICES"))
    f.add_argument("--resolution", type=int, default=256)
    f.set_defaults(func=cmd_fractal)
    return p


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    try:
        args = build_parser().parse_args(argv)
        return args.func(args, out)
    except DomainValidationError as exc:
        print(f"invalid input at {exc.path or '$'}: {exc.reason}", file=sys.stderr)
        return EXIT_INPUT
    except (InvalidInput, Unreachable) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except SystemExit as exc:  # --help
        return EXIT_OK if not exc.code else EXIT_INPUT


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
