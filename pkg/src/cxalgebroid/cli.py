"""Command-line front end.

Exit status: 0 when the requested object was verified or constructed, 1 on a
definite mathematical failure (the report carries a witness), 2 on bad input,
3 when two independent verification routes disagree.
"""
from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from typing import Sequence

from . import io
from .algebroid import COMPLEX, REAL, CheckConfig, ChartedAlgebroid, classify_algebroid
from .constructions import (
    MATCHED,
    check_complex_poisson,
    check_matched_pair,
    classify_vf_at,
    complex_sum,
    complexify,
    conjugate,
    cotangent_algebroid,
    decompose_complexified,
    fiberwise_bivector_compat,
    pullback_at,
    vector_field_algebroid,
)
from .errors import CxAlgebroidError, InternalInconsistency, NonConstantRank, ParseError, PoleAtPoint
from .geometry import parse_vector_field
from .invariants import (
    amin_at,
    extract_real_algebroid,
    isotropy_at,
    parse_grid,
    pointwise_invariants_at,
    scan_grid,
)
from .symexpr import Point

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def parse_point(text: str | None, chart: Sequence[str]) -> Point:
    """``"x=1,y=1/2"`` or ``"1,1/2"``; omitted means the origin."""
    chart = tuple(chart)
    if text is None or not text.strip():
        return Point(tuple(Fraction(0) for _ in chart), chart)
    parts = [p.strip() for p in text.split(",") if p.strip()]
    try:
        if all("=" in p for p in parts):
            vals = {}
            for p in parts:
                name, val = p.split("=")
                vals[name.strip()] = Fraction(val.strip())
            unknown = set(vals) - set(chart)
            if unknown:
                raise ParseError(f"point names {sorted(unknown)} not in chart {list(chart)}")
            coords = tuple(vals.get(v, Fraction(0)) for v in chart)
        else:
            coords = tuple(Fraction(p) for p in parts)
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"bad point {text!r}") from None
    if len(coords) != len(chart):
        raise ParseError(f"point {text!r} needs {len(chart)} coordinates")
    return Point(coords, chart)


def _config(args) -> CheckConfig:
    if args.trials < 0:
        raise ParseError("--trials must be nonnegative")
    return CheckConfig(seed=args.seed, trials=args.trials)


def load_real_pair_member(path: str) -> ChartedAlgebroid:
    data = io.load_json(path)
    kind = io.file_kind(data)
    if kind == "bivector":
        pi = io.bivector_from_json(data, path)
        if not pi.is_real():
            raise ParseError(f"{path}: matched-pair summands must be real bivectors")
        return cotangent_algebroid(pi, REAL)
    if kind == "algebroid":
        A = io.algebroid_from_json(data, path)
        if not A.is_real_data():
            raise ParseError(f"{path}: matched-pair summands must have real data")
        return A.with_scalars(REAL)
    raise ParseError(f"{path}: expected an algebroid or bivector file")


# ---------------------------------------------------------------------------
# verbs; each returns (exit status, report dict)


def cmd_check(args):
    A = io.load_algebroid(args.file)
    v = classify_algebroid(A, _config(args))
    ok = v.classification in ("CLA", "RLA")
    return (EXIT_OK if ok else EXIT_FAIL), {"input": args.file, "summary": v.classification, "verdict": v.to_dict()}


def cmd_invariants(args):
    A = io.load_algebroid(args.file)
    m = parse_point(args.point, A.chart)
    rep = pointwise_invariants_at(A, m)
    iso = isotropy_at(A, m)
    out = {
        "input": args.file,
        "pointwise": rep.to_dict(with_bases=True),
        "isotropy": iso.to_dict(),
        "amin": amin_at(A, m).to_dict(),
    }
    ok = rep.identities_hold and iso.real_form_matches
    out["summary"] = (
        f"real rank {rep.real_rank}, type {rep.type}, class {rep.class_}, order {rep.order}"
        + ("" if ok else "; identity check failed")
    )
    return (EXIT_OK if ok else EXIT_INTERNAL), out


def _extraction(A, grid, config):
    try:
        ex = extract_real_algebroid(A, grid, config)
    except NonConstantRank as exc:
        return False, {"status": "non-constant real rank", "message": str(exc), "points": [p.as_dict() for p in exc.points]}
    return True, {"status": "extracted", **ex.to_dict()}


def cmd_scan(args):
    A = io.load_algebroid(args.file)
    rep = scan_grid(A, args.grid)
    out = {"input": args.file, "grid": args.grid, "scan": rep.to_dict(), "summary": _strata_summary(rep)}
    status = EXIT_OK if rep.identities_hold else EXIT_INTERNAL
    if args.extract:
        ok, out["real_algebroid"] = _extraction(A, args.grid, _config(args))
        if not ok and status == EXIT_OK:
            status = EXIT_FAIL
    return status, out


def cmd_matched_pair(args):
    A1 = load_real_pair_member(args.first)
    A2 = load_real_pair_member(args.second)
    cfg = _config(args)
    rep = check_matched_pair(A1, A2, cfg)
    out = {"inputs": [args.first, args.second], "matched_pair": rep.to_dict(), "summary": rep.detail}
    if args.fiberwise:
        out["fiberwise"] = fiberwise_bivector_compat(A1, A2, cfg).to_dict()
    if args.sum:
        out["complex_sum"] = classify_algebroid(complex_sum(A1, A2), cfg).to_dict()
    return (EXIT_OK if rep.verdict == MATCHED else EXIT_FAIL), out


def cmd_sum(args):
    A1 = load_real_pair_member(args.first)
    A2 = load_real_pair_member(args.second)
    S = complex_sum(A1, A2)
    out = {"inputs": [args.first, args.second], "algebroid": io.algebroid_to_json(S), "summary": "complex sum built"}
    status = EXIT_OK
    if args.classify:
        v = classify_algebroid(S, _config(args))
        out["verdict"] = v.to_dict()
        out["summary"] = f"complex sum classifies as {v.classification}"
        status = EXIT_OK if v.classification == "CLA" else EXIT_FAIL
    return status, out


def cmd_decompose(args):
    A = io.load_algebroid(args.file)
    A1, A2 = decompose_complexified(A)
    return EXIT_OK, {
        "input": args.file,
        "real_part": io.algebroid_to_json(A1),
        "imaginary_part": io.algebroid_to_json(A2),
        "summary": "split into real and imaginary frame data",
    }


def cmd_conjugate(args):
    A = io.load_algebroid(args.file)
    if A.scalars != COMPLEX:
        raise ParseError(f"{args.file}: conjugate needs complex scalars")
    return EXIT_OK, {"input": args.file, "algebroid": io.algebroid_to_json(conjugate(A)), "summary": "conjugate built"}


def cmd_complexify(args):
    A = io.load_algebroid(args.file)
    if A.scalars != REAL:
        raise ParseError(f"{args.file}: complexify needs real scalars")
    return EXIT_OK, {"input": args.file, "algebroid": io.algebroid_to_json(complexify(A)), "summary": "complexification built"}


def cmd_vf(args):
    chart = tuple(c.strip() for c in args.chart.split(",")) if args.chart else None
    Z = parse_vector_field(args.field, chart)
    A = vector_field_algebroid(Z)
    out = {"field": args.field, "chart": list(Z.chart), "algebroid": io.algebroid_to_json(A)}
    status = EXIT_OK
    if args.check:
        v = classify_algebroid(A, _config(args))
        out["verdict"] = v.to_dict()
        if v.classification != "CLA":
            status = EXIT_FAIL
    if args.scan is not None:
        points = parse_grid(args.scan, Z.chart)
    else:
        points = [parse_point(args.point, Z.chart)]
    cases, poles = [], []
    for p in points:
        try:
            case = classify_vf_at(Z, p)
        except PoleAtPoint:
            poles.append(p.as_dict())
            continue
        cases.append({"point": p.as_dict(), **case.to_dict()})
    out["cases"] = cases
    out["poles"] = poles
    out["summary"] = ", ".join(sorted({f"{c['case']} (real rank {c['real_rank']})" for c in cases}))
    if args.scan is not None:
        rep = scan_grid(A, points)
        out["scan"] = rep.to_dict()
        out["summary"] = _strata_summary(rep)
        mismatched = [
            rec.point.as_dict() for rec, c in zip(rep.records, cases) if rec.real_rank != c["real_rank"]
        ]
        if mismatched:
            out["case_table_mismatch"] = mismatched
            status = EXIT_INTERNAL
    return status, out


def cmd_poisson(args):
    pi = io.load_bivector(args.file)
    cfg = _config(args)
    v = check_complex_poisson(pi, cfg)
    out = {"input": args.file, "poisson": v.to_dict(), "summary": "complex Poisson" if v.is_poisson else "not Poisson"}
    if args.classify:
        from .constructions import poisson_algebroid

        out["algebroid_verdict"] = classify_algebroid(poisson_algebroid(pi), cfg).to_dict()
    return (EXIT_OK if v.is_poisson else EXIT_FAIL), out


def cmd_pullback(args):
    A = io.load_algebroid(args.algebroid)
    phi = io.load_map(args.map)
    m = parse_point(args.point, phi.source_chart)
    rep = pullback_at(A, phi, m)
    summary = f"fiber dimension {rep.fiber.dim}, " + ("transversal" if rep.transversal else "not transversal")
    return EXIT_OK, {"inputs": [args.algebroid, args.map], "pullback": rep.to_dict(), "summary": summary}


def _strata_summary(rep) -> str:
    parts = [
        f"real rank {k[0]} (type {k[1]}, class {k[2]}, order {k[3]}) on {len(pts)} point(s)"
        for k, pts in sorted(rep.strata.items())
    ]
    head = "constant real rank on sample" if rep.constant_real_rank_on_sample else f"{len(parts)} strata"
    return head + ": " + "; ".join(parts) if parts else "no pole-free points"


# ---------------------------------------------------------------------------
# output


def render_text(report: dict, indent: int = 0) -> str:
    lines = []
    pad = "  " * indent
    for key in sorted(report):
        val = report[key]
        if isinstance(val, dict):
            if not val:
                lines.append(f"{pad}{key}: {{}}")
                continue
            lines.append(f"{pad}{key}:")
            lines.append(render_text(val, indent + 1))
        elif isinstance(val, list) and val and any(isinstance(v, (dict, list)) for v in val):
            lines.append(f"{pad}{key}:")
            for item in val:
                if isinstance(item, dict):
                    body = render_text(item, indent + 2).lstrip()
                    lines.append(f"{pad}  - {body}")
                else:
                    lines.append(f"{pad}  - {item}")
        else:
            lines.append(f"{pad}{key}: {_scalar(val)}")
    return "\n".join(lines)


def _scalar(val) -> str:
    if isinstance(val, bool):
        return "yes" if val else "no"
    if val is None:
        return "-"
    if isinstance(val, list):
        return "[" + ", ".join(_scalar(v) for v in val) + "]"
    return str(val)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", choices=("json", "text"), default="json", help="report format")
    common.add_argument("-o", "--out", help="write the report to this file instead of stdout")
    common.add_argument("--seed", type=int, default=0, help="seed for random section tests")
    common.add_argument("--trials", type=int, default=30, help="number of random section tests")

    p = _Parser(prog="cxalgebroid", description="Exact checks for complex Lie algebroids on one chart.")
    sub = p.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    s = sub.add_parser("check", parents=[common], help="classify an algebroid file")
    s.add_argument("file")
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("invariants", parents=[common], help="pointwise invariants at one point")
    s.add_argument("file")
    s.add_argument("--point", help='e.g. "x=1,y=0" (default: origin)')
    s.set_defaults(func=cmd_invariants)

    s = sub.add_parser("scan", parents=[common], help="stratify a grid by pointwise invariants")
    s.add_argument("file")
    s.add_argument("--grid", default="", help='e.g. "x=-2..2:1,y=-2..2:1"')
    s.add_argument("--extract", action="store_true", help="also build the algebroid of real elements")
    s.set_defaults(func=cmd_scan)

    s = sub.add_parser("matched-pair", parents=[common], help="test two real algebroids or bivectors")
    s.add_argument("first")
    s.add_argument("second")
    s.add_argument("--fiberwise", action="store_true", help="cross-check with linear bivectors on the dual")
    s.add_argument("--sum", action="store_true", help="also classify the complex sum")
    s.set_defaults(func=cmd_matched_pair)

    s = sub.add_parser("sum", parents=[common], help="complex sum of two real algebroids")
    s.add_argument("first")
    s.add_argument("second")
    s.add_argument("--classify", action="store_true")
    s.set_defaults(func=cmd_sum)

    for verb, func, text in (
        ("decompose", cmd_decompose, "split frame data into real and imaginary parts"),
        ("conjugate", cmd_conjugate, "conjugate algebroid"),
        ("complexify", cmd_complexify, "complexification of a real algebroid"),
    ):
        s = sub.add_parser(verb, parents=[common], help=text)
        s.add_argument("file")
        s.set_defaults(func=func)

    s = sub.add_parser("vf", parents=[common], help="rank-one algebroid of a complex vector field")
    s.add_argument("field", help='e.g. "dx + i*x*dy"')
    s.add_argument("--chart", help="comma-separated coordinates (default: inferred)")
    s.add_argument("--point")
    s.add_argument("--scan", metavar="GRID", nargs="?", const="", help="classify every grid point")
    s.add_argument("--check", action="store_true", help="also run the axiom checks")
    s.set_defaults(func=cmd_vf)

    s = sub.add_parser("poisson", parents=[common], help="decide whether a complex bivector is Poisson")
    s.add_argument("file")
    s.add_argument("--classify", action="store_true", help="also classify the cotangent algebroid")
    s.set_defaults(func=cmd_poisson)

    s = sub.add_parser("pullback", parents=[common], help="fiber of the pullback algebroid at a point")
    s.add_argument("algebroid")
    s.add_argument("map")
    s.add_argument("--point")
    s.set_defaults(func=cmd_pullback)
    return p


def run(argv: Sequence[str] | None = None) -> tuple[int, str]:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        status, body = args.func(args)
    except InternalInconsistency as exc:
        status, body = EXIT_INTERNAL, {"error": "internal inconsistency", "message": str(exc)}
    except (CxAlgebroidError, OSError) as exc:
        status, body = EXIT_INPUT, {"error": type(exc).__name__, "message": str(exc)}
    report = {"command": args.verb, "exit_status": status, "seed": args.seed, "trials": args.trials, **body}
    if args.output == "json":
        text = io.dumps_report(report)
    else:
        summary = report.pop("summary", None)
        text = render_text({"schema_version": io.SCHEMA_VERSION, **report}) + "\n"
        if summary is not None:
            text = f"{args.verb}: {summary}\n" + text
    if args.out:
        io.write_text(args.out, text)
    else:
        sys.stdout.write(text)
    return status, text


def main(argv: Sequence[str] | None = None) -> int:
    status, _ = run(argv)
    return status


if __name__ == "__main__":
    sys.exit(main())
