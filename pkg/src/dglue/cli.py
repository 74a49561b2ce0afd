"""``dglue`` command line: check presentations, build ∇∪, run demos and property suites."""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from . import connections as C
from . import demos
from .bundles import reduced_bundle
from .errors import DGlueError, ParseError, ValidationError
from .gluing import First, GluedSpace, Second
from .presentation import Presentation, parse_complements, parse_presentation
from .report import CheckReport
from .sections import S1, glue_sections_S, is_compatible, is_invariant, round_trip_report
from .suites import DEFAULT_SAMPLES, SUITE_DOMAIN, SUITES, run_suite

REPORT_SCHEMA = "dglue-report/1"


# -- shared helpers -------------------------------------------------------------------

def glued_sample_points(space: GluedSpace, n: int, seed: int, domain=SUITE_DOMAIN) -> list:
    """``n`` seeded points of ``X1 ∪ X2``: first-piece points off the locus, second-piece points, glue points."""
    rng = np.random.default_rng(seed)
    pts = []
    for x in np.round(rng.uniform(*domain, n), 12):
        x = float(x)
        if rng.integers(2) and not space.in_domain(x):
            pts.append(First(x))
        elif space.x2.dim == 1:
            pts.append(Second(x))
    if space.finite:
        pts.extend(Second(fy) for _, fy in space.locus.pairs)
    return pts


def _sample_xs(seed: int, samples: int, domain=SUITE_DOMAIN) -> np.ndarray:
    return np.sort(np.random.default_rng(seed).uniform(*domain, samples))


def _error_report(name: str, exc: Exception) -> CheckReport:
    return CheckReport(name, False, float("inf"), None, 0, law=getattr(exc, "law", name),
                       detail=f"{type(exc).__name__}: {exc}")


# -- commands -------------------------------------------------------------------------

def _named_check(p: Presentation, chk: dict, args) -> CheckReport:
    kind, name = chk["kind"], chk["name"]
    xs = _sample_xs(args.seed, args.samples)
    G = p.glued
    if kind == "sections_compatible":
        a, b = (p.sections[s] for s in chk["sections"])
        rep = is_compatible(a, b, G, args.tol)
    elif kind == "invariant":
        rep = is_invariant(p.sections[chk["section"]], G, args.tol)
    elif kind == "metrics_compatible":
        a, b = (p.metrics[m] for m in chk["metrics"])
        rep = C.metrics_compatible_check(a, b, G, args.tol)
    elif kind == "connections_compatible":
        a, b = (p.connections[c] for c in chk["connections"])
        rep = C.connections_compatible_check(a, b, G, tol=args.tol)
    elif kind == "metric_compatible":
        s, t = (p.sections[x] for x in chk["sections"])
        rep = C.metric_compatible_check(p.connections[chk["connection"]], p.metrics[chk["metric"]], s, t,
                                        xs, args.tol)
    elif kind == "leibniz":
        rep = C.leibniz_check(p.connections[chk["connection"]], p.functions[chk["function"]][1],
                              p.sections[chk["section"]], xs, args.tol)
    elif kind in ("induced_metric_compatible", "glued_leibniz"):
        rep = _induced_checks(p, args, only=kind)[0]
    else:  # reduced_round_trip
        R = reduced_bundle(G, _complements(p, args))
        rep = round_trip_report(S1(p.sections[chk["section"]], R, args.tol), R, xs)
    rep.name = name
    rep.seed = args.seed
    return rep


def _complements(p: Presentation, args) -> dict | None:
    comp = dict(p.complements)
    if args.complement:
        comp = parse_complements(args.complement)
    return comp or None


def cmd_check(args) -> list[CheckReport]:
    try:
        p = parse_presentation(args.file)
    except (ParseError, ValidationError) as exc:
        return [_error_report("parse_presentation", exc)]
    out = [CheckReport("parse_presentation", True, 0.0, None, 0, law="parse_presentation",
                       detail=f"{len(p.checks)} named checks")]
    comp = _complements(p, args)
    if comp is not None:
        try:
            reduced_bundle(p.glued, comp)
            out.append(CheckReport("reduced_bundle", True, 0.0, None, 0, law="reduced_bundle",
                                   detail=f"splitting at {sorted(map(str, comp))}"))
        except (DGlueError, ValueError, ArithmeticError) as exc:
            out.append(_error_report("reduced_bundle", exc))
    for chk in p.checks:
        try:
            out.append(_named_check(p, chk, args))
        except (DGlueError, ValueError, ArithmeticError) as exc:
            out.append(_error_report(chk["name"], exc))
    return out


def _induced_checks(p: Presentation, args, only: str | None = None) -> list[CheckReport]:
    ind = p.induce
    if not ind.get("connections"):
        raise ValidationError("presentation has no 'induce.connections' pair", invariant="induce_connection")
    c1, c2 = (p.connections[c] for c in ind["connections"])
    gc = C.induce_connection(c1, c2, p.glued, tol=args.tol)
    pts = glued_sample_points(p.space, args.samples, args.seed)
    pairs = [glue_sections_S(p.sections[a], p.sections[b], p.glued, args.tol)
             for a, b in ind.get("sections", [])]
    out = []
    if ind.get("metrics") and only in (None, "induced_metric_compatible"):
        g1, g2 = (p.metrics[g] for g in ind["metrics"])
        gm = C.induced_pseudo_metric(g1, g2, p.glued, args.tol)
        tests = [(s, t) for i, s in enumerate(pairs) for t in pairs[i:]]
        out.append(C.induced_metric_compatibility_check(gc, gm, tests, pts, args.tol))
    if ind.get("functions") and only in (None, "glued_leibniz"):
        h = p.glued_function(*ind["functions"])
        for i, s in enumerate(pairs):
            rep = C.glued_leibniz_check(gc, h, s, pts, args.tol)
            rep.name = f"glued_leibniz_check[{i}]"
            out.append(rep)
    for r in out:
        r.seed = args.seed
    return out


def cmd_induce(args) -> tuple[list[CheckReport], list[str]]:
    try:
        p = parse_presentation(args.file)
        c1, c2 = (p.connections[c] for c in p.induce.get("connections", ()))
    except (ParseError, ValidationError) as exc:
        return [_error_report("parse_presentation", exc)], []
    except ValueError:
        return [_error_report("induce_connection",
                              ValidationError("presentation has no 'induce.connections' pair"))], []
    try:
        gc = C.induce_connection(c1, c2, p.glued, tol=args.tol)
    except (DGlueError, ValueError) as exc:
        return [_error_report("induce_connection", exc)], []
    cert = gc.certificate
    cert.name = "induce_connection: compatibility certificate"
    lines = ["∇∪ ="] + [f"  {cond}:  {formula}" for cond, formula in C.glued_formula(gc)]
    try:
        extra = _induced_checks(p, args)
    except (DGlueError, ValueError, ArithmeticError) as exc:
        extra = [_error_report("induced_checks", exc)]
    return [cert] + extra, lines


def cmd_demo(args) -> tuple[list[CheckReport], list[str]]:
    lines: list[str] = []
    if args.name == "wedge":
        d = demos.wedge_demo(samples=args.samples if args.samples_given else 100, seed=args.seed)
        lines.append("∇∪ =")
        lines += [f"  {cond}:  {formula}" for cond, formula in C.glued_formula(d.wedge.glued)]
        lines.append(f"s = ({demos.E.to_text(demos.WEDGE_S1)}) ∪ ({demos.E.to_text(demos.WEDGE_S2)})")
        lines.append("point            ∇∪s")
        for kind, x, vals in d.rows[:8] + d.rows[-1:]:
            lines.append(f"{kind}({x:+.6f})  " + ", ".join(f"{v:+.12f}" for v in vals))
        lines.append(f"... {len(d.rows)} points evaluated")
        reports = list(d.reports)
    elif args.name == "delta":
        demo = demos.delta_table()
        lines.append("x          (h∘p)(x)")
        for x, v in demo.table[:1] + demo.table[1:201:25]:
            lines.append(f"{x:+.3f}     {v:g}")
        reports = [demos.delta_report()]
    else:
        reports = demos.dim_witness_reports(seed=args.seed)
        lines += [f"k={i + 1}: s = {r.extra['section']}" for i, r in enumerate(reports)]
    for r in reports:
        r.seed = args.seed
    return reports, lines


def cmd_suite(args) -> list[CheckReport]:
    return run_suite(args.name, seed=args.seed, samples=args.samples, tol=args.tol)


# -- entry point ----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="seed for every random draw (default 0)")
    common.add_argument("--samples", type=int, default=None,
                        help=f"sample points per check (default {DEFAULT_SAMPLES})")
    common.add_argument("--tol", type=float, default=1e-9, help="residual tolerance (default 1e-9)")
    common.add_argument("--report", type=Path, default=None, help="write the JSON report here")
    common.add_argument("--complement", action="append", default=[], metavar="POINT=VECTOR",
                        help="complement to the kernel at a locus point, e.g. 0=1,1 or *=1,1; repeatable")
    common.add_argument("--timing", action="store_true",
                        help="add wall times to the report (breaks byte-identical output)")

    ap = argparse.ArgumentParser(prog="dglue", description=__doc__)
    ap.add_argument("--version", action="version", version=f"dglue {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)
    p = sub.add_parser("check", parents=[common], help="validate a presentation and run its named checks")
    p.add_argument("file")
    p = sub.add_parser("induce-connection", parents=[common], help="build ∇∪ and print its three branches")
    p.add_argument("file")
    p = sub.add_parser("demo", parents=[common], help="worked examples")
    p.add_argument("name", choices=["wedge", "delta", "dim-witness"])
    p = sub.add_parser("suite", parents=[common], help="seeded property suites")
    p.add_argument("name", choices=sorted(SUITES))
    return ap


def run(argv=None) -> tuple[int, dict, list[str]]:
    args = build_parser().parse_args(argv)
    args.samples_given = args.samples is not None
    if args.samples is None:
        args.samples = DEFAULT_SAMPLES
    if args.seed < 0 or args.seed >= 2 ** 64:
        raise SystemExit("dglue: --seed must be an unsigned 64-bit integer")
    if args.samples < 1:
        raise SystemExit("dglue: --samples must be positive")
    try:
        parse_complements(args.complement)
    except ParseError as exc:
        raise SystemExit(f"dglue: {exc}") from None

    t0 = time.perf_counter()
    lines: list[str] = []
    if args.command == "check":
        reports = cmd_check(args)
    elif args.command == "induce-connection":
        reports, lines = cmd_induce(args)
    elif args.command == "demo":
        reports, lines = cmd_demo(args)
    else:
        reports = cmd_suite(args)
    elapsed = time.perf_counter() - t0

    reports = sorted(reports, key=lambda r: r.name)
    ok = all(reports)
    doc = {
        "schema_version": REPORT_SCHEMA,
        "command": args.command,
        "target": getattr(args, "file", None) or getattr(args, "name", None),
        "seed": args.seed,
        "samples": args.samples,
        "tol": args.tol,
        "passed": ok,
        "checks": [r.to_dict() for r in reports],
    }
    if args.timing:
        doc["wall_time_s"] = round(elapsed, 6)
    lines += [r.line() for r in reports]
    lines.append(f"{'OK' if ok else 'FAILED'}: {sum(map(bool, reports))}/{len(reports)} checks passed")
    if args.report is not None:
        args.report.write_text(json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n",
                               encoding="utf-8")
    return (0 if ok else 1), doc, lines


def main(argv=None) -> int:
    code, _, lines = run(argv)
    sys.stdout.write("\n".join(lines) + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
