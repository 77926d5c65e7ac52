"""Command-line front end: ``linklabels solve | census | verify``.

Exit codes: 0 for a certified geometric candidate (or a passing check),
1 for input errors, 2 when no candidate survives or a tolerance is exceeded.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path

import numpy as np

from . import census, checks
from .diagram import DiagramError, PlanarDiagram, format_pd, parse_pd
from .equations import UnvalidatedDiagram, assemble
from .report import (
    SCHEMA_VERSION,
    WHITE_SIDE_RULE,
    SchemaError,
    cplx,
    dumps,
    geodesic_record,
    holonomy_record,
    labels_from_record,
    real,
    solution_record,
    vertices_record,
)
from .solver import (
    ACCEPT_TOL,
    DEFAULT_BUDGET,
    NoCandidate,
    NoConvergence,
    select_geometric,
    solve_all,
    solve_symmetric,
)

RESTARTS_ENV = "LINKLABELS_RESTARTS"
# above this many crossings L_n is searched in its symmetric subspace
LN_FULL_SEARCH_MAX = 12

log = logging.getLogger("linklabels")


class ToleranceExceeded(RuntimeError):
    pass


def default_restarts() -> int:
    raw = os.environ.get(RESTARTS_ENV)
    if raw is None:
        return DEFAULT_BUDGET
    try:
        n = int(raw)
    except ValueError:
        raise SystemExit(f"error: {RESTARTS_ENV} must be an integer, got {raw!r}") from None
    return n


def load_pd(path: str) -> PlanarDiagram:
    return parse_pd(Path(path).read_text())


def run(diagram: PlanarDiagram, *, seed: int, restarts: int, tol: float, all_solutions: bool,
        name: str | None = None, assume_taut: bool = False, symmetry=None,
        dump_vertices: bool = False) -> tuple[dict, int, object]:
    """The full pipeline; returns (report, exit code, context for further checks)."""
    system = assemble(diagram, assume_taut=assume_taut)
    report: dict = {
        "schema_version": SCHEMA_VERSION,
        "input": {
            "pd": [list(x) for x in diagram.pd],
            "crossings": diagram.num_crossings,
            "regions": len(diagram.regions),
            "alternating": diagram.is_alternating(),
            "seed": seed,
            "restarts": restarts,
            "tol": tol,
            "search": "symmetric" if symmetry is not None else "full",
        },
        "white_side_rule": WHITE_SIDE_RULE,
        "solutions": [],
        "selected": None,
        "status": "no_solution",
    }
    if name is not None:
        report["input"]["name"] = name
    try:
        if symmetry is not None:
            sols = solve_symmetric(system, symmetry, budget=restarts, seed=seed, tol=tol)
        else:
            sols = solve_all(system, budget=restarts, seed=seed, tol=tol)
    except NoConvergence as ex:
        log.error("%s", ex)
        return report, 2, (system, None, [])
    try:
        geo = select_geometric(sols, diagram.is_alternating())
    except NoCandidate as ex:
        log.error("%s", ex)
        report["status"] = "no_candidate"
        report["solutions"] = [solution_record(system, s) for s in sols]
        return report, 2, (system, None, sols)
    geo.tags["geometric_candidate"] = True
    shown = sols if all_solutions else [geo]
    report["solutions"] = [solution_record(system, s) for s in shown]
    report["selected"] = next(i for i, s in enumerate(shown) if s is geo)
    hol, ok = holonomy_record(diagram, system.expand(geo.x))
    report["holonomy"] = hol
    report["geodesics"] = geodesic_record(system, geo)
    if dump_vertices:
        report["vertices"] = vertices_record(system, geo)
    report["status"] = "geometric" if ok else "no_candidate"
    return report, 0 if ok else 2, (system, geo, sols)


def _emit(report: dict, out: str | None) -> None:
    text = dumps(report)
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _summary(report: dict) -> str:
    inp = report["input"]
    n = len(report["solutions"])
    return (f"{inp.get('name', 'diagram')}: c={inp['crossings']} regions={inp['regions']} "
            f"alternating={inp['alternating']} solutions_reported={n} status={report['status']}")


def cmd_solve(args) -> int:
    try:
        d = load_pd(args.pd)
        report, code, ctx = run(d, seed=args.seed, restarts=args.restarts, tol=args.tol,
                                all_solutions=args.all_solutions, assume_taut=args.assume_taut,
                                name=Path(args.pd).name, dump_vertices=bool(args.dump_vertices))
    except OSError as ex:
        print(f"error: cannot read {args.pd}: {ex.strerror or ex}", file=sys.stderr)
        return 1
    except (DiagramError, UnvalidatedDiagram) as ex:
        print(f"error: {type(ex).__name__}: {ex}", file=sys.stderr)
        return 1
    if args.dump_vertices and "vertices" in report:
        Path(args.dump_vertices).write_text(dumps(report.pop("vertices")))
    _emit(report, args.json)
    print(_summary(report), file=sys.stderr)
    return code


def census_report(name: str, seed: int = 0, restarts: int | None = None,
                  all_solutions: bool = True) -> tuple[dict, int]:
    """Solve a census diagram and compare with its stored reference values."""
    d = census.diagram(name)
    symmetry = None
    if name.startswith("Ln:") and int(name[3:]) > LN_FULL_SEARCH_MAX:
        symmetry = census.L_symmetry(int(name[3:]))
    budget = restarts if restarts is not None else default_restarts()
    if symmetry is not None:
        budget = min(budget, 24)
    report, code, (system, geo, sols) = run(d, seed=seed, restarts=budget, tol=ACCEPT_TOL,
                                            all_solutions=all_solutions, name=name,
                                            symmetry=symmetry)
    if geo is None:
        return report, code
    found: list[checks.Check] = []
    if name == "fig8":
        found = checks.fig8(system, geo, sols)
    elif name == "turks_head":
        found = checks.turks_head(system, geo, sols)
    elif name == "borromean":
        found = checks.ln_quadratic(3, system, geo)
    elif name.startswith("Ln:"):
        found = checks.ln_quadratic(int(name[3:]), system, geo)
    elif name == "9a37":
        found = checks.shapes_9a37(system, geo)
    elif name == "11a79":
        found = checks.shapes_11a79(system, geo)
    elif name.startswith("encircled:"):
        found, info = checks.encircled(name.split(":", 1)[1], system, geo)
        report["tangle"] = _tangle_record(info)
    report["checks"] = [c.record() for c in found]
    if code == 0 and not all(c.ok for c in found):
        code = 2
    return report, code


def _tangle_record(info: dict) -> dict:
    def opt(z):
        return None if z is None else cplx(z)

    return {
        "parallel": info["parallel"],
        "disk_label": cplx(info["disk_label"]),
        "triangle": opt(info["triangle"]),
        "arc_labels": [opt(z) for z in info["arc_labels"]],
        "inner_labels": [cplx(z) for z in info["inner_labels"]],
        "crossing_labels": [cplx(z) for z in info["crossing_labels"]],
        "crossing_signs": list(info["crossing_signs"]),
    }


def cmd_census(args) -> int:
    if args.list or not args.name:
        from .tangles import ENCIRCLED

        for n in census.NAMES:
            print(n)
        for v in sorted(ENCIRCLED):
            print(f"  encircled:{v}")
        return 0
    try:
        report, code = census_report(args.name, seed=args.seed, restarts=args.restarts,
                                     all_solutions=True)
    except census.UnknownCensusName as ex:
        print(f"error: unknown census name {ex}", file=sys.stderr)
        return 1
    except KeyError as ex:
        print(f"error: {ex.args[0] if ex.args else ex}", file=sys.stderr)
        return 1
    if args.pd_out:
        Path(args.pd_out).write_text(format_pd(census.diagram(args.name)))
    _emit(report, args.json)
    for c in report.get("checks", []):
        print(f"{'PASS' if c['ok'] else 'FAIL'} {c['name']} (error {c['error']})", file=sys.stderr)
    print(_summary(report), file=sys.stderr)
    return code


def verify_solution(diagram: PlanarDiagram, payload, tol: float = 1e-8,
                    assume_taut: bool = False) -> dict:
    """Check a solution without solving; raises SchemaError or ToleranceExceeded."""
    if isinstance(payload, dict) and "solutions" in payload:
        sel = payload.get("selected")
        if not isinstance(sel, int) or not 0 <= sel < len(payload["solutions"]):
            raise SchemaError("report has no selected solution")
        rec = payload["solutions"][sel]
    else:
        rec = payload
    if not rec:
        raise SchemaError("empty solution")
    system = assemble(diagram, assume_taut=assume_taut)
    labels = labels_from_record(system, rec)
    x = system.reduce(labels)
    res = float(np.max(np.abs(system.residual(x))))
    hol, ok = holonomy_record(diagram, labels)
    from .solver import _describe

    tags = _describe(system, x, res, 0).tags
    given = rec.get("tags", {}) if isinstance(rec, dict) else {}
    mismatched = sorted(k for k in ("real", "nonzero_edge_labels", "nonneg_imag")
                        if k in given and bool(given[k]) != bool(tags[k]))
    out = {"max_residual": real(res), "max_relator_deviation": hol["max_relator_deviation"],
           "relative_relator_deviation": hol["relative_relator_deviation"],
           "max_trace_defect": hol["max_trace_defect"], "tag_mismatches": mismatched}
    problems = []
    if res > tol:
        problems.append(f"residual {res:.3g} > {tol:g}")
    if hol["relative_relator_deviation"] > tol or hol["relative_trace_defect"] > tol:
        problems.append(f"relative relator deviation {hol['relative_relator_deviation']:.3g}")
    if mismatched:
        problems.append(f"tags disagree: {', '.join(mismatched)}")
    if problems:
        raise ToleranceExceeded("; ".join(problems))
    return out


def cmd_verify(args) -> int:
    import json

    try:
        d = load_pd(args.pd)
        payload = json.loads(Path(args.solution).read_text())
    except OSError as ex:
        print(f"error: cannot read input: {ex}", file=sys.stderr)
        return 1
    except (DiagramError, ValueError) as ex:
        print(f"error: {type(ex).__name__}: {ex}", file=sys.stderr)
        return 1
    try:
        out = verify_solution(d, payload, tol=args.tol, assume_taut=args.assume_taut)
    except (SchemaError, UnvalidatedDiagram) as ex:
        print(f"error: {type(ex).__name__}: {ex}", file=sys.stderr)
        return 1
    except ToleranceExceeded as ex:
        print(f"ToleranceExceeded: {ex}", file=sys.stderr)
        return 2
    sys.stdout.write(dumps(out))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="linklabels",
                                description="Hyperbolic structures of link complements from diagram labels.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="solve the label equations of a PD file")
    s.add_argument("pd")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--restarts", type=int, default=None,
                   help=f"number of starts (default {DEFAULT_BUDGET}, or ${RESTARTS_ENV})")
    s.add_argument("--tol", type=float, default=ACCEPT_TOL)
    s.add_argument("--all-solutions", action="store_true")
    s.add_argument("--json", metavar="OUT")
    s.add_argument("--dump-vertices", metavar="OUT")
    s.add_argument("--assume-taut", action="store_true")
    s.set_defaults(func=cmd_solve)

    c = sub.add_parser("census", help="solve a named diagram and check reference values")
    c.add_argument("name", nargs="?")
    c.add_argument("--list", action="store_true")
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--restarts", type=int, default=None)
    c.add_argument("--json", metavar="OUT")
    c.add_argument("--pd-out", metavar="FILE", help="also write the diagram as a PD file")
    c.set_defaults(func=cmd_census)

    v = sub.add_parser("verify", help="check a solution JSON without solving")
    v.add_argument("pd")
    v.add_argument("solution")
    v.add_argument("--tol", type=float, default=1e-8)
    v.add_argument("--assume-taut", action="store_true")
    v.set_defaults(func=cmd_verify)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if hasattr(args, "restarts"):
        if args.restarts is None:
            args.restarts = default_restarts()
        if args.restarts < 1:
            print("error: --restarts must be at least 1", file=sys.stderr)
            return 1
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
