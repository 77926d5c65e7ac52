"""Machine-readable run reports.

Complex numbers are written as ``[re, im]`` pairs rounded to 15 significant
digits, and keys are sorted, so a fixed input and seed give byte-identical
output.  The schema lives next to this module in ``report.schema.json``.
"""

from __future__ import annotations

import json
from importlib import resources

import numpy as np

from .analysis import expanded_meridian, geodesic_report
from .diagram import PlanarDiagram
from .equations import LabelAssignment, ResidualSystem
from .holonomy import parabolic_rep, verify
from .moebius import DegenerateShape, develop_region
from .solver import Solution

SCHEMA_VERSION = "1.0"
WHITE_SIDE_RULE = "u_white = u_black - kappa_edge"
DIGITS = 15


class SchemaError(ValueError):
    pass


def real(x: float) -> float:
    v = float(f"{float(x):.{DIGITS}g}")
    return 0.0 if v == 0 else v


def cplx(z) -> list[float]:
    z = complex(z)
    return [real(z.real), real(z.imag)]


def from_pair(p) -> complex:
    if not (isinstance(p, list) and len(p) == 2 and all(isinstance(v, (int, float)) for v in p)):
        raise SchemaError(f"expected [re, im], got {p!r}")
    return complex(p[0], p[1])


def matrix(m) -> list[list[list[float]]]:
    return [[cplx(m[i, j]) for j in range(2)] for i in range(2)]


def schema() -> dict:
    text = resources.files("linklabels").joinpath("report.schema.json").read_text()
    return json.loads(text)


def solution_record(system: ResidualSystem, sol: Solution) -> dict:
    d = system.diagram
    x = sol.x
    return {
        "edge_labels": {str(e): cplx(system.side_label(x, d.black_side[e])) for e in d.edges},
        "black_side": {str(e): "left" if d.black_side[e].left else "right" for e in d.edges},
        "crossing_labels": [cplx(w) for w in system.crossing_labels(x)],
        "shape_parameters": [[None if z is None else cplx(z) for z in row] for row in sol.shapes],
        "max_residual": real(sol.max_residual),
        "regularity": real(sol.regularity) if np.isfinite(sol.regularity) else None,
        "tags": {
            "real": bool(sol.tags.get("real")),
            "nonzero_edge_labels": bool(sol.tags.get("nonzero_edge_labels")),
            "nonneg_imag": bool(sol.tags.get("nonneg_imag")),
            "conjugate_partner": sol.tags.get("conjugate_partner"),
            "geometric_candidate": bool(sol.tags.get("geometric_candidate", False)),
        },
    }


def labels_from_record(system: ResidualSystem, rec: dict) -> LabelAssignment:
    """Inverse of :func:`solution_record` for the label part."""
    if not isinstance(rec, dict):
        raise SchemaError("solution must be an object")
    for key in ("edge_labels", "crossing_labels"):
        if key not in rec:
            raise SchemaError(f"missing key {key!r}")
    d = system.diagram
    edges = rec["edge_labels"]
    if not isinstance(edges, dict) or sorted(edges) != sorted(str(e) for e in d.edges):
        raise SchemaError("edge_labels must name every edge of the diagram exactly once")
    ws = rec["crossing_labels"]
    if not isinstance(ws, list) or len(ws) != d.num_crossings:
        raise SchemaError(f"crossing_labels needs {d.num_crossings} entries")
    x = np.zeros(system.n_unknowns, dtype=complex)
    for e in d.edges:
        x[system.edge_index[e]] = from_pair(edges[str(e)])
    for k, p in enumerate(ws):
        x[system.ne + k] = from_pair(p)
    return system.expand(x)


def holonomy_record(diagram: PlanarDiagram, labels: LabelAssignment) -> tuple[dict, bool]:
    rep = parabolic_rep(diagram, labels)
    ver = verify(rep)
    rec = {
        "generators": [matrix(g) for g in rep.generators],
        "max_relator_deviation": real(ver.max_relator_deviation),
        "max_trace_defect": real(ver.max_trace_defect),
        "relative_relator_deviation": real(ver.relative_relator_deviation),
        "relative_trace_defect": real(ver.relative_trace_defect),
        "generator_scale": real(ver.scale),
        "ok": bool(ver.ok),
    }
    return rec, ver.ok


def geodesic_record(system: ResidualSystem, sol: Solution) -> dict:
    g = geodesic_report(system, sol)
    ell, touching = expanded_meridian(system, sol)
    return {
        "crossings": [{"distance": real(c.distance), "angle": real(c.angle)} for c in g.crossings],
        "regularity_deviation": real(g.regularity),
        "degenerate": bool(g.degenerate),
        "expanded_meridian": real(ell),
        "cusps_touch": bool(touching),
    }


def vertices_record(system: ResidualSystem, sol: Solution) -> list:
    out = []
    for r, shapes in zip(system.regions, sol.shapes):
        if r.n < 3 or any(z is None for z in shapes):
            out.append({"face": r.face, "vertices": None, "closure": None})
            continue
        try:
            verts, err = develop_region(shapes)
        except DegenerateShape:
            out.append({"face": r.face, "vertices": None, "closure": None})
            continue
        out.append({"face": r.face,
                    # None marks the vertex at infinity
                    "vertices": [None if v is None else cplx(v) for v in verts],
                    "closure": real(err)})
    return out


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, allow_nan=False) + "\n"


def validate_report(obj: dict) -> None:
    """Check a report against the published schema."""
    import jsonschema

    try:
        jsonschema.validate(obj, schema())
    except jsonschema.ValidationError as ex:
        raise SchemaError(ex.message) from None
