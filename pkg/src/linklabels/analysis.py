"""Geometric quantities read off a solution, and the tangle toolkit.

A crossing label w has modulus exp(-d), where d is the distance between
the two cusp horospheres along the crossing geodesic, and argument equal to
the turning angle between the two strands plus pi.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .equations import ResidualSystem, ZeroEdgeLabel, shape_from_labels
from .moebius import regular_shape
from .solver import Solution
from .tangles import (  # noqa: F401  (re-exported toolkit)
    ENCIRCLED,
    EncircledDiagram,
    FlypeMove,
    FlypeReport,
    IllegalFlype,
    PatternNotFound,
    ScaleReport,
    Tangle,
    TangleBoundary,
    WrongEndCount,
    ZeroScale,
    boundary_labels,
    encircle,
    encircled_census,
    flype_compare,
    geodesic_label,
    scale_boundary,
)

# |w| at or above this is treated as touching horoballs
TANGENCY_TOL = 1e-12


@dataclass
class CrossingGeodesic:
    crossing: int
    w: complex
    distance: float           # -ln|w|; 0 or negative when the cusps touch
    angle: float              # arg(-w)
    shapes: list[complex | None]
    degenerate: bool


@dataclass
class GeodesicReport:
    crossings: list[CrossingGeodesic]
    regularity: float
    degenerate: bool


def distance(w: complex) -> float:
    if w == 0:
        return math.inf
    return -math.log(abs(w))


def angle(w: complex) -> float:
    return float(np.angle(-w))


def _corner_shapes(system: ResidualSystem, x: np.ndarray) -> dict[int, list[complex | None]]:
    out: dict[int, list[complex | None]] = {k: [] for k in range(system.nc)}
    for r in system.regions:
        for c in r.corners:
            u1 = system.side_label(x, c.before)
            u2 = system.side_label(x, c.after)
            try:
                out[c.crossing].append(complex(shape_from_labels(
                    x[system.ne + c.crossing], u1, u2, c.kappa)))
            except ZeroEdgeLabel:
                out[c.crossing].append(None)
    return out


def regularity_deviation(system: ResidualSystem, x: np.ndarray) -> float:
    """Largest distance of a corner shape from the regular polygon value."""
    worst = 0.0
    for i, r in enumerate(system.regions):
        if r.n < 3:
            continue
        target = regular_shape(r.n)
        for z in system.corner_shapes(x, i):
            if z is not None:
                worst = max(worst, abs(z - target))
    return worst


def geodesic_report(system: ResidualSystem, solution: Solution | np.ndarray) -> GeodesicReport:
    x = solution.x if isinstance(solution, Solution) else np.asarray(solution)
    shapes = _corner_shapes(system, x)
    rows = []
    for k in range(system.nc):
        w = complex(x[system.ne + k])
        deg = abs(w) >= 1 - TANGENCY_TOL
        rows.append(CrossingGeodesic(k, w, distance(w), angle(w), shapes[k], deg))
    return GeodesicReport(rows, regularity_deviation(system, x), any(r.degenerate for r in rows))


def expanded_meridian(system: ResidualSystem, solution: Solution | np.ndarray) -> tuple[float, bool]:
    """Meridian length once equal cusps are grown until two of them touch.

    The closest pair of horoballs lies across the crossing with the largest
    |w|; scaling horoball heights so they meet there multiplies meridians
    by |w|^(-1/2).  The flag reports that two cusps already touch.
    """
    x = solution.x if isinstance(solution, Solution) else np.asarray(solution)
    wmax = float(np.max(np.abs(system.crossing_labels(x))))
    return wmax ** -0.5, wmax >= 1 - TANGENCY_TOL
