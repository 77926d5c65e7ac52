"""Label equations of a diagram as a polynomial residual map.

Unknowns are one complex label per edge, taken on the black side, followed by
one crossing label per crossing.  The white-side label of edge e is
``u_black - kappa_e``.  Each region contributes the three entries of its
ordered Moebius product that must vanish for the product to be scalar.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .diagram import PlanarDiagram, Region, Side, validate
from .moebius import crossing_matrix, translation

E12 = np.array([[0, 1], [0, 0]], dtype=complex)


# 2x2 matrices as (a, b, c, d) tuples of Python complex numbers; the region
# products are short and this is much faster than tiny numpy arrays
_I = (1, 0, 0, 1)


def _mul(m, n):
    a, b, c, d = m
    e, f, g, h = n
    return (a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)


def _block(w, t):
    """W(w) T(t) = [[0, -w], [1, t]]."""
    return (0, -w, 1, t)


class UnvalidatedDiagram(ValueError):
    pass


class ZeroEdgeLabel(ZeroDivisionError):
    pass


def shape_from_labels(w: complex, u1: complex, u2: complex, kappa: int) -> complex:
    """Conjugate shape parameter kappa*w/(u1*u2) at a region corner."""
    if u1 == 0 or u2 == 0:
        raise ZeroEdgeLabel("edge label vanishes at a corner")
    return kappa * w / (u1 * u2)


@dataclass
class LabelAssignment:
    u: dict[Side, complex]
    w: dict[int, complex]


@dataclass
class ResidualSystem:
    diagram: PlanarDiagram
    regions: tuple[Region, ...] = field(init=False)

    def __post_init__(self):
        d = self.diagram
        self.regions = d.regions
        self.edges = d.edges
        self.edge_index = {e: i for i, e in enumerate(d.edges)}
        self.ne = len(d.edges)
        self.nc = d.num_crossings
        self.n_unknowns = self.ne + self.nc
        # per side: (column, offset) with u_side = x[column] - offset
        self._side = {}
        for e in d.edges:
            kap = d.edge_kappa[e]
            for left in (True, False):
                s = Side(e, left)
                off = 0 if d.black_side[e] == s else kap
                self._side[s] = (self.edge_index[e], off)
        self.bigon_sides = [s for r in self.regions if r.n == 2 for s in r.sides]
        self.n_residuals = 3 * len(self.regions) + len(self.bigon_sides)
        self._plan = []
        for r in self.regions:
            ucols = np.array([self._side[s][0] for s in r.sides])
            uoff = np.array([self._side[s][1] for s in r.sides], dtype=float)
            wcols = np.array([self.ne + k for k in r.crossings])
            self._plan.append((ucols, uoff, np.array(r.eps, dtype=float), wcols))
        self._lists = [tuple(a.tolist() for a in plan) for plan in self._plan]

    # -- label bookkeeping ------------------------------------------------

    def side_label(self, x: np.ndarray, side: Side) -> complex:
        col, off = self._side[side]
        return x[col] - off

    def expand(self, x: np.ndarray) -> LabelAssignment:
        u = {s: complex(self.side_label(x, s)) for s in self._side}
        w = {k: complex(x[self.ne + k]) for k in range(self.nc)}
        return LabelAssignment(u, w)

    def reduce(self, labels: LabelAssignment) -> np.ndarray:
        x = np.zeros(self.n_unknowns, dtype=complex)
        for e in self.edges:
            x[self.edge_index[e]] = labels.u[self.diagram.black_side[e]]
        for k, w in labels.w.items():
            x[self.ne + k] = w
        return x

    def edge_relation_defect(self, labels: LabelAssignment) -> float:
        d = self.diagram
        return max(abs(labels.u[d.black_side[e]] - labels.u[Side(e, not d.black_side[e].left)]
                       - d.edge_kappa[e]) for e in self.edges)

    def crossing_labels(self, x) -> np.ndarray:
        return np.asarray(x)[self.ne:]

    def black_labels(self, x) -> np.ndarray:
        return np.asarray(x)[:self.ne]

    # -- residuals --------------------------------------------------------

    def region_factors(self, x: np.ndarray, i: int, start: int = 0) -> list[np.ndarray]:
        """Factors W(w_j) T(eps_j u_j), first-applied first, from corner ``start``."""
        ucols, uoff, eps, wcols = self._plan[i]
        n = len(ucols)
        out = []
        for j in list(range(start, n)) + list(range(start)):
            u = x[ucols[j]] - uoff[j]
            out.append(crossing_matrix(x[wcols[j]]) @ translation(eps[j] * u))
        return out

    def region_product(self, x: np.ndarray, i: int, start: int = 0) -> np.ndarray:
        p = np.eye(2, dtype=complex)
        for b in self.region_factors(x, i, start):
            p = b @ p
        return p

    def residual(self, x: np.ndarray) -> np.ndarray:
        xs = [complex(v) for v in np.asarray(x)]
        out = np.empty(self.n_residuals, dtype=complex)
        for i, (ucols, uoff, eps, wcols) in enumerate(self._lists):
            p = _I
            for uc, uo, ep, wc in zip(ucols, uoff, eps, wcols):
                p = _mul(_block(xs[wc], ep * (xs[uc] - uo)), p)
            out[3 * i:3 * i + 3] = (p[1], p[2], p[0] - p[3])
        base = 3 * len(self.regions)
        for j, s in enumerate(self.bigon_sides):
            out[base + j] = self.side_label(x, s)
        return out

    def region_residual(self, labels: LabelAssignment, i: int) -> np.ndarray:
        """Residual entries of region i evaluated on explicit side labels.

        Unlike :meth:`residual` this does not tie the two sides of an edge
        together, so single sides may be changed independently.
        """
        r = self.regions[i]
        p = _I
        for side, k, ep in zip(r.sides, r.crossings, r.eps):
            p = _mul(_block(labels.w[k], ep * labels.u[side]), p)
        out = [p[1], p[2], p[0] - p[3]]
        if r.n == 2:
            out += [labels.u[s] for s in r.sides]
        return np.array(out, dtype=complex)

    def jacobian(self, x: np.ndarray) -> np.ndarray:
        """Complex Jacobian d(residual)/d(x); the map is holomorphic."""
        xs = [complex(v) for v in np.asarray(x)]
        J = np.zeros((self.n_residuals, self.n_unknowns), dtype=complex)
        for i, (ucols, uoff, eps, wcols) in enumerate(self._lists):
            n = len(ucols)
            B = [_block(xs[wcols[j]], eps[j] * (xs[ucols[j]] - uoff[j])) for j in range(n)]
            # pre[j] = B_{j-1} ... B_0, post[j] = B_{n-1} ... B_{j+1}
            pre = [_I]
            for j in range(n - 1):
                pre.append(_mul(B[j], pre[-1]))
            post = [_I] * n
            acc = _I
            for j in range(n - 1, -1, -1):
                post[j] = acc
                acc = _mul(acc, B[j])
            for j in range(n):
                # dB/du = [[0,0],[0,eps]], dB/dw = [[0,-1],[0,0]]
                du = _mul(post[j], _mul((0, 0, 0, eps[j]), pre[j]))
                dw = _mul(post[j], _mul((0, -1, 0, 0), pre[j]))
                for col, d in ((ucols[j], du), (wcols[j], dw)):
                    J[3 * i, col] += d[1]
                    J[3 * i + 1, col] += d[2]
                    J[3 * i + 2, col] += d[0] - d[3]
        base = 3 * len(self.regions)
        for j, s in enumerate(self.bigon_sides):
            J[base + j, self._side[s][0]] = 1.0
        return J

    # -- derived ----------------------------------------------------------

    def corner_shapes(self, x: np.ndarray, i: int) -> list[complex]:
        """Conjugate shape parameters around region i (None where undefined)."""
        r = self.regions[i]
        out = []
        for j, c in enumerate(r.corners):
            u1 = self.side_label(x, c.before)
            u2 = self.side_label(x, c.after)
            try:
                out.append(complex(shape_from_labels(x[self.ne + c.crossing], u1, u2, c.kappa)))
            except ZeroEdgeLabel:
                out.append(None)
        return out


def assemble(diagram: PlanarDiagram, assume_taut: bool = False) -> ResidualSystem:
    report = validate(diagram, assume_taut=assume_taut)
    if not report.accepted:
        raise UnvalidatedDiagram("; ".join(report.reasons))
    return ResidualSystem(diagram)
