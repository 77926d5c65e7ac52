"""Parabolic representation of the link group induced by a label solution.

Frames live at piercing points: a node ``(crossing, level, quadrant)`` is the
point where the crossing geodesic meets the tube of the under- or over-strand,
reached from above the diagram through the given quadrant of the crossing
(quadrant q lies between slots q and q+1, counterclockwise).  Three kinds of
step connect nodes:

* the vertical arc at a crossing, carrying ``[[0,-w],[1,0]]``;
* a torus arc along one side of an edge, carrying ``[[1,+-u],[0,1]]`` with
  the sign given by travel along or against the edge orientation;
* a change of quadrant at the same node.  Passing across the under-strand is
  free; passing across the over-strand wraps once around it, a meridian loop
  ``[[1,+-1],[0,1]]`` seen from the over node.

Composing steps from a basepoint gives a matrix M per node, and the meridian
of the strand there maps to ``M [[1,1],[0,1]] M^-1``.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .diagram import PlanarDiagram, Side, Slot
from .equations import LabelAssignment
from .moebius import crossing_matrix, distance_from_identity, normalize, projective_distance, translation

UNDER = 0
OVER = 1

MERIDIAN = translation(1)


class Unreachable(RuntimeError):
    pass


# -- Wirtinger presentation ---------------------------------------------------

class Relation(NamedTuple):
    crossing: int
    over: int
    incoming: int
    outgoing: int
    sign: int

    def word(self) -> list[tuple[int, int]]:
        """Relator as (generator, exponent) pairs; equals 1 in the group."""
        o, a, b = self.over, self.incoming, self.outgoing
        if self.sign > 0:
            # b = o^-1 a o
            return [(o, -1), (a, 1), (o, 1), (b, -1)]
        return [(o, 1), (a, 1), (o, -1), (b, -1)]


@dataclass
class WirtingerPresentation:
    arcs: list[tuple[int, ...]]
    edge_arc: dict[int, int]
    relations: list[Relation]
    basepoint: int

    @property
    def n_generators(self) -> int:
        return len(self.arcs)

    def generated_by(self, subset) -> bool:
        """Whether the relations express every generator through ``subset``."""
        known = set(subset)
        changed = True
        while changed:
            changed = False
            for r in self.relations:
                if r.over not in known:
                    continue
                if r.incoming in known and r.outgoing not in known:
                    known.add(r.outgoing)
                    changed = True
                elif r.outgoing in known and r.incoming not in known:
                    known.add(r.incoming)
                    changed = True
        return len(known) == len(self.arcs)


def wirtinger(diagram: PlanarDiagram) -> WirtingerPresentation:
    """Arcs are maximal over-strands; one conjugation relation per crossing."""
    d = diagram
    arcs: list[tuple[int, ...]] = []
    edge_arc: dict[int, int] = {}
    for comp in d.components:
        # an arc starts right after an undercrossing
        starts = [i for i, e in enumerate(comp) if d.tail[e].is_under]
        if not starts:
            arcs.append(tuple(comp))
            for e in comp:
                edge_arc[e] = len(arcs) - 1
            continue
        n = len(comp)
        for j, i0 in enumerate(starts):
            i1 = starts[(j + 1) % len(starts)]
            length = (i1 - i0) % n or n
            arc = tuple(comp[(i0 + t) % n] for t in range(length))
            arcs.append(arc)
            for e in arc:
                edge_arc[e] = len(arcs) - 1
    relations = []
    for k in range(d.num_crossings):
        o_in, _ = d.over_edges(k)
        u_in, u_out = d.under_edges(k)
        relations.append(Relation(k, edge_arc[o_in], edge_arc[u_in], edge_arc[u_out], d.signs[k]))
    return WirtingerPresentation(arcs, edge_arc, relations, edge_arc[min(d.edges)])


# -- path graph -----------------------------------------------------------------

class Node(NamedTuple):
    crossing: int
    level: int
    quadrant: int


class Step(NamedTuple):
    """One move of a path; ``data`` is a side, a crossing or a meridian sign."""

    kind: str          # "edge", "vertical", "switch"
    source: Node
    target: Node
    data: object


@dataclass
class PathGraph:
    diagram: PlanarDiagram
    adjacency: dict[Node, list[Step]] = field(init=False)

    def __post_init__(self):
        d = self.diagram
        adj: dict[Node, list[Step]] = {}
        for k in range(d.num_crossings):
            for lev in (UNDER, OVER):
                for q in range(4):
                    adj[Node(k, lev, q)] = []
        for k in range(d.num_crossings):
            over_in = d.over_in[k]
            for q in range(4):
                a, b = Node(k, UNDER, q), Node(k, OVER, q)
                adj[a].append(Step("vertical", a, b, k))
                adj[b].append(Step("vertical", b, a, k))
                # q -> q+1 crosses the half-edge at slot q+1
                q2 = (q + 1) % 4
                slot = q2
                for lev in (UNDER, OVER):
                    s, t = Node(k, lev, q), Node(k, lev, q2)
                    if slot % 2 == 0:
                        adj[s].append(Step("switch", s, t, 0))
                        adj[t].append(Step("switch", t, s, 0))
                    else:
                        # moving counterclockwise across the over-strand: from
                        # its right to its left iff the strand points out
                        # through this slot, which costs T(-1)
                        sgn = -1 if slot == (over_in + 2) % 4 else 1
                        adj[s].append(Step("switch", s, t, sgn))
                        adj[t].append(Step("switch", t, s, -sgn))
            for pos in range(4):
                here = Slot(k, pos)
                there = d.other_slot(here)
                e = d.edge_at(here)
                along = d.tail[e] == here
                lev = UNDER if here.is_under else OVER
                lev2 = UNDER if there.is_under else OVER
                # walking out through slot pos, quadrant pos is on the left
                for q, q2, walker_left in ((pos, (there.pos - 1) % 4, True),
                                           ((pos - 1) % 4, there.pos, False)):
                    side = Side(e, walker_left == along)
                    s, t = Node(k, lev, q), Node(there.crossing, lev2, q2)
                    adj[s].append(Step("edge", s, t, (side, along)))
        self.adjacency = adj
        qf = {}
        for r in d.regions:
            # a face walk arriving at slot (k, p) leaves through (k, p-1), so
            # the face fills quadrant p-1
            for side, k in zip(r.sides, r.crossings):
                arrive = d.head[side.edge] if side.left else d.tail[side.edge]
                qf[(k, (arrive.pos - 1) % 4)] = r.face
        self._quadrant_face = qf

    @property
    def nodes(self) -> list[Node]:
        return list(self.adjacency)

    def region_of(self, node: Node) -> int:
        """Face index occupying the node's quadrant."""
        return self._quadrant_face[(node.crossing, node.quadrant)]

    def quadrant_of(self, crossing: int, face: int) -> int:
        for q in range(4):
            if self._quadrant_face[(crossing, q)] == face:
                return q
        raise KeyError(f"face {face} does not meet crossing {crossing}")

    def step_matrix(self, step: Step, labels: LabelAssignment) -> np.ndarray:
        if step.kind == "vertical":
            return crossing_matrix(labels.w[step.data])
        if step.kind == "edge":
            side, along = step.data
            u = labels.u[side]
            return translation(u if along else -u)
        sgn = step.data
        if sgn == 0:
            return np.eye(2, dtype=complex)
        m = translation(sgn)
        if step.source.level == UNDER:
            w = crossing_matrix(labels.w[step.source.crossing])
            m = w @ m @ np.linalg.inv(w)
        return m

    def shortest_path(self, source: Node, target: Node,
                      rng: random.Random | None = None) -> list[Step]:
        """Fewest steps; ties broken by ``rng`` if given, else deterministically."""
        prev: dict[Node, Step | None] = {source: None}
        queue = deque([source])
        while queue:
            v = queue.popleft()
            if v == target:
                break
            steps = list(self.adjacency[v])
            if rng is not None:
                rng.shuffle(steps)
            for st in steps:
                if st.target not in prev:
                    prev[st.target] = st
                    queue.append(st.target)
        if target not in prev:
            raise Unreachable(f"{target} not reachable from {source}")
        path = []
        v = target
        while prev[v] is not None:
            st = prev[v]
            path.append(st)
            v = st.source
        return path[::-1]

    def path_matrix(self, path: list[Step], labels: LabelAssignment) -> np.ndarray:
        m = np.eye(2, dtype=complex)
        for st in path:
            m = m @ self.step_matrix(st, labels)
        return m


def meridian_arc(diagram: PlanarDiagram, pres: WirtingerPresentation, node: Node) -> int:
    """Arc whose Wirtinger generator is the meridian at ``node``."""
    x = diagram.pd[node.crossing]
    if node.level == OVER:
        return pres.edge_arc[x[diagram.over_in[node.crossing]]]
    # quadrants 3 and 0 touch slot 0 (incoming), 1 and 2 touch slot 2
    return pres.edge_arc[x[0] if node.quadrant in (3, 0) else x[2]]


def default_basepoint(diagram: PlanarDiagram, pres: WirtingerPresentation) -> Node:
    """An over node of the arc containing the lowest-numbered edge."""
    arc = pres.arcs[pres.basepoint]
    for e in arc:
        h = diagram.head[e]
        if not h.is_under:
            return Node(h.crossing, OVER, 0)
    # an arc without overpasses: use the undercrossing where it begins
    t = diagram.tail[arc[0]]
    return Node(t.crossing, UNDER, 1)


def conjugator(graph: PathGraph, target: Node, labels: LabelAssignment,
               basepoint: Node, rng: random.Random | None = None) -> np.ndarray:
    """Matrix of a shortest path from the basepoint to ``target``."""
    return graph.path_matrix(graph.shortest_path(basepoint, target, rng), labels)


# -- representation -------------------------------------------------------------

@dataclass
class ParabolicRep:
    generators: list[np.ndarray]
    conjugators: list[np.ndarray]
    basepoint: Node
    presentation: WirtingerPresentation

    def image(self, word) -> np.ndarray:
        """Matrix of a word given as (generator, exponent) pairs."""
        m = np.eye(2, dtype=complex)
        for g, ex in word:
            a = self.generators[g]
            m = m @ (a if ex > 0 else np.linalg.inv(a))
        return m


def frames(graph: PathGraph, labels: LabelAssignment, basepoint: Node,
           rng: random.Random | None = None) -> dict[Node, np.ndarray]:
    """Matrix of every node along a breadth-first spanning tree."""
    out = {basepoint: np.eye(2, dtype=complex)}
    queue = deque([basepoint])
    while queue:
        v = queue.popleft()
        steps = list(graph.adjacency[v])
        if rng is not None:
            rng.shuffle(steps)
        for st in steps:
            if st.target not in out:
                out[st.target] = normalize(out[v] @ graph.step_matrix(st, labels))
                queue.append(st.target)
    return out


def frame_defect(graph: PathGraph, labels: LabelAssignment, basepoint: Node) -> float:
    """Largest mismatch between a node's frame and its neighbour's times the step."""
    fr = frames(graph, labels, basepoint)
    worst = 0.0
    for v, steps in graph.adjacency.items():
        for st in steps:
            worst = max(worst, projective_distance(fr[v] @ graph.step_matrix(st, labels),
                                                   fr[st.target]))
    return worst


def parabolic_rep(diagram: PlanarDiagram, labels: LabelAssignment,
                  basepoint: Node | None = None,
                  rng: random.Random | None = None) -> ParabolicRep:
    pres = wirtinger(diagram)
    graph = PathGraph(diagram)
    if basepoint is None:
        basepoint = default_basepoint(diagram, pres)
    # one node per arc; over nodes when the arc has an overpass
    chosen: dict[int, Node] = {}
    for v in graph.nodes:
        a = meridian_arc(diagram, pres, v)
        if a not in chosen or (v.level == OVER and chosen[a].level == UNDER):
            chosen[a] = v
    base_arc = meridian_arc(diagram, pres, basepoint)
    chosen[base_arc] = basepoint
    gens, conj = [], []
    for a in range(pres.n_generators):
        m = normalize(conjugator(graph, chosen[a], labels, basepoint, rng))
        conj.append(m)
        gens.append(m @ MERIDIAN @ np.linalg.inv(m))
    return ParabolicRep(gens, conj, basepoint, pres)


@dataclass
class VerifyReport:
    max_relator_deviation: float
    relator_deviations: list[float]
    max_trace_defect: float
    ok: bool
    # largest spectral norm of a det-1 generator image; round-off in a
    # relator word of such matrices grows like scale**2
    scale: float = 1.0

    @property
    def relative_relator_deviation(self) -> float:
        return self.max_relator_deviation / self.scale ** 2

    @property
    def relative_trace_defect(self) -> float:
        return self.max_trace_defect / self.scale ** 2


def verify(rep: ParabolicRep, presentation: WirtingerPresentation | None = None,
           tol: float = 1e-8) -> VerifyReport:
    """Relator and parabolicity defects, judged relative to the generator size."""
    pres = presentation or rep.presentation
    devs = [distance_from_identity(rep.image(r.word())) for r in pres.relations]
    gens = [normalize(g) for g in rep.generators]
    traces = [abs(abs(np.trace(g)) - 2) for g in gens]
    scale = max([1.0] + [float(np.linalg.norm(g, 2)) for g in gens])
    worst = max(devs, default=0.0)
    tr = max(traces, default=0.0)
    ok = worst / scale ** 2 < tol and tr / scale ** 2 < tol
    return VerifyReport(worst, devs, tr, ok, scale)


def word_from_string(s: str, letters: str = "abc") -> list[tuple[int, int]]:
    """'BabA' -> [(1,-1),(0,1),(1,1),(0,-1)]; upper case is the inverse."""
    out = []
    for ch in s:
        i = letters.index(ch.lower())
        out.append((i, -1 if ch.isupper() else 1))
    return out
