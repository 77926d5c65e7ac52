"""Planar diagrams built from PD codes.

A crossing is a 4-tuple of edge indices listed counterclockwise, starting at
the incoming under-strand.  Positions 0 and 2 are therefore the under-strand
(in and out) and positions 1 and 3 the over-strand.

Faces are traced keeping the face on the left of the walker.  An edge side is
identified by ``(edge, left)`` where ``left`` is relative to the orientation of
the edge; walking the left side of an edge with its face on our left means
walking along the edge, walking the right side means walking against it.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple, Sequence

BLACK = "black"
WHITE = "white"


class DiagramError(ValueError):
    pass


class MalformedLine(DiagramError):
    pass


class EdgeIndexNotTwice(DiagramError):
    pass


class NonPlanarRotationSystem(DiagramError):
    pass


class DisconnectedDiagram(DiagramError):
    pass


class ColoringInconsistent(DiagramError):
    pass


class Slot(NamedTuple):
    crossing: int
    pos: int

    @property
    def is_under(self) -> bool:
        return self.pos % 2 == 0


class Side(NamedTuple):
    edge: int
    left: bool


class Corner(NamedTuple):
    """Turn at ``crossing`` from side ``before`` onto side ``after``."""

    crossing: int
    before: Side
    after: Side
    eps_before: int
    eps_after: int

    @property
    def kappa(self) -> int:
        return self.eps_before * self.eps_after


@dataclass(frozen=True)
class Region:
    face: int
    color: str
    sides: tuple[Side, ...]
    crossings: tuple[int, ...]
    eps: tuple[int, ...]
    side_kappa: tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.sides)

    @property
    def corners(self) -> tuple[Corner, ...]:
        n = self.n
        return tuple(
            Corner(self.crossings[i], self.sides[i], self.sides[(i + 1) % n],
                   self.eps[i], self.eps[(i + 1) % n])
            for i in range(n))

    @property
    def corner_kappa(self) -> tuple[int, ...]:
        return tuple(c.kappa for c in self.corners)

    def rotated(self, k: int) -> "Region":
        k %= self.n
        rot = lambda t: t[k:] + t[:k]
        return Region(self.face, self.color, rot(self.sides), rot(self.crossings),
                      rot(self.eps), rot(self.side_kappa))

    def same_cycle(self, other: "Region") -> bool:
        """Equality up to cyclic rotation of the corner sequence."""
        if self.n != other.n or self.color != other.color:
            return False
        return any(self.rotated(k).sides == other.sides
                   and self.rotated(k).crossings == other.crossings
                   for k in range(self.n))


def parse_pd(text: str) -> "PlanarDiagram":
    """Parse the line-oriented PD format: ``X a b c d`` per crossing."""
    tuples = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] != "X" or len(parts) != 5:
            raise MalformedLine(f"line {lineno}: expected 'X a b c d', got {raw!r}")
        try:
            edges = tuple(int(p) for p in parts[1:])
        except ValueError:
            raise MalformedLine(f"line {lineno}: non-integer edge index in {raw!r}") from None
        if min(edges) < 1:
            raise MalformedLine(f"line {lineno}: edge indices must be positive")
        tuples.append(edges)
    if not tuples:
        raise MalformedLine("no crossings")
    return PlanarDiagram(tuples)


def format_pd(diagram: "PlanarDiagram") -> str:
    return "".join("X %d %d %d %d\n" % x for x in diagram.pd)


class PlanarDiagram:
    """Oriented, connected link diagram with faces and checkerboard colors.

    Immutable after construction; every derived structure is computed once.
    """

    def __init__(self, pd: Sequence[Sequence[int]]):
        self.pd: tuple[tuple[int, int, int, int], ...] = tuple(
            tuple(int(e) for e in x) for x in pd)  # type: ignore[misc]
        if any(len(x) != 4 for x in self.pd):
            raise MalformedLine("each crossing needs exactly four edges")
        slots: dict[int, list[Slot]] = {}
        for k, x in enumerate(self.pd):
            for p, e in enumerate(x):
                slots.setdefault(e, []).append(Slot(k, p))
        bad = sorted(e for e, s in slots.items() if len(s) != 2)
        if bad:
            raise EdgeIndexNotTwice(f"edge indices not appearing exactly twice: {bad}")
        self._slots = slots
        self.edges: tuple[int, ...] = tuple(sorted(slots))
        self._check_connected()
        self._orient()
        self._trace_faces()
        self._color()

    # -- construction ---------------------------------------------------

    @property
    def num_crossings(self) -> int:
        return len(self.pd)

    def other_slot(self, slot: Slot) -> Slot:
        a, b = self._slots[self.pd[slot.crossing][slot.pos]]
        return b if a == slot else a

    def edge_at(self, slot: Slot) -> int:
        return self.pd[slot.crossing][slot.pos]

    def _check_connected(self):
        seen = {0}
        todo = [0]
        while todo:
            k = todo.pop()
            for e in self.pd[k]:
                for s in self._slots[e]:
                    if s.crossing not in seen:
                        seen.add(s.crossing)
                        todo.append(s.crossing)
        if len(seen) != len(self.pd):
            raise DisconnectedDiagram(
                f"only {len(seen)} of {len(self.pd)} crossings reachable")

    def _orient(self):
        # Walk each strand cycle; under-passes fix the direction, otherwise
        # fall back to increasing edge numbering.
        tail: dict[int, Slot] = {}
        head: dict[int, Slot] = {}
        done: set[int] = set()
        components = []
        for e0 in self.edges:
            if e0 in done:
                continue
            start = self._slots[e0][0]
            # sequence of (edge, from_slot, to_slot) walking the cycle
            walk = []
            s = start
            while True:
                e = self.edge_at(s)
                t = self.other_slot(s)
                walk.append((e, s, t))
                s = Slot(t.crossing, (t.pos + 2) % 4)
                if s == start:
                    break
                if len(walk) > 2 * len(self.edges):
                    raise NonPlanarRotationSystem("strand walk does not close")
            votes = set()
            for e, s, t in walk:
                if t.pos == 0:
                    votes.add(1)     # arriving at an incoming under slot
                elif t.pos == 2:
                    votes.add(-1)
            if len(votes) > 1:
                raise DiagramError(f"under-strand directions disagree on component of edge {e0}")
            if votes:
                direction = votes.pop()
            else:
                direction = self._numbering_direction([w[0] for w in walk])
            if direction < 0:
                walk = [(e, t, s) for e, s, t in reversed(walk)]
            for e, s, t in walk:
                tail[e] = s
                head[e] = t
                done.add(e)
            components.append(tuple(w[0] for w in walk))
        self.tail = tail
        self.head = head
        # rotate each component to start at its smallest edge, sort by it
        comps = []
        for c in components:
            i = c.index(min(c))
            comps.append(c[i:] + c[:i])
        self.components: tuple[tuple[int, ...], ...] = tuple(sorted(comps))
        self.component_of = {e: i for i, c in enumerate(self.components) for e in c}
        over_in = []
        for k, x in enumerate(self.pd):
            if head[x[1]] == Slot(k, 1):
                over_in.append(1)
            else:
                over_in.append(3)
        self.over_in: tuple[int, ...] = tuple(over_in)

    @staticmethod
    def _numbering_direction(cycle: list[int]) -> int:
        if len(cycle) == 1:
            return 1
        lo, hi = min(cycle), max(cycle)
        a, b = cycle[0], cycle[1]
        if b == a + 1 or (a == hi and b == lo):
            return 1
        return -1

    def _trace_faces(self):
        used: set[tuple[Slot, Slot]] = set()
        faces = []
        for k in range(len(self.pd)):
            for p in range(4):
                s = Slot(k, p)
                if (s, self.other_slot(s)) in used:
                    continue
                face = []
                while True:
                    t = self.other_slot(s)
                    if (s, t) in used:
                        break
                    used.add((s, t))
                    face.append((s, t))
                    s = Slot(t.crossing, (t.pos - 1) % 4)
                if face[0][0] != s:
                    raise NonPlanarRotationSystem("face walk did not close")
                faces.append(face)
        c = len(self.pd)
        if len(faces) != c + 2:
            raise NonPlanarRotationSystem(
                f"{len(faces)} faces for {c} crossings; a planar diagram has {c + 2}")
        self._face_walks = faces
        side_face = {}
        for f, walk in enumerate(faces):
            for s, t in walk:
                e = self.edge_at(s)
                side_face[Side(e, s == self.tail[e] and t == self.head[e])] = f
        if len(side_face) != 2 * len(self.edges):
            raise NonPlanarRotationSystem("edge sides not matched to faces")
        self.side_face = side_face

    def _color(self):
        nf = len(self._face_walks)
        color: list[int | None] = [None] * nf
        color[0] = 0
        queue = deque([0])
        while queue:
            f = queue.popleft()
            for s, t in self._face_walks[f]:
                e = self.edge_at(s)
                for left in (True, False):
                    g = self.side_face[Side(e, left)]
                    if g == f:
                        continue
                    if color[g] is None:
                        color[g] = 1 - color[f]  # type: ignore[operator]
                        queue.append(g)
                    elif color[g] == color[f]:
                        raise ColoringInconsistent(f"faces {f} and {g} share edge {e}")
        for e in self.edges:
            if self.side_face[Side(e, True)] == self.side_face[Side(e, False)]:
                raise ColoringInconsistent(f"edge {e} has the same face on both sides")
        walks = self._face_walks
        score = [0, 0]
        for f, walk in enumerate(walks):
            for s, t in walk:
                score[color[f]] += _side_kappa(s, t)  # type: ignore[index]
        if score[0] > score[1]:
            black = 0
        elif score[1] > score[0]:
            black = 1
        else:
            black = color[self.side_face[Side(self.edges[0], True)]]
        self.face_color: tuple[str, ...] = tuple(
            BLACK if col == black else WHITE for col in color)
        regions = []
        for f, walk in enumerate(walks):
            sides, crossings, eps, kap = [], [], [], []
            for s, t in walk:
                e = self.edge_at(s)
                forward = s == self.tail[e] and t == self.head[e]
                sides.append(Side(e, forward))
                crossings.append(t.crossing)
                eps.append(1 if forward else -1)
                kap.append(_side_kappa(s, t))
            regions.append(Region(f, self.face_color[f], tuple(sides), tuple(crossings),
                                  tuple(eps), tuple(kap)))
        self.regions: tuple[Region, ...] = tuple(regions)

    # -- derived data ---------------------------------------------------

    @cached_property
    def black_side(self) -> dict[int, Side]:
        out = {}
        for e in self.edges:
            for left in (True, False):
                if self.face_color[self.side_face[Side(e, left)]] == BLACK:
                    out[e] = Side(e, left)
        return out

    @cached_property
    def side_kappa(self) -> dict[Side, int]:
        out = {}
        for r in self.regions:
            for s, k in zip(r.sides, r.side_kappa):
                out[s] = k
        return out

    @cached_property
    def edge_kappa(self) -> dict[int, int]:
        """kappa in u_black - u_white = kappa for every edge."""
        return {e: self.side_kappa[self.black_side[e]] for e in self.edges}

    @cached_property
    def signs(self) -> tuple[int, ...]:
        """Crossing handedness: +1 when the over-strand runs from slot 3 to slot 1."""
        return tuple(1 if o == 3 else -1 for o in self.over_in)

    def over_edges(self, k: int) -> tuple[int, int]:
        """(incoming, outgoing) over-strand edges at crossing k."""
        x = self.pd[k]
        i = self.over_in[k]
        return x[i], x[(i + 2) % 4]

    def under_edges(self, k: int) -> tuple[int, int]:
        x = self.pd[k]
        return x[0], x[2]

    def is_alternating(self) -> bool:
        return all(self.tail[e].is_under != self.head[e].is_under for e in self.edges)

    def region_of_face(self, f: int) -> Region:
        return self.regions[f]

    def bigons(self) -> list[Region]:
        return [r for r in self.regions if r.n == 2]

    def face_sizes(self) -> list[int]:
        return sorted(r.n for r in self.regions)

    def reoriented(self, component: int) -> "PlanarDiagram":
        """Same diagram with one component's orientation reversed."""
        comp = self.components[component]
        ncomp = len(comp)
        # renumber the component backwards; incoming under-slot moves to position 2
        relabel = {comp[i]: comp[(ncomp - i) % ncomp] for i in range(ncomp)}
        new = []
        for k, x in enumerate(self.pd):
            y = [relabel.get(e, e) for e in x]
            if self.component_of[x[0]] == component:
                y = y[2:] + y[:2]
            new.append(tuple(y))
        return PlanarDiagram(new)

    def mirrored(self) -> "PlanarDiagram":
        """Mirror image: every crossing switched."""
        new = []
        for k, x in enumerate(self.pd):
            i = self.over_in[k]
            y = x[i:] + x[:i]
            new.append(tuple(y))
        return PlanarDiagram(new)

    def reflected(self) -> "PlanarDiagram":
        """Mirror image by reflecting the plane: cyclic order reversed."""
        return PlanarDiagram([(x[0], x[3], x[2], x[1]) for x in self.pd])

    def __repr__(self):
        return f"PlanarDiagram(c={self.num_crossings}, components={len(self.components)})"


def _side_kappa(s: Slot, t: Slot) -> int:
    """Slope of the edge walked from s to t, seen from the face on the left."""
    if t.is_under and not s.is_under:
        return 1
    if s.is_under and not t.is_under:
        return -1
    return 0


def checkerboard(diagram: PlanarDiagram) -> tuple[str, ...]:
    return diagram.face_color


def region_corners(diagram: PlanarDiagram, face: int) -> Region:
    return diagram.regions[face]


@dataclass
class ValidationReport:
    connected: bool
    alternating: bool
    reduced: bool
    prime: bool
    torus_2n: bool
    bigons: list[int]
    nugatory: list[int]
    accepted: bool
    reasons: list[str]

    @property
    def hyperbolic_eligible(self) -> bool:
        return self.accepted


def validate(diagram: PlanarDiagram, assume_taut: bool = False,
             require_reduced: bool = True) -> ValidationReport:
    """Check the combinatorial preconditions for the label equations.

    Alternating input is accepted when it is reduced, diagrammatically prime
    and not the standard (2, n) torus pattern.  Tautness of non-alternating
    input cannot be decided here; it is accepted only with ``assume_taut``.
    """
    reasons = []
    nugatory = []
    for r in diagram.regions:
        seen = set()
        for k in r.crossings:
            if k in seen:
                nugatory.append(k)
            seen.add(k)
    nugatory = sorted(set(nugatory))
    reduced = not nugatory
    # two distinct faces sharing two edges give a separating circle
    shared: dict[tuple[int, int], int] = {}
    for e in diagram.edges:
        f, g = sorted((diagram.side_face[Side(e, True)], diagram.side_face[Side(e, False)]))
        shared[(f, g)] = shared.get((f, g), 0) + 1
    prime = all(v < 2 for (f, g), v in shared.items() if f != g)
    sizes = diagram.face_sizes()
    c = diagram.num_crossings
    torus = (sizes == [2] * c + [c, c]) if c > 2 else sizes == [2, 2, 2, 2]
    alternating = diagram.is_alternating()
    if not reduced:
        reasons.append(f"nugatory crossings {nugatory}")
    if not prime:
        reasons.append("diagram is not prime")
    if torus:
        reasons.append("standard (2,n) torus diagram: not hyperbolic")
    if not alternating and not assume_taut:
        reasons.append("non-alternating diagram; tautness not asserted")
    accepted = not torus and prime and (reduced or not require_reduced) \
        and (alternating or assume_taut)
    return ValidationReport(True, alternating, reduced, prime, torus,
                            [r.face for r in diagram.bigons()], nugatory,
                            accepted, reasons)
