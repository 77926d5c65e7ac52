"""Four-ended tangles, encircled tangles, flypes and boundary labels.

Tangle diagrams are kept unoriented while they are assembled: a crossing is
a counterclockwise 4-tuple of edge labels with the under-strand at positions
0 and 2.  Ends are listed as (NW, NE, SE, SW); an arc without crossings has
its label at both of its ends.  Orientation is chosen only once a closed link
diagram exists.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import count

import numpy as np

from .diagram import PlanarDiagram, Side
from .equations import LabelAssignment, ResidualSystem, assemble
from .holonomy import OVER, UNDER, Node, PathGraph, default_basepoint, frames, wirtinger
from .solver import DEFAULT_BUDGET, Solution, select_geometric, solve_all

NW, NE, SE, SW = range(4)


class WrongEndCount(ValueError):
    pass


class PatternNotFound(ValueError):
    pass


class IllegalFlype(ValueError):
    pass


class ZeroScale(ValueError):
    pass


class ClosedLoop(ValueError):
    pass


@dataclass(frozen=True)
class Tangle:
    crossings: tuple[tuple[int, int, int, int], ...]
    ends: tuple[int, int, int, int]
    tags: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if len(self.ends) != 4:
            raise WrongEndCount(f"a tangle has four ends, got {len(self.ends)}")
        seen: dict[int, int] = {}
        for x in self.crossings:
            for e in x:
                seen[e] = seen.get(e, 0) + 1
        for e in self.ends:
            seen[e] = seen.get(e, 0) + 1
        bad = sorted(e for e, n in seen.items() if n != 2)
        if bad:
            raise WrongEndCount(f"edge labels not used exactly twice: {bad}")

    @property
    def labels(self) -> set[int]:
        return {e for x in self.crossings for e in x} | set(self.ends)

    def shifted(self, offset: int) -> "Tangle":
        return Tangle(tuple(tuple(e + offset for e in x) for x in self.crossings),
                      tuple(e + offset for e in self.ends),
                      {k: v + offset for k, v in self.tags.items()})

    def tagged(self, **tags) -> "Tangle":
        return Tangle(self.crossings, self.ends, {**self.tags, **tags})


def crossing(over: str = "/") -> Tangle:
    """Single crossing; ``/`` puts the SW-NE strand on top, ``\\`` the NW-SE one."""
    nw, ne, se, sw = 1, 2, 3, 4
    if over == "/":
        x = (nw, sw, se, ne)      # NW-SE strand underneath
    elif over == "\\":
        x = (ne, nw, sw, se)
    else:
        raise ValueError("over must be '/' or '\\\\'")
    return Tangle((x,), (nw, ne, se, sw))


def zero() -> Tangle:
    """Two horizontal arcs."""
    return Tangle((), (1, 1, 2, 2))


def infinity() -> Tangle:
    """Two vertical arcs."""
    return Tangle((), (1, 2, 2, 1))


def _union(pairs, labels):
    parent = {e: e for e in labels}

    def find(e):
        while parent[e] != e:
            parent[e] = parent[parent[e]]
            e = parent[e]
        return e

    for a, b in pairs:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    return {e: find(e) for e in labels}


def _join(t1: Tangle, t2: Tangle, pairs, ends) -> tuple[list, dict, dict]:
    """Glue ``t2`` (shifted clear of ``t1``) to ``t1`` along (end, end) pairs."""
    t2 = t2.shifted(max(t1.labels, default=0))
    labels = t1.labels | t2.labels
    glue = [(t1.ends[i], t2.ends[j]) for i, j in pairs]
    rep = _union(glue, labels)
    crossings = [tuple(rep[e] for e in x) for x in t1.crossings + t2.crossings]
    tags = {k: rep[v] for k, v in {**t1.tags, **t2.tags}.items()}
    new_ends = [rep[(t1 if w == 1 else t2).ends[i]] for w, i in ends]
    return crossings, tags, new_ends


def _glued(crossings, tags, ends) -> Tangle:
    used = {e for x in crossings for e in x}
    counts: dict[int, int] = {}
    for e in ends:
        counts[e] = counts.get(e, 0) + 1
    # a glued label reaching no crossing and no two ends is a loop on its own
    for e, n in counts.items():
        if e not in used and n != 2:
            raise ClosedLoop(f"edge {e} forms a closed loop without crossings")
    return _compact(Tangle(tuple(crossings), tuple(ends), tags))


def _compact(t: Tangle) -> Tangle:
    order = sorted(t.labels)
    new = {e: i + 1 for i, e in enumerate(order)}
    return Tangle(tuple(tuple(new[e] for e in x) for x in t.crossings),
                  tuple(new[e] for e in t.ends), {k: new[v] for k, v in t.tags.items()})


def add(t1: Tangle, t2: Tangle) -> Tangle:
    """Horizontal sum: ``t2`` placed to the right of ``t1``."""
    c, tags, ends = _join(t1, t2, [(NE, NW), (SE, SW)], [(1, NW), (2, NE), (2, SE), (1, SW)])
    return _glued(c, tags, ends)


def mul(t1: Tangle, t2: Tangle) -> Tangle:
    """Vertical product: ``t2`` placed below ``t1``."""
    c, tags, ends = _join(t1, t2, [(SW, NW), (SE, NE)], [(1, NW), (1, NE), (2, SE), (2, SW)])
    return _glued(c, tags, ends)


def _turn(x):
    # reflection reverses the cyclic order; viewing from below swaps levels
    a, b, c, d = x
    return (d, c, b, a)


def rotate_h(t: Tangle) -> Tangle:
    """Half-turn about the horizontal axis in the projection plane."""
    return Tangle(tuple(_turn(x) for x in t.crossings),
                  (t.ends[SW], t.ends[SE], t.ends[NE], t.ends[NW]), dict(t.tags))


def rotate_v(t: Tangle) -> Tangle:
    """Half-turn about the vertical axis in the projection plane."""
    return Tangle(tuple(_turn(x) for x in t.crossings),
                  (t.ends[NE], t.ends[NW], t.ends[SW], t.ends[SE]), dict(t.tags))


def twist(n: int, vertical: bool = False) -> Tangle:
    """|n| half-twists; the sign of n picks the crossing type."""
    if n == 0:
        return infinity() if vertical else zero()
    piece = crossing("/" if n > 0 else "\\")
    out = piece
    for _ in range(abs(n) - 1):
        out = mul(out, piece) if vertical else add(out, piece)
    return out


def _closure(t: Tangle, pairs) -> list[tuple[int, int, int, int]]:
    rep = _union([(t.ends[i], t.ends[j]) for i, j in pairs], t.labels)
    crossings = [tuple(rep[e] for e in x) for x in t.crossings]
    used = {e for x in crossings for e in x}
    if any(rep[e] not in used for e in t.ends):
        raise ClosedLoop("closure leaves a loop without crossings")
    return crossings


def numerator(t: Tangle) -> list[tuple[int, int, int, int]]:
    """Join NW to NE and SW to SE; returns unoriented crossings."""
    return _closure(t, [(NW, NE), (SW, SE)])


def denominator(t: Tangle) -> list[tuple[int, int, int, int]]:
    return _closure(t, [(NW, SW), (NE, SE)])


# -- orientation ------------------------------------------------------------------

def orient(raw, flip: frozenset[int] = frozenset()) -> tuple[list, dict[int, int], dict[int, int]]:
    """Orient every component and renumber edges 1..2c along components.

    ``raw`` crossings are counterclockwise with the under-strand at
    positions 0 and 2.  Each component is walked from its first half-edge in
    the crossing list; components whose index is in ``flip`` are reversed.
    Returns PD tuples, the old-to-new edge label map and the component index
    of every old label.
    """
    raw = [tuple(x) for x in raw]
    where: dict[int, list[tuple[int, int]]] = {}
    for k, x in enumerate(raw):
        for p, e in enumerate(x):
            where.setdefault(e, []).append((k, p))
    if any(len(v) != 2 for v in where.values()):
        raise WrongEndCount("every edge needs two ends")

    def across(h):
        a, b = where[raw[h[0]][h[1]]]
        return b if a == h else a

    head: dict[int, tuple[int, int]] = {}
    comps = []
    done: set[int] = set()
    for k, x in enumerate(raw):
        for p in range(4):
            e = x[p]
            if e in done:
                continue
            # leave the crossing through (k, p)
            walk = []
            h = (k, p)
            while True:
                t = across(h)
                walk.append((raw[h[0]][h[1]], h, t))
                h = (t[0], (t[1] + 2) % 4)
                if h == (k, p):
                    break
            if len(comps) in flip:
                walk = [(e2, t, s) for e2, s, t in reversed(walk)]
            for e2, s, t in walk:
                head[e2] = t
                done.add(e2)
            comps.append([w[0] for w in walk])
    new = {}
    comp_of = {}
    n = count(1)
    for i, c in enumerate(comps):
        for e in c:
            new[e] = next(n)
            comp_of[e] = i
    pd = []
    for k, x in enumerate(raw):
        y = x if head[x[0]] == (k, 0) else x[2:] + x[:2]
        pd.append(tuple(new[e] for e in y))
    return pd, new, comp_of


# -- encircled tangles ----------------------------------------------------------------

@dataclass
class EncircledDiagram:
    diagram: PlanarDiagram
    circle_crossings: list[int]      # X1..X4, ends NW, SW, SE, NE in that (ccw) order
    circle_edges: list[int]          # c_i joins X_i and X_{i+1}; oriented X_{i+1} -> X_i
    inner_edges: list[int]           # strand edge inside the circle at X_i
    outer_edges: list[int]           # strand edge outside the circle at X_i
    interior_crossings: list[int]
    inner: Tangle

    @property
    def crossing_free_inside(self) -> bool:
        return not self.inner.crossings


def _encircled_tangle(inner: Tangle, phase: int) -> Tangle:
    """Inner tangle surrounded by a circle weaving alternately over and under."""
    base = max(inner.labels)
    fresh = count(base + 1)
    # ends in counterclockwise order around the disk: NW, SW, SE, NE
    order = [NW, SW, SE, NE]
    e = [inner.ends[i] for i in order]
    c = [next(fresh) for _ in range(4)]
    o = [next(fresh) for _ in range(4)]
    xs = []
    for i in range(4):
        c_next, c_prev = c[i], c[i - 1]
        # counterclockwise at X_i: outward, ahead along the circle, inward, behind
        if (i + phase) % 2 == 0:
            xs.append((o[i], c_next, e[i], c_prev))     # circle on top
        else:
            xs.append((c_next, e[i], c_prev, o[i]))     # circle underneath
    tags = dict(inner.tags)
    for i in range(4):
        tags[f"c{i + 1}"] = c[i]
        tags[f"e{i + 1}"] = e[i]
        tags[f"o{i + 1}"] = o[i]
    return Tangle(inner.crossings + tuple(xs), (o[0], o[3], o[2], o[1]), tags)


def encircle(inner: Tangle, closure: str = "N", twists: int = 0, phase: int | None = None,
             flip: frozenset[int] = frozenset()) -> EncircledDiagram:
    """Standard encircled diagram of ``inner`` closed off by a twist tangle.

    ``closure`` "N" adds ``twists`` horizontal half-twists on the right and
    takes the numerator; "D" adds vertical twists below and takes the
    denominator.  With ``phase`` None the weaving phase and the twist
    handedness are chosen to make the diagram alternating when possible.
    The circle is oriented clockwise, so c_i runs from X_{i+1} to X_i;
    ``flip`` reverses further components (indices in walk order).
    """
    if not isinstance(inner, Tangle):
        raise WrongEndCount("inner tangle must be a Tangle")
    if closure not in ("N", "D"):
        raise ValueError("closure is 'N' or 'D'")
    best = None
    for ph in ([phase] if phase is not None else [0, 1]):
        for sg in ([1, -1] if twists else [1]):
            t = _encircled_tangle(inner, ph)
            if closure == "N":
                joined = add(t, twist(sg * abs(twists))) if twists else t
                raw = numerator(joined)
            else:
                joined = mul(t, twist(sg * abs(twists), vertical=True)) if twists else t
                raw = denominator(joined)
            if best is None or (best[0] and _alternating(raw)):
                best = (not _alternating(raw), joined, raw)
    _, joined, raw = best
    rep = _closure_map(joined, closure)
    c1 = rep[joined.tags["c1"]]
    nin = len(inner.crossings)
    _, _, comp_of = orient(raw)
    flip = frozenset(flip) - {comp_of[c1]}
    pd, new, _ = orient(raw, flip)
    d = PlanarDiagram(pd)
    if d.tail[new[c1]].crossing == nin:
        # c1 leaves X1: the circle runs counterclockwise, turn it around
        pd, new, _ = orient(raw, flip | {comp_of[c1]})
        d = PlanarDiagram(pd)

    def label(name):
        return new[rep[joined.tags[name]]]

    return EncircledDiagram(
        diagram=d,
        circle_crossings=[nin + i for i in range(4)],
        circle_edges=[label(f"c{i}") for i in range(1, 5)],
        inner_edges=[label(f"e{i}") for i in range(1, 5)],
        outer_edges=[label(f"o{i}") for i in range(1, 5)],
        interior_crossings=list(range(nin)),
        inner=inner,
    )


def _alternating(raw) -> bool:
    pd, _, _ = orient(raw)
    return PlanarDiagram(pd).is_alternating()


def _closure_map(t: Tangle, closure: str) -> dict[int, int]:
    pairs = [(NW, NE), (SW, SE)] if closure == "N" else [(NW, SW), (NE, SE)]
    return _union([(t.ends[i], t.ends[j]) for i, j in pairs], t.labels)


# -- boundary labels ----------------------------------------------------------------

DISK_LABEL = 0.25
# below this |G[1,0]| (relative to the entries of G) a boundary arc is
# homotopic into a cusp and has no geodesic label
DEGENERATE_ARC = 1e-9


def geodesic_label(g: np.ndarray) -> complex | None:
    """Label w of the geodesic between the cusps fixed by the two frames of ``g``.

    Writing ``g`` projectively as T(s) W(w) T(t) gives w = det g / g[1,0]^2;
    None when g fixes infinity (the two cusps coincide).
    """
    scale = np.max(np.abs(g))
    if abs(g[1, 0]) <= DEGENERATE_ARC * scale:
        return None
    return complex(np.linalg.det(g) / g[1, 0] ** 2)


@dataclass
class TangleBoundary:
    points: list[tuple[int, int]]        # Q_i as (circle crossing, outer edge)
    arc_labels: list[complex | None]     # w_{1,2}, w_{2,3}, w_{3,4}, w_{4,1}
    crossing_labels: list[complex]       # w_i at the circle crossings
    inner_labels: list[complex]          # u_i on the inner side of c_i
    crossing_signs: list[int]
    rotation: int                        # builder index of Q1
    disk_label: complex                  # three-punctured sphere label
    disk_path_label: complex
    parallel: bool
    triangle: complex | None             # triangle relation, crossing-free inside only


class _Geometry:
    """Quadrant bookkeeping for an encircled diagram."""

    def __init__(self, enc: EncircledDiagram):
        self.enc = enc
        self.d = enc.diagram
        self.graph = PathGraph(self.d)

    def slot(self, k: int, e: int) -> int:
        return self.d.pd[k].index(e)

    def between(self, k: int, e1: int, e2: int) -> int:
        """Quadrant at crossing k bounded by the half-edges of e1 and e2."""
        x = self.d.pd[k]
        for q in range(4):
            if {x[q], x[(q + 1) % 4]} == {e1, e2}:
                return q
        raise PatternNotFound(f"edges {e1}, {e2} are not adjacent at crossing {k}")

    def level(self, k: int, e: int) -> int:
        return UNDER if self.slot(k, e) % 2 == 0 else OVER

    def inner_side(self, i: int) -> Side:
        enc = self.enc
        k = enc.circle_crossings[i]
        q = self.between(k, enc.circle_edges[i], enc.inner_edges[i])
        f = self.graph.region_of(Node(k, 0, q))
        c = enc.circle_edges[i]
        for left in (True, False):
            if self.d.side_face[Side(c, left)] == f:
                return Side(c, left)
        raise PatternNotFound("circle edge does not bound the inner face")

    def outer_quadrants(self) -> set[tuple[int, int]]:
        enc = self.enc
        out = set()
        for i, k in enumerate(enc.circle_crossings):
            o = enc.outer_edges[i]
            out.add((k, self.between(k, o, enc.circle_edges[i])))
            out.add((k, self.between(k, o, enc.circle_edges[i - 1])))
        return out

    def interior_regions(self) -> list[int]:
        """Indices of regions lying inside the circle."""
        enc = self.enc
        inside = set(enc.interior_crossings) | set(enc.circle_crossings)
        outer = self.outer_quadrants()
        qf = self.graph._quadrant_face
        bad = {f for (k, q), f in qf.items() if k not in inside or (k, q) in outer}
        return [i for i, r in enumerate(self.d.regions) if r.face not in bad]


def _check_pattern(enc: EncircledDiagram) -> _Geometry:
    if not isinstance(enc, EncircledDiagram) or len(enc.circle_crossings) != 4:
        raise PatternNotFound("diagram was not produced by encircle")
    geo = _Geometry(enc)
    try:
        for i in range(4):
            geo.between(enc.circle_crossings[i], enc.outer_edges[i], enc.circle_edges[i])
            geo.between(enc.circle_crossings[i], enc.inner_edges[i], enc.circle_edges[i - 1])
    except (PatternNotFound, IndexError) as ex:
        raise PatternNotFound(str(ex)) from None
    return geo


def boundary_labels(system: ResidualSystem, x: np.ndarray,
                    enc: EncircledDiagram) -> TangleBoundary:
    """Boundary data of the encircled tangle for the solution ``x``.

    The arc labels come from products of holonomy frames: the frame of the
    strand at Q_i and at Q_{i+1}, both entered from the face outside c_i.
    The disk label is the geodesic joining the two strands that pass over
    the circle; the arc between them above the inner tangle stays on the
    disk the circle bounds.  Its path-product value has the opposite sign
    to the triangle relation convention, which is the one reported as
    ``disk_label``.
    """
    geo = _check_pattern(enc)
    d = enc.diagram
    labels = system.expand(x)
    fr = frames(geo.graph, labels, default_basepoint(d, wirtinger(d)))
    X = enc.circle_crossings
    start = int(np.argmin(enc.circle_edges))

    def cyc(seq):
        return list(seq[start:]) + list(seq[:start])

    arcs = []
    for i in range(4):
        j = (i + 1) % 4
        c = enc.circle_edges[i]
        a = Node(X[i], geo.level(X[i], enc.outer_edges[i]), geo.between(X[i], enc.outer_edges[i], c))
        b = Node(X[j], geo.level(X[j], enc.outer_edges[j]), geo.between(X[j], c, enc.outer_edges[j]))
        arcs.append(geodesic_label(np.linalg.inv(fr[a]) @ fr[b]))

    over = [i for i in range(4) if geo.level(X[i], enc.inner_edges[i]) == OVER]
    if len(over) != 2:
        raise PatternNotFound("circle does not alternate over the four ends")
    a, b = over
    path = geodesic_label(np.linalg.inv(fr[Node(X[a], OVER, 0)]) @ fr[Node(X[b], OVER, 0)])
    if path is None:
        raise PatternNotFound("strands over the circle share a cusp")
    inward = [d.head[enc.inner_edges[i]].crossing != X[i] for i in over]
    u = [labels.u[geo.inner_side(i)] for i in range(4)]
    w = [labels.w[k] for k in X]
    triangle = None
    if enc.crossing_free_inside:
        # the face between the two strands has top side c_4 with corners X_4, X_1
        triangle = complex(-w[0] * w[3] / u[3] ** 2)
    return TangleBoundary(
        points=cyc([(X[i], enc.outer_edges[i]) for i in range(4)]),
        arc_labels=cyc(arcs),
        crossing_labels=cyc(w),
        inner_labels=cyc(u),
        crossing_signs=cyc([d.signs[k] for k in X]),
        rotation=start,
        disk_label=-path,
        disk_path_label=path,
        parallel=inward[0] != inward[1],
        triangle=triangle,
    )


# -- scaling the boundary ---------------------------------------------------------------

@dataclass
class ScaleReport:
    k: complex
    interior_residual: float
    full_residual: float
    interior_regions: list[int]
    shape_change: float


def scale_boundary(system: ResidualSystem, x: np.ndarray, enc: EncircledDiagram,
                   k: complex) -> ScaleReport:
    """Multiply the four circle crossing labels and inner circle labels by k.

    Residuals are re-evaluated on the regions inside the circle; the full
    residual over every region is reported for contrast.
    """
    if k == 0:
        raise ZeroScale("scale factor must be non-zero")
    geo = _check_pattern(enc)
    labels = system.expand(x)
    u = dict(labels.u)
    w = dict(labels.w)
    for i, c in enumerate(enc.circle_crossings):
        w[c] = k * w[c]
        s = geo.inner_side(i)
        u[s] = k * u[s]
    scaled = LabelAssignment(u, w)
    inside = geo.interior_regions()
    res_in = max(float(np.max(np.abs(system.region_residual(scaled, i)))) for i in inside)
    res_all = max(float(np.max(np.abs(system.region_residual(scaled, i))))
                  for i in range(len(system.regions)))
    change = 0.0
    for i in inside:
        for c in system.regions[i].corners:
            a = (labels.u[c.before], labels.u[c.after], labels.w[c.crossing])
            b = (scaled.u[c.before], scaled.u[c.after], scaled.w[c.crossing])
            if min(abs(a[0]), abs(a[1])) < 1e-12:
                continue    # bigon sides carry no shape
            change = max(change, abs(a[2] / (a[0] * a[1]) - b[2] / (b[0] * b[1])))
    return ScaleReport(complex(k), res_in, res_all, inside, change)


# -- flypes ---------------------------------------------------------------------

@dataclass(frozen=True)
class FlypeMove:
    """A crossing on the left of ``tangle``, closed up with ``rest`` on the right.

    Before: N([c1] + tangle + rest).  After: N(rotate_h(tangle) + [c2] + rest),
    where c2 is the crossing carried across the tangle.  With ``mirror`` the
    after diagram is also reflected in the plane, an orientation-reversing
    control under which matched labels become conjugate.
    """

    tangle: Tangle
    crossing: str = "/"
    rest: Tangle = field(default_factory=zero)
    mirror: bool = False


@dataclass
class FlypeReport:
    before: PlanarDiagram
    after: PlanarDiagram
    c1: int
    c2: int
    correspondence: dict[int, int]
    label_gap: float                # |w_c1 - w_c2|
    max_gap: float                  # over every matched crossing
    conjugate_gap: float            # same, against the conjugate solution
    solutions: tuple[Solution, Solution]


def flype_pair(move: FlypeMove) -> tuple[PlanarDiagram, PlanarDiagram, dict[int, int], int, int]:
    """Both diagrams of a flype, oriented so matched crossings have equal signs."""
    if move.crossing not in ("/", "\\"):
        raise IllegalFlype("the traded crossing must be '/' or '\\'")
    c = crossing(move.crossing)
    try:
        raw1 = numerator(add(add(c, move.tangle), move.rest))
        raw2 = numerator(add(add(rotate_h(move.tangle), c), move.rest))
    except (ClosedLoop, WrongEndCount) as ex:
        raise IllegalFlype(str(ex)) from None
    nt = len(move.tangle.crossings)
    nr = len(move.rest.crossings)
    # crossing order: [c1, T.., R..] before and [T'.., c2, R..] after
    corr = {0: nt}
    corr.update({1 + i: i for i in range(nt)})
    corr.update({1 + nt + i: 1 + nt + i for i in range(nr)})
    pd1, _, comp1 = orient(raw1)
    d1 = PlanarDiagram(pd1)
    ncomp = len(set(comp1.values()))
    for mask in range(1 << max(ncomp - 1, 0)):
        flip = frozenset(i + 1 for i in range(ncomp - 1) if mask >> i & 1)
        pd2, _, _ = orient(raw2, flip)
        d2 = PlanarDiagram(pd2)
        if all(d1.signs[a] == d2.signs[b] for a, b in corr.items()):
            return d1, d2.reflected() if move.mirror else d2, corr, 0, nt
    raise IllegalFlype("no orientation of the flyped diagram matches the crossing signs")


def flype_compare(move: FlypeMove, budget: int = DEFAULT_BUDGET, seed: int = 0) -> FlypeReport:
    """Solve both sides of a flype and compare labels of matched crossings."""
    d1, d2, corr, c1, c2 = flype_pair(move)
    s1, s2 = assemble(d1), assemble(d2)
    g1 = select_geometric(solve_all(s1, budget=budget, seed=seed), d1.is_alternating())
    g2 = select_geometric(solve_all(s2, budget=budget, seed=seed), d2.is_alternating())
    w1 = s1.crossing_labels(g1.x)
    w2 = s2.crossing_labels(g2.x)
    gaps = [abs(w1[a] - w2[b]) for a, b in corr.items()]
    conj = [abs(w1[a] - np.conj(w2[b])) for a, b in corr.items()]
    return FlypeReport(d1, d2, c1, c2, corr, float(abs(w1[c1] - w2[c2])),
                       float(max(gaps)), float(max(conj)), (g1, g2))


# -- census ------------------------------------------------------------------------

def _oriented(enc_args: dict, parallel: bool | None) -> EncircledDiagram:
    enc = encircle(**enc_args)
    if parallel is None:
        return enc
    for flip in ((), (0,), (1,), (2,), (0, 2), (1, 2)):
        enc = encircle(**enc_args, flip=frozenset(flip))
        geo = _Geometry(enc)
        X = enc.circle_crossings
        over = [i for i in range(4) if geo.level(X[i], enc.inner_edges[i]) == OVER]
        inward = [enc.diagram.head[enc.inner_edges[i]].crossing != X[i] for i in over]
        if (inward[0] != inward[1]) == parallel:
            return enc
    raise PatternNotFound("strand orientation cannot be chosen independently")


ENCIRCLED = {
    # two strands through the circle, closed by a clasp below (Borromean rings)
    "parallel-clasp": (dict(inner=infinity(), closure="D", twists=2), True),
    "antiparallel-clasp": (dict(inner=infinity(), closure="D", twists=2), False),
    # the two strands belong to one component, closed by twists
    "parallel-twist-3": (dict(inner=infinity(), closure="D", twists=3), True),
    "antiparallel-twist-2": (dict(inner=infinity(), closure="N", twists=2), False),
    "parallel-side-3": (dict(inner=infinity(), closure="N", twists=3), True),
    # tangles with crossings inside the circle
    "crossing": (dict(inner=crossing("/"), closure="N", twists=0), None),
    "twist-2": (dict(inner=twist(2), closure="N", twists=0), None),
    "twist-3": (dict(inner=twist(3), closure="N", twists=0), None),
    "crossing-clasp": (dict(inner=crossing("/"), closure="D", twists=1), None),
    "vtwist-2": (dict(inner=twist(2, vertical=True), closure="D", twists=1), None),
}


def encircled_census(variant: str) -> EncircledDiagram:
    if variant not in ENCIRCLED:
        raise KeyError(f"unknown encircled variant {variant!r}; known: {sorted(ENCIRCLED)}")
    args, parallel = ENCIRCLED[variant]
    return _oriented(dict(args), parallel)
