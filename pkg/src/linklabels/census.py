"""Named diagrams with known label solutions.

9a37 and 11a79 are frozen PD codes of the standard alternating diagrams of
the knot tables (11a79 reflected in the plane); their face vectors are
asserted on load.  L_n is generated as the closure of (s1 s2^-1)^n.
"""

from __future__ import annotations

import math
from itertools import count

from .diagram import PlanarDiagram

FIG8_PD = [(8, 5, 1, 6), (4, 1, 5, 2), (2, 8, 3, 7), (6, 4, 7, 3)]

PD_9A37 = [(5, 1, 6, 18), (1, 10, 2, 11), (15, 3, 16, 2), (3, 9, 4, 8), (13, 4, 14, 5),
           (11, 7, 12, 6), (7, 16, 8, 17), (9, 15, 10, 14), (17, 13, 18, 12)]

# planar reflection of the table diagram, which matches the orientation in
# which the reference shape parameters were listed
PD_11A79 = [(3, 22, 4, 1), (1, 11, 2, 10), (9, 3, 10, 2), (11, 4, 12, 5), (5, 18, 6, 19),
            (13, 7, 14, 6), (7, 15, 8, 14), (19, 8, 20, 9), (17, 13, 18, 12),
            (15, 21, 16, 20), (21, 17, 22, 16)]

FACE_VECTORS = {
    "9a37": [3] * 8 + [4] * 3,
    "11a79": [2] * 3 + [3] * 5 + [4] * 2 + [5] * 3,
}


class UnknownCensusName(KeyError):
    pass


def braid_closure(word: list[int], strands: int | None = None) -> PlanarDiagram:
    """PD code of the closure of a braid word (generator i = +-i, 1-based).

    Strands run upward; sigma_i takes the strand at position i over the one
    at position i+1 (a positive crossing).
    """
    if strands is None:
        strands = max(abs(g) for g in word) + 1
    ids = count(1)
    bottom = [next(ids) for _ in range(strands)]
    cur = list(bottom)
    raw = []
    for g in word:
        i = abs(g) - 1
        bl, br = cur[i], cur[i + 1]
        tl, tr = next(ids), next(ids)
        if g > 0:
            # over strand bottom-left to top-right
            raw.append((br, tr, tl, bl))
        else:
            raw.append((bl, br, tr, tl))
        cur[i], cur[i + 1] = tl, tr
    ident = {top: bot for top, bot in zip(cur, bottom)}
    raw = [tuple(ident.get(e, e) for e in x) for x in raw]
    return PlanarDiagram(_renumber(raw))


def _renumber(raw):
    """Relabel edges 1..2c consecutively along each oriented component."""
    d = PlanarDiagram(raw)
    new = {}
    n = 1
    for comp in d.components:
        # components are stored in orientation order
        for e in comp:
            new[e] = n
            n += 1
    return [tuple(new[e] for e in x) for x in raw]


def L(n: int) -> PlanarDiagram:
    if n < 2:
        raise ValueError("n >= 2")
    d = braid_closure([1, -2] * n)
    assert len(d.regions) == 2 * n + 2
    return d


def L_symmetry(n: int) -> list[int]:
    """Crossing permutation shifting the braid word of L(n) by one period."""
    return [(k + 2) % (2 * n) for k in range(2 * n)]


def lam(n: int) -> float:
    """Positive square root of the regular n-gon shape parameter."""
    return 0.5 / math.cos(math.pi / n)


def diagram(name: str) -> PlanarDiagram:
    if name == "fig8":
        return PlanarDiagram(FIG8_PD)
    if name == "borromean":
        return L(3)
    if name == "turks_head":
        # reversed so that walking the white 4-gon against the face order
        # follows the orientation from an overpass
        return L(4).reoriented(0)
    if name.startswith("Ln:"):
        return L(int(name[3:]))
    if name in ("9a37", "11a79"):
        d = PlanarDiagram(PD_9A37 if name == "9a37" else PD_11A79)
        assert d.face_sizes() == FACE_VECTORS[name], d.face_sizes()
        return d
    if name.startswith("encircled:"):
        from .tangles import encircled_census
        return encircled_census(name.split(":", 1)[1]).diagram
    raise UnknownCensusName(name)


NAMES = ["fig8", "borromean", "turks_head", "Ln:<n>", "9a37", "11a79", "encircled:<variant>"]
