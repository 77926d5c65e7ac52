from functools import lru_cache

import pytest

from linklabels.diagram import PlanarDiagram
from linklabels.equations import assemble
from linklabels.solver import select_geometric, solve_all
from linklabels.tangles import (
    DISK_LABEL,
    ENCIRCLED,
    FlypeMove,
    IllegalFlype,
    PatternNotFound,
    Tangle,
    WrongEndCount,
    ZeroScale,
    add,
    boundary_labels,
    crossing,
    encircle,
    encircled_census,
    flype_compare,
    flype_pair,
    infinity,
    mul,
    numerator,
    orient,
    rotate_h,
    rotate_v,
    scale_boundary,
    twist,
    zero,
)

CROSSING_FREE = [v for v, (args, _) in ENCIRCLED.items() if not args["inner"].crossings]


@lru_cache(maxsize=None)
def geometric(variant: str):
    enc = encircled_census(variant)
    s = assemble(enc.diagram)
    g = select_geometric(solve_all(s, budget=12))
    return enc, s, g


def builder_order(b, seq):
    """Undo the lowest-edge rotation so index i is the builder's X_{i+1}."""
    return [seq[(i - b.rotation) % 4] for i in range(4)]


def test_tangle_needs_four_ends():
    with pytest.raises(WrongEndCount):
        Tangle((), (1, 1, 2))
    with pytest.raises(WrongEndCount):
        Tangle(((1, 2, 3, 4),), (1, 2, 3, 5))
    with pytest.raises(WrongEndCount):
        encircle("not a tangle")


def test_twist_and_closures():
    for n in range(1, 6):
        t = twist(n)
        assert len(t.crossings) == n
        pd, _, _ = orient(numerator(t))
        if n >= 2:
            d = PlanarDiagram(pd)
            assert d.num_crossings == n and len(d.regions) == n + 2


def test_rotations_are_involutions():
    t = add(crossing("/"), mul(crossing("\\"), crossing("/")))
    for rot in (rotate_h, rotate_v):
        assert rot(rot(t)).crossings == t.crossings
        assert rot(rot(t)).ends == t.ends


def test_encircle_single_crossing():
    enc = encircle(crossing("/"))
    d = enc.diagram
    assert d.num_crossings == 5
    assert d.is_alternating()
    assert len(d.regions) == 7
    assert not enc.crossing_free_inside


@pytest.mark.parametrize("variant", sorted(ENCIRCLED))
def test_disk_label_is_a_quarter(variant):
    enc, s, g = geometric(variant)
    b = boundary_labels(s, g.x, enc)
    target = DISK_LABEL if b.parallel else -DISK_LABEL
    assert abs(b.disk_label - target) < 1e-9
    # the path product carries the opposite sign convention
    assert abs(b.disk_label + b.disk_path_label) < 1e-15
    if enc.crossing_free_inside:
        assert abs(b.triangle - b.disk_label) < 1e-9


def test_parallel_and_antiparallel_both_present():
    kinds = {ENCIRCLED[v][1] for v in CROSSING_FREE}
    assert kinds == {True, False}
    assert sum(ENCIRCLED[v][1] is True for v in CROSSING_FREE) >= 2


@pytest.mark.parametrize("variant", CROSSING_FREE)
def test_boundary_crossings_are_half_the_inner_label(variant):
    enc, s, g = geometric(variant)
    b = boundary_labels(s, g.x, enc)
    u = builder_order(b, b.inner_labels)
    w = builder_order(b, b.crossing_labels)
    sg = builder_order(b, b.crossing_signs)
    assert abs(u[1] - u[3]) < 1e-9
    for i in range(4):
        assert abs(w[i] + sg[i] * u[1] / 2) < 1e-9


@pytest.mark.parametrize("variant", ["parallel-side-3", "parallel-twist-3"])
def test_parallel_pattern_relations(variant):
    enc, s, g = geometric(variant)
    b = boundary_labels(s, g.x, enc)
    assert b.parallel
    u = builder_order(b, b.inner_labels)
    w = builder_order(b, b.crossing_labels)
    assert abs(u[1] - (w[2] - w[0])) < 1e-9
    assert abs(u[3] - u[1]) < 1e-9
    assert abs(w[2] + w[0]) < 1e-9
    assert abs(w[2] - u[1] / 2) < 1e-9


@pytest.mark.parametrize("variant", ["antiparallel-clasp", "antiparallel-twist-2"])
def test_antiparallel_pattern_relations(variant):
    enc, s, g = geometric(variant)
    b = boundary_labels(s, g.x, enc)
    assert not b.parallel
    u = builder_order(b, b.inner_labels)
    assert max(abs(w + u[1] / 2) for w in b.crossing_labels) < 1e-9


@pytest.mark.parametrize("variant", sorted(ENCIRCLED))
def test_opposite_boundary_labels(variant):
    enc, s, g = geometric(variant)
    b = boundary_labels(s, g.x, enc)
    u, w, sg = b.inner_labels, b.crossing_labels, b.crossing_signs
    assert abs(u[0] - u[2]) < 1e-9 and abs(u[1] - u[3]) < 1e-9
    assert max(abs(abs(x) - abs(w[0])) for x in w) < 1e-9
    for i in range(4):
        for j in range(4):
            assert abs(w[i] - sg[i] * sg[j] * w[j]) < 1e-9
    arcs = b.arc_labels
    for p, q in ((arcs[0], arcs[2]), (arcs[1], arcs[3])):
        if p is not None and q is not None:
            assert abs(p - q) < 1e-9


def test_arc_one_two_holds_lowest_circle_edge():
    enc, s, g = geometric("crossing")
    b = boundary_labels(s, g.x, enc)
    lowest = min(enc.circle_edges)
    assert enc.circle_edges[b.rotation] == lowest


@pytest.mark.parametrize("variant", ["parallel-side-3", "crossing", "twist-3"])
@pytest.mark.parametrize("k", [2, 1j, 0.3 - 0.7j])
def test_scaling_keeps_interior(variant, k):
    enc, s, g = geometric(variant)
    rep = scale_boundary(s, g.x, enc, k)
    assert rep.interior_regions
    assert rep.interior_residual < 1e-10
    assert rep.full_residual > 1e-6
    assert rep.shape_change < 1e-10


def test_scaling_by_one_is_identity():
    enc, s, g = geometric("crossing")
    rep = scale_boundary(s, g.x, enc, 1)
    assert rep.full_residual < 1e-9
    with pytest.raises(ZeroScale):
        scale_boundary(s, g.x, enc, 0)


def test_boundary_needs_encircled_input():
    _, s, g = geometric("crossing")
    with pytest.raises(PatternNotFound):
        boundary_labels(s, g.x, "nothing")


def test_unknown_variant():
    with pytest.raises(KeyError):
        encircled_census("no-such-variant")


SEVEN = FlypeMove(tangle=mul(crossing("/"), add(crossing("/"), crossing("/"))),
                  rest=mul(crossing("/"), add(crossing("/"), crossing("/"))))


def test_flype_pair_labels_agree():
    rep = flype_compare(SEVEN, budget=12)
    assert rep.before.num_crossings == 7
    assert rep.before.is_alternating() and rep.after.is_alternating()
    assert rep.before.pd != rep.after.pd
    assert rep.label_gap < 1e-9
    assert rep.max_gap < 1e-9


def test_identity_flype():
    d1, d2, corr, c1, c2 = flype_pair(FlypeMove(tangle=zero(), rest=SEVEN.rest))
    assert d1.pd == d2.pd
    rep = flype_compare(FlypeMove(tangle=zero(), rest=SEVEN.rest), budget=12)
    assert rep.label_gap < 1e-9


def test_mirrored_flype_gives_conjugate_labels():
    rep = flype_compare(FlypeMove(SEVEN.tangle, rest=SEVEN.rest, mirror=True), budget=12)
    assert rep.conjugate_gap < 1e-9
    assert rep.max_gap > 1e-3


def test_illegal_flype():
    with pytest.raises(IllegalFlype):
        flype_pair(FlypeMove(tangle=infinity(), crossing="x"))
