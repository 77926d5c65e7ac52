import random

import pytest
from hypothesis import given, settings, strategies as st

from linklabels import census
from linklabels.diagram import (
    BLACK,
    WHITE,
    EdgeIndexNotTwice,
    MalformedLine,
    PlanarDiagram,
    format_pd,
    parse_pd,
    validate,
)

FIG8 = census.diagram("fig8")


def test_fig8_counts():
    assert FIG8.num_crossings == 4
    assert len(FIG8.edges) == 8
    assert len(FIG8.regions) == 6
    assert FIG8.face_sizes() == [2, 2, 3, 3, 3, 3]


def test_fig8_colors_three_and_three():
    colors = [r.color for r in FIG8.regions]
    assert colors.count(BLACK) == 3 and colors.count(WHITE) == 3


def test_adjacent_faces_have_different_colors():
    for name in ("fig8", "turks_head", "9a37", "11a79"):
        d = census.diagram(name)
        for e in d.edges:
            f, g = d.side_face[(e, True)], d.side_face[(e, False)]
            assert d.face_color[f] != d.face_color[g]


def test_edge_three_times_rejected():
    with pytest.raises(EdgeIndexNotTwice):
        PlanarDiagram([(1, 3, 2, 3), (2, 3, 1, 4)])


def test_malformed_line():
    with pytest.raises(MalformedLine):
        parse_pd("X 1 2 3\n")
    with pytest.raises(MalformedLine):
        parse_pd("# nothing here\n")


def test_pd_round_trip(data_dir):
    text = (data_dir / "fig8.pd").read_text()
    d = parse_pd(text)
    assert format_pd(d) == text
    assert d.pd == FIG8.pd


def test_single_crossing_unknot():
    d = PlanarDiagram([(1, 2, 2, 1)])
    assert len(d.regions) == 3
    colors = sorted(r.color for r in d.regions)
    assert sorted(colors.count(c) for c in set(colors)) == [1, 2]
    assert not validate(d).reduced


def test_alternating_kappa_is_one():
    for name in ("fig8", "turks_head", "borromean"):
        assert set(census.diagram(name).edge_kappa.values()) == {1}


def test_non_alternating_kappa_from_end_types():
    d = census.braid_closure([1, 1, 2, 2, -1, 2])
    assert not d.is_alternating()
    seen = set()
    for e in d.edges:
        t_under, h_under = d.tail[e].is_under, d.head[e].is_under
        # ascending (under end to over end) is +1 seen with the black side on the right
        slope = 0 if t_under == h_under else (1 if t_under else -1)
        view = -1 if d.black_side[e].left else 1
        assert d.edge_kappa[e] == slope * view
        seen.add(d.edge_kappa[e])
    assert seen == {-1, 0, 1}


def test_fig8_is_eligible_torus_is_not():
    assert validate(FIG8).hyperbolic_eligible
    torus = census.braid_closure([1, 1, 1, 1])
    rep = validate(torus)
    assert rep.torus_2n and not rep.hyperbolic_eligible


def test_nugatory_flagged():
    # sigma_3 occurs once: a kink on the outer strand
    rep = validate(census.braid_closure([1, -2, 1, -2, 1, -2, 3]))
    assert not rep.reduced and rep.nugatory
    assert not rep.accepted


def test_fig8_side_kappa_follows_color():
    # alternating: u_black - u_white = 1, so black regions see +1 and white -1
    for r in FIG8.regions:
        assert set(r.side_kappa) == ({1} if r.color == BLACK else {-1})
    # each triangle has one corner where the two edges point the same way
    for r in FIG8.regions:
        if r.n == 3:
            assert sorted(r.corner_kappa) == [-1, -1, 1]


def test_bigon_crossings():
    for r in census.diagram("fig8").bigons():
        assert r.n == 2 and len(set(r.crossings)) == 2


def test_reorientation_flips_mixed_crossings_only():
    for name in ("borromean", "9a37"):
        d = census.diagram(name)
        r = d.reoriented(0)
        for k, x in enumerate(d.pd):
            mixed = (d.component_of[x[0]] == 0) != (d.component_of[x[1]] == 0)
            assert (d.signs[k] != r.signs[k]) == mixed
        assert r.face_sizes() == d.face_sizes()


def test_region_cyclic_equality():
    r = FIG8.regions[0]
    for k in range(r.n):
        assert r.rotated(k).same_cycle(r)
    other = next(s for s in FIG8.regions if s.n == r.n and s.face != r.face)
    assert not other.same_cycle(r)


def _random_word(rng: random.Random, strands: int, length: int) -> list[int]:
    while True:
        word = [rng.choice([1, -1]) * rng.randint(1, strands - 1) for _ in range(length)]
        if {abs(g) for g in word} == set(range(1, strands)):
            return word


def test_euler_on_random_braid_closures():
    rng = random.Random(7)
    for _ in range(60):
        strands = rng.randint(2, 5)
        word = _random_word(rng, strands, rng.randint(strands, 12))
        d = census.braid_closure(word, strands)
        c = d.num_crossings
        assert len(d.edges) == 2 * c
        assert len(d.regions) == c + 2


@settings(max_examples=30, deadline=None)
@given(st.lists(st.sampled_from([1, -1, 2, -2]), min_size=3, max_size=10))
def test_coloring_unique_up_to_swap(word):
    if {abs(g) for g in word} != {1, 2}:
        return
    d = census.braid_closure(word, 3)
    # exactly one side of every edge is black
    for e in d.edges:
        sides = [d.face_color[d.side_face[(e, left)]] for left in (True, False)]
        assert sorted(sides) == [BLACK, WHITE]


def test_ln_face_count():
    for n in range(3, 9):
        assert len(census.L(n).regions) == 2 * n + 2
