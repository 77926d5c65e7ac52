import numpy as np
import pytest

from conftest import solved
from linklabels import census
from linklabels.equations import assemble
from linklabels.solver import (
    DEDUP_TOL,
    NoCandidate,
    NotAnAutomorphism,
    SymmetricSystem,
    initial_guess,
    lm_solve,
    select_geometric,
    solve_all,
    solve_symmetric,
)

Z = complex(-0.5, np.sqrt(3) / 2)


def _white_sides(s, x):
    return [s.side_label(x, sd) for r in s.regions if r.color == "white" and r.n == 3
            for sd in r.sides]


def test_fig8_conjugate_pair_and_selection():
    s, sols, geo = solved("fig8")
    assert len(sols) == 2
    assert np.allclose(np.conj(sols[0].x), sols[1].x)
    w = s.crossing_labels(geo.x)
    assert min(abs(v - Z) for v in w) < 1e-9
    assert min(abs(v + Z + 1) for v in w) < 1e-9
    whites = _white_sides(s, geo.x)
    assert sum(abs(u - Z) < 1e-9 for u in whites) == 4


def test_turks_head_roots():
    s, sols, geo = solved("turks_head")
    roots = np.roots([1, 0, -6, -8, -4])
    quad = next(r for r in s.regions if r.n == 4 and r.color == "white")
    us = sorted((s.side_label(sol.x, quad.sides[0]) for sol in sols), key=lambda z: (z.real, z.imag))
    for root in roots:
        assert min(abs(root - u) for u in us) < 1e-9
    assert not geo.tags["real"]
    assert sum(sol.tags["real"] for sol in sols) == 2


def test_borromean_crossing_labels():
    s, _, geo = solved("borromean")
    assert np.allclose(np.abs(s.crossing_labels(geo.x) ** 2 + 0.25), 0, atol=1e-9)


def test_heuristic_start_converges_quickly():
    s = assemble(census.diagram("borromean"))
    rng = np.random.default_rng(0)
    its = []
    for _ in range(4):
        x, res, it = lm_solve(s, initial_guess(s, "anchored", rng))
        if res < 1e-9:
            its.append(it)
    assert its and min(its) < 25


def test_zero_start_is_perturbed():
    s = assemble(census.diagram("fig8"))
    for mode in ("regular", "consistent", "anchored", "random"):
        x0 = initial_guess(s, mode, np.random.default_rng(1))
        assert np.max(np.abs(x0)) > 1e-6
    x, res, _ = lm_solve(s, np.zeros(s.n_unknowns, dtype=complex))
    assert np.all(np.isfinite(x))


def test_fixed_seed_is_deterministic():
    s = assemble(census.diagram("turks_head"))
    a = solve_all(s, budget=8, seed=3)
    b = solve_all(s, budget=8, seed=3)
    assert len(a) == len(b)
    for p, q in zip(a, b):
        assert np.array_equal(p.x, q.x)


def test_budget_must_be_positive():
    with pytest.raises(ValueError):
        solve_all(assemble(census.diagram("fig8")), budget=0)


def test_selection_edge_cases():
    with pytest.raises(NoCandidate):
        select_geometric([])
    _, sols, _ = solved("fig8")
    assert select_geometric(sols[:1]) is sols[0]


@pytest.mark.parametrize("name", ["fig8", "borromean", "turks_head", "9a37", "11a79"])
def test_solutions_are_certified_and_closed_under_conjugation(name):
    s, sols, _ = solved(name)
    for sol in sols:
        assert sol.max_residual < 1e-9
        for side in s.bigon_sides:
            assert abs(s.side_label(sol.x, side)) < 1e-9
        partner = [t for t in sols if np.max(np.abs(np.conj(sol.x) - t.x)) < DEDUP_TOL]
        assert len(partner) == 1


@pytest.mark.parametrize("name", ["fig8", "borromean", "turks_head", "9a37"])
def test_geometric_solution_is_isolated(name):
    s, _, geo = solved(name)
    rng = np.random.default_rng(17)
    worst = 0.0
    for _ in range(100):
        d = rng.normal(size=s.n_unknowns) + 1j * rng.normal(size=s.n_unknowns)
        x0 = geo.x + 1e-3 * d / np.max(np.abs(d))
        x, res, _ = lm_solve(s, x0)
        assert res < 1e-9
        worst = max(worst, float(np.max(np.abs(x - geo.x))))
    assert worst < 1e-8


def test_symmetric_solve_agrees_with_full_search():
    s, sols, geo = solved("Ln:6")
    sym = solve_symmetric(s, census.L_symmetry(6))
    best = select_geometric(sym)
    assert np.max(np.abs(best.x - geo.x)) < 1e-8
    for sol in sym:
        assert sol.max_residual < 1e-9


def test_symmetry_must_be_automorphism():
    s = assemble(census.L(5))
    with pytest.raises(NotAnAutomorphism):
        SymmetricSystem(s, [(k + 1) % 10 for k in range(10)])


def test_symmetric_projection_round_trip():
    s = assemble(census.L(4))
    sym = SymmetricSystem(s, census.L_symmetry(4))
    y = np.arange(sym.n_unknowns) + 0.5j
    assert np.allclose(sym.project(sym.lift(y)), y)
