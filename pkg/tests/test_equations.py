import json

import numpy as np
import pytest

from conftest import solved
from linklabels import census
from linklabels.diagram import PlanarDiagram
from linklabels.equations import (
    UnvalidatedDiagram,
    ZeroEdgeLabel,
    assemble,
    shape_from_labels,
)
from linklabels.moebius import crossing_matrix, is_scalar, translation
from linklabels.report import labels_from_record

CENSUS = ["fig8", "borromean", "turks_head", "9a37", "11a79", "Ln:5"]


def test_fig8_counts():
    s = assemble(census.diagram("fig8"))
    assert s.n_unknowns == 12
    # three entries per region plus the side labels of the two bigons
    assert s.n_residuals == 3 * 6 + len(s.bigon_sides) == 22


def test_bigon_product_forces_equal_labels():
    w1, w2 = 0.3 + 0.1j, -0.2 + 0.4j
    p = crossing_matrix(w2) @ translation(0) @ crossing_matrix(w1) @ translation(0)
    assert np.allclose(p, np.diag([-w2, -w1]))
    assert not is_scalar(p)
    assert is_scalar(crossing_matrix(w1) @ crossing_matrix(w1))


def test_printed_fig8_values_solve(data_dir):
    s = assemble(census.diagram("fig8"))
    labels = labels_from_record(s, json.loads((data_dir / "fig8_exact.json").read_text()))
    x = s.reduce(labels)
    assert np.max(np.abs(s.residual(x))) < 1e-12
    assert s.edge_relation_defect(labels) < 1e-15


def test_corner_shape_examples():
    u = (-1 + 1j * np.sqrt(4 * np.sqrt(2) - 5)) / np.sqrt(2)
    assert shape_from_labels(u * u / 2, u, u, 1) == pytest.approx(0.5)
    u2, u3 = 0.3 + 0.2j, -0.7 + 0.1j
    assert shape_from_labels(u2 * u3, u2, u3, 1) == pytest.approx(1)
    # reversing both edges: kappa = eps1*eps2 and each label changes sign
    assert shape_from_labels(u2 * u3, -u2, -u3, 1) == pytest.approx(1)
    with pytest.raises(ZeroEdgeLabel):
        shape_from_labels(1, 0, 1, 1)


def test_non_alternating_needs_assumption():
    d = census.braid_closure([1, 1, 2, 2, -1, 2])
    with pytest.raises(UnvalidatedDiagram):
        assemble(d)
    assert assemble(d, assume_taut=True).n_unknowns == len(d.edges) + d.num_crossings


def test_torus_rejected():
    with pytest.raises(UnvalidatedDiagram):
        assemble(census.braid_closure([1, 1, 1, 1, 1]))


def _fd_jacobian(s, x, h=1e-6):
    cols = []
    for k in range(s.n_unknowns):
        e = np.zeros(s.n_unknowns, dtype=complex)
        e[k] = h
        cols.append((s.residual(x + e) - s.residual(x - e)) / (2 * h))
    return np.column_stack(cols)


@pytest.mark.parametrize("name", CENSUS)
def test_jacobian_matches_finite_differences(name):
    s = assemble(census.diagram(name))
    rng = np.random.default_rng(11)
    worst = 0.0
    for _ in range(20):
        x = rng.normal(size=s.n_unknowns) + 1j * rng.normal(size=s.n_unknowns)
        J = s.jacobian(x)
        F = _fd_jacobian(s, x)
        worst = max(worst, np.max(np.abs(J - F)) / np.max(np.abs(J)))
    assert worst < 1e-6


def test_taylor_remainder_is_second_order():
    s = assemble(census.diagram("turks_head"))
    rng = np.random.default_rng(2)
    x = rng.normal(size=s.n_unknowns) + 1j * rng.normal(size=s.n_unknowns)
    d = rng.normal(size=s.n_unknowns) + 1j * rng.normal(size=s.n_unknowns)
    J = s.jacobian(x)
    rem = [np.max(np.abs(s.residual(x + t * d) - s.residual(x) - t * J @ d)) for t in (1e-2, 1e-3)]
    assert rem[1] < rem[0] / 50


def test_bigon_rows_of_jacobian():
    s = assemble(census.diagram("fig8"))
    J = s.jacobian(np.zeros(s.n_unknowns, dtype=complex))
    rows = J[3 * len(s.regions):]
    assert np.all(np.sum(rows != 0, axis=1) == 1)
    assert np.all(rows[rows != 0] == 1)


def _scalar_part(p):
    return np.array([p[0, 1], p[1, 0], p[0, 0] - p[1, 1]])


@pytest.mark.parametrize("name", ["fig8", "turks_head", "9a37"])
def test_basepoint_rotation_is_conjugation(name):
    s, sols, geo = solved(name)
    rng = np.random.default_rng(5)
    for x, at_solution in ((geo.x, True), (rng.normal(size=s.n_unknowns) + 0.3j, False)):
        for i, r in enumerate(s.regions):
            p0 = s.region_product(x, i)
            for start in range(1, r.n):
                p = s.region_product(x, i, start)
                assert np.allclose(np.trace(p), np.trace(p0))
                assert np.allclose(np.linalg.det(p), np.linalg.det(p0))
                scale = max(1.0, np.max(np.abs(p0)))
                vanish0 = np.max(np.abs(_scalar_part(p0))) < 1e-9 * scale
                vanish = np.max(np.abs(_scalar_part(p))) < 1e-9 * scale
                assert vanish == vanish0
                assert vanish0 == at_solution


@pytest.mark.parametrize("name", ["fig8", "turks_head", "9a37", "11a79"])
def test_conjugate_of_solution_solves(name):
    s, sols, _ = solved(name)
    for sol in sols:
        assert np.max(np.abs(s.residual(np.conj(sol.x)))) < 1e-9


@pytest.mark.parametrize("name", ["fig8", "borromean", "turks_head", "9a37", "11a79", "Ln:7"])
def test_shape_identities_at_every_solution(name):
    s, sols, _ = solved(name)
    for sol in sols:
        assert np.max(np.abs(s.residual(sol.x))) < 1e-9
        for i, r in enumerate(s.regions):
            sh = sol.shapes[i]
            if r.n == 3:
                assert max(abs(z - 1) for z in sh) < 1e-9
            if r.n == 4:
                assert max(abs(sh[j] + sh[(j + 1) % 4] - 1) for j in range(4)) < 1e-9


def test_region_residual_matches_full_residual():
    s, _, geo = solved("9a37")
    rng = np.random.default_rng(0)
    x = geo.x + 0.01 * rng.normal(size=s.n_unknowns)
    labels = s.expand(x)
    full = s.residual(x)
    for i, r in enumerate(s.regions):
        part = s.region_residual(labels, i)
        assert np.allclose(part[:3], full[3 * i:3 * i + 3])


def test_single_component_diagram_has_c_plus_two_regions():
    s = assemble(PlanarDiagram(census.diagram("11a79").pd))
    assert len(s.regions) == s.nc + 2
