import math

import numpy as np
import pytest
import sympy
from hypothesis import given, settings, strategies as st

from linklabels.moebius import (
    INF,
    DegeneratePoints,
    apply,
    circle_fit_residual,
    cross_ratio,
    develop_region,
    f_polynomial,
    f_recursive,
    is_scalar,
    region_gamma_product,
    regular_shape,
)

finite = st.complex_numbers(max_magnitude=5, allow_nan=False, allow_infinity=False)


def test_normalised_cross_ratio():
    for zeta in (0.3 + 0.2j, -2.0, 1j):
        assert cross_ratio(1, INF, 0, zeta) == pytest.approx(zeta)


def test_regular_square_cross_ratio():
    w = 1j
    assert cross_ratio(1, 1j, -1, -1j) == pytest.approx(0.5)
    assert w / (1 + w) ** 2 == pytest.approx(0.5)


def test_coincident_points():
    with pytest.raises(DegeneratePoints):
        cross_ratio(1, 1, 2, 3)
    with pytest.raises(DegeneratePoints):
        cross_ratio(INF, 1, INF, 3)


@settings(max_examples=60, deadline=None)
@given(st.lists(finite, min_size=4, max_size=4), st.lists(finite, min_size=4, max_size=4))
def test_cross_ratio_moebius_invariant(pts, coeffs):
    a, b, c, d = coeffs
    m = np.array([[a, b], [c, d]])
    if abs(a * d - b * c) < 0.1:
        return
    if min(abs(p - q) for i, p in enumerate(pts) for q in pts[i + 1:]) < 0.05:
        return
    with np.errstate(all="ignore"):
        img = [apply(m, p) for p in pts]
    if any(z is not INF and not abs(z) < 1e6 for z in img):
        return
    before = cross_ratio(*pts)
    after = cross_ratio(*img)
    assert abs(after - before) <= 1e-8 * max(1, abs(before))


def test_regular_shape_values():
    assert regular_shape(3) == pytest.approx(1)
    assert regular_shape(4) == pytest.approx(0.5)
    vals = [regular_shape(n) for n in range(3, 65)]
    assert all(a > b > 0.25 for a, b in zip(vals, vals[1:]))
    assert vals[-1] - 0.25 < 1e-3


def test_regular_square_product_is_scalar():
    p = region_gamma_product([0.5] * 4)
    assert np.allclose(p, -0.25 * np.eye(2))


def test_symbolic_entries():
    z = sympy.symbols("z1:6")
    assert sympy.expand(region_gamma_product(z[:3])[1, 0] - (1 - z[1])) == 0
    f4 = sympy.expand(region_gamma_product(z[:4])[1, 0])
    assert sympy.expand(f4 + (1 - z[1] - z[2])) == 0 or sympy.expand(f4 - (1 - z[1] - z[2])) == 0


def test_f_values():
    assert f_polynomial([0.3, 0.7, 0.1]) == pytest.approx(1 - 0.7)
    assert f_recursive([0.3, 0.7, 0.1]) == pytest.approx(1 - 0.7)
    assert abs(f_polynomial([0.2, 0.4, 0.6, 0.9])) < 1e-15
    z5 = regular_shape(5)
    assert abs(f_polynomial([z5] * 5)) < 1e-12


@pytest.mark.parametrize("n", range(3, 21))
def test_regular_polygon_closes(n):
    z = regular_shape(n)
    assert abs(f_polynomial([z] * n)) < 1e-10
    assert abs(f_recursive([z] * n)) < 1e-10
    assert is_scalar(region_gamma_product([z] * n))


@settings(max_examples=40, deadline=None)
@given(st.lists(finite, min_size=3, max_size=9))
def test_recursion_matches_product(zetas):
    a = f_polynomial(zetas)
    b = f_recursive(zetas)
    assert abs(a - b) <= 1e-9 * max(1, abs(a))


def test_develop_regular_square():
    verts, err = develop_region([0.5] * 4)
    assert err < 1e-12
    assert verts[0] is INF and verts[1] == 0


def test_develop_fig8_region():
    # three-sided regions have every shape equal to 1
    verts, err = develop_region([1, 1, 1])
    assert err < 1e-12
    assert len({v if v is INF else round(v.real, 9) + 1j * round(v.imag, 9) for v in verts}) == 3


def test_develop_is_sensitive():
    z = regular_shape(5)
    _, err = develop_region([z + 1e-3, z, z, z, z])
    assert err > 1e-6


def test_scalar_iff_closes():
    rng = np.random.default_rng(3)
    for n in range(3, 9):
        z = regular_shape(n)
        good = [z] * n
        bad = list(good)
        bad[rng.integers(n)] += 0.01 * (rng.normal() + 1j * rng.normal())
        for zetas, closes in ((good, True), (bad, False)):
            _, err = develop_region(zetas)
            assert is_scalar(region_gamma_product(zetas)) == closes
            assert (err < 1e-10) == closes


def test_real_shapes_lie_on_circle():
    for n in range(4, 9):
        verts, _ = develop_region([regular_shape(n)] * n)
        assert circle_fit_residual(verts) < 1e-10
    # a square with a non-real pair of opposite shapes (t and 1 - t, t not real)
    t = 0.5 + 0.3j
    verts, err = develop_region([t, 1 - t, t, 1 - t])
    assert err < 1e-12
    assert circle_fit_residual(verts) > 1e-3


def test_infinity_helpers():
    m = np.array([[2, 1], [1, 1]], dtype=complex)
    assert apply(m, INF) == 2
    assert apply(np.array([[1, 0], [1, 0]], dtype=complex), 0) is INF
    assert math.isclose(abs(cross_ratio(INF, 0, 1, 2)), abs((1 - 2) / (0 - 2)))
