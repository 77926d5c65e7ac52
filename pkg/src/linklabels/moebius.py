"""2x2 complex matrices acting on the Riemann sphere, and ideal polygons."""

from __future__ import annotations

import math
from typing import Iterable, Sequence

import numpy as np

INF = None  # the point at infinity on the Riemann sphere

SCALAR_TOL = 1e-9


class DegeneratePoints(ValueError):
    pass


class DegenerateShape(ValueError):
    pass


def mat(a, b, c, d) -> np.ndarray:
    return np.array([[a, b], [c, d]], dtype=complex)


def translation(x) -> np.ndarray:
    """Parabolic z -> z + x fixing infinity."""
    return mat(1, x, 0, 1)


def crossing_matrix(w) -> np.ndarray:
    """Isometry carrying the horosphere at infinity to one of diameter |w|."""
    return mat(0, -w, 1, 0)


def shape_matrix(zeta) -> np.ndarray:
    return mat(0, -zeta, 1, -1)


def chain(ms: Iterable[np.ndarray]) -> np.ndarray:
    out = np.eye(2, dtype=complex)
    for m in ms:
        out = out @ m
    return out


def apply(m: np.ndarray, z):
    """Act on a point of the sphere; ``None`` stands for infinity."""
    a, b, c, d = m[0, 0], m[0, 1], m[1, 0], m[1, 1]
    if z is INF:
        return INF if c == 0 else a / c
    den = c * z + d
    if den == 0:
        return INF
    return (a * z + b) / den


def cross_ratio(z1, z2, z3, z4) -> complex:
    """(z1-z2)(z3-z4) / ((z1-z3)(z2-z4)), cancelling a single infinite point."""
    pts = (z1, z2, z3, z4)
    for i in range(4):
        for j in range(i + 1, 4):
            if (pts[i] is INF and pts[j] is INF) or (
                    pts[i] is not INF and pts[j] is not INF and pts[i] == pts[j]):
                raise DegeneratePoints(f"points {i + 1} and {j + 1} coincide")
    # each point occurs in exactly one numerator and one denominator factor
    if z1 is INF:
        return complex((z3 - z4) / (z2 - z4))
    if z2 is INF:
        return complex((z3 - z4) * -1 / (z1 - z3))
    if z3 is INF:
        return complex((z1 - z2) * -1 / (z2 - z4))
    if z4 is INF:
        return complex((z1 - z2) / (z1 - z3))
    return complex((z1 - z2) * (z3 - z4) / ((z1 - z3) * (z2 - z4)))


def regular_shape(n: int) -> float:
    """Common shape parameter of a regular ideal n-gon."""
    if n < 3:
        raise ValueError("a polygon needs at least three sides")
    return 0.25 / math.cos(math.pi / n) ** 2


def region_gamma_product(zetas: Sequence) -> np.ndarray:
    """[[0,-z_n],[1,-1]] ... [[0,-z_1],[1,-1]] with z_1 applied first.

    Entries may be symbolic (sympy) or numeric.
    """
    if all(isinstance(z, (int, float, complex, np.number)) for z in zetas):
        return chain(shape_matrix(z) for z in reversed(zetas))
    import sympy
    out = sympy.eye(2)
    for z in zetas:
        out = sympy.Matrix([[0, -z], [1, -1]]) * out
    return out


def f_polynomial(zetas: Sequence) -> complex:
    """Closing relation of an ideal polygon, normalised so f_3 = 1 - z_2.

    Read off the (2,1) entry of the ordered product; the sign alternates with n.
    """
    n = len(zetas)
    if n < 3:
        raise ValueError("need n >= 3")
    return (-1) ** (n - 1) * region_gamma_product(zetas)[1, 0]


def f_recursive(zetas: Sequence) -> complex:
    """Same relation via f_n = f_{n-1} - z_{n-1} f_{n-2} (indices from 1)."""
    n = len(zetas)
    if n < 3:
        raise ValueError("need n >= 3")
    z = {i + 1: v for i, v in enumerate(zetas)}
    f = {2: 1, 3: 1 - z[2]}
    for m in range(4, n + 1):
        f[m] = f[m - 1] - z[m - 1] * f[m - 2]
    return f[n]


def is_scalar(m: np.ndarray, tol: float = SCALAR_TOL) -> bool:
    s = np.max(np.abs(m))
    if s == 0:
        return False
    return (abs(m[0, 1]) <= tol * s and abs(m[1, 0]) <= tol * s
            and abs(m[0, 0] - m[1, 1]) <= tol * s)


def normalize(m: np.ndarray) -> np.ndarray:
    """Scale to determinant one (sign left ambiguous)."""
    d = np.linalg.det(m)
    if d == 0:
        raise ValueError("singular matrix")
    return m / np.sqrt(d + 0j)


def projective_distance(a: np.ndarray, b: np.ndarray) -> float:
    """max-entry distance between det-1 representatives, minimised over sign."""
    a, b = normalize(a), normalize(b)
    return float(min(np.max(np.abs(a - b)), np.max(np.abs(a + b))))


def distance_from_identity(m: np.ndarray) -> float:
    return projective_distance(m, np.eye(2))


def chordal(z, w) -> float:
    """Chordal distance on the Riemann sphere."""
    if z is INF and w is INF:
        return 0.0
    if z is INF:
        return 2 / math.sqrt(1 + abs(w) ** 2)
    if w is INF:
        return 2 / math.sqrt(1 + abs(z) ** 2)
    return 2 * abs(z - w) / math.sqrt((1 + abs(z) ** 2) * (1 + abs(w) ** 2))


def develop_region(zetas: Sequence[complex]) -> tuple[list, float]:
    """Lay out the ideal polygon with the given shape parameters.

    The vertices before and after the first edge are placed at 1, infinity
    and 0; each further vertex is the image of 0 under the accumulated maps
    z -> -zeta/(z - 1).  Returns the vertex list (starting with infinity)
    and the chordal closure error of the three wrapped-around vertices.
    """
    n = len(zetas)
    if n < 3:
        raise DegenerateShape("need at least three vertices")
    for z in zetas:
        if z == 0 or not np.isfinite(z):
            raise DegenerateShape(f"shape parameter {z}")
    acc = np.eye(2, dtype=complex)
    verts = [INF, 0j]
    for i in range(n):
        acc = acc @ shape_matrix(zetas[i])
        verts.append(apply(acc, 0j))
    # verts[k] is vertex z_{k+1}; after n steps we should be back at z_1, z_2
    # and the vertex before them at 1
    err = max(chordal(verts[n], verts[0]), chordal(verts[n + 1], verts[1]),
              chordal(apply(acc, 1 + 0j), 1 + 0j))
    return verts[:n], err


def circle_fit_residual(points: Sequence) -> float:
    """How far points are from a common circle or line (0 = concyclic).

    A circle through infinity is a line, so when ``INF`` is among the points
    the finite ones are fitted by a line.
    """
    through_inf = any(p is INF for p in points)
    pts = np.array([p for p in points if p is not INF], dtype=complex)
    if len(pts) <= (2 if through_inf else 3):
        return 0.0
    # a|z|^2 + b x + c y + d = 0, with a = 0 for a line
    cols = [pts.real, pts.imag, np.ones(len(pts))]
    if not through_inf:
        cols.insert(0, np.abs(pts) ** 2)
    A = np.column_stack(cols)
    A = A / np.linalg.norm(A, axis=0).clip(1e-300)
    return float(np.linalg.svd(A, compute_uv=False)[-1])
