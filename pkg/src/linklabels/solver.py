"""Multi-start Levenberg-Marquardt search for label solutions."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .equations import ResidualSystem
from .moebius import regular_shape

log = logging.getLogger(__name__)

ACCEPT_TOL = 1e-9
DEDUP_TOL = 1e-6
ZERO_TOL = 1e-8
MAX_ITER = 200
STALL_WINDOW = 25
DEFAULT_BUDGET = 60
STALL_RATIO = 0.5


class NoConvergence(RuntimeError):
    pass


class NoCandidate(RuntimeError):
    pass


@dataclass
class Solution:
    x: np.ndarray
    max_residual: float
    shapes: list[list[complex | None]]
    regularity: float
    tags: dict = field(default_factory=dict)
    iterations: int = 0
    heuristic: bool = False

    def labels(self, system: ResidualSystem):
        return system.expand(self.x)


def lm_solve(system: ResidualSystem, x0: np.ndarray, max_iter: int = MAX_ITER,
             res_tol: float = 1e-11, step_tol: float = 1e-13):
    """Damped Gauss-Newton with multiplicative damping (x3 / /3).

    The complex normal equations are the real 2n-dimensional ones written
    in complex form, which is exact because the residual is holomorphic.
    Returns (x, max_abs_residual, iterations).
    """
    x = np.array(x0, dtype=complex)
    r = system.residual(x)
    cost = float(np.vdot(r, r).real)
    lam = 1e-3
    it = 0
    checkpoint = cost
    for it in range(1, max_iter + 1):
        if np.max(np.abs(r)) < res_tol:
            break
        if it % STALL_WINDOW == 0:
            # give up on starts that have settled at a positive local minimum
            if cost > STALL_RATIO * checkpoint and cost > 1e-12:
                break
            checkpoint = cost
        J = system.jacobian(x)
        A = J.conj().T @ J
        g = J.conj().T @ r
        diag = np.real(np.diag(A)).clip(1e-12)
        while True:
            try:
                dx = np.linalg.solve(A + lam * np.diag(diag), -g)
            except np.linalg.LinAlgError:
                lam *= 3
                if lam > 1e12:
                    break
                continue
            xn = x + dx
            rn = system.residual(xn)
            cn = float(np.vdot(rn, rn).real)
            if np.isfinite(cn) and cn < cost:
                x, r, cost = xn, rn, cn
                lam = max(lam / 3, 1e-12)
                break
            lam *= 3
            if lam > 1e12:
                break
        if lam > 1e12 or np.max(np.abs(dx)) < step_tol:
            break
    return x, float(np.max(np.abs(r))), it


class CornerConsistency:
    """Edge labels for which regular corner shapes give a well-defined w.

    At a corner of an n-gon a regular shape asks for
    ``w = kappa * zeta_n * u1 * u2``.  The residual compares these values
    between consecutive corners at the same crossing as ratios, so labels
    that make every corner value vanish are not solutions.
    """

    def __init__(self, system: ResidualSystem):
        self.system = system
        self.n_unknowns = system.ne
        per = {k: [] for k in range(system.nc)}
        for r in system.regions:
            if r.n < 3:
                continue
            z = regular_shape(r.n)
            for c in r.corners:
                c1, o1 = system._side[c.before]
                c2, o2 = system._side[c.after]
                per[c.crossing].append((c1, o1, c2, o2, c.kappa * z))
        self.per_crossing = per
        self.pairs = [(cs[j], cs[j + 1]) for cs in per.values() for j in range(len(cs) - 1)]
        self.fixed = [system._side[s] for s in system.bigon_sides]

    @staticmethod
    def value(u, c):
        c1, o1, c2, o2, a = c
        return a * (u[c1] - o1) * (u[c2] - o2)

    def residual(self, u):
        out = [self.value(u, p) / self.value(u, q) - 1 for p, q in self.pairs]
        out += [u[col] - off for col, off in self.fixed]
        return np.array(out, dtype=complex)

    def jacobian(self, u):
        J = np.zeros((len(self.pairs) + len(self.fixed), self.n_unknowns), dtype=complex)
        for i, (p, q) in enumerate(self.pairs):
            ratio = self.value(u, p) / self.value(u, q)
            for (c1, o1, c2, o2, _), sgn in ((p, 1), (q, -1)):
                J[i, c1] += sgn * ratio / (u[c1] - o1)
                J[i, c2] += sgn * ratio / (u[c2] - o2)
        for i, (col, _) in enumerate(self.fixed):
            J[len(self.pairs) + i, col] = 1.0
        return J

    def crossing_labels(self, u) -> np.ndarray:
        return np.array([np.mean([self.value(u, c) for c in cs]) if cs else 0.5
                         for cs in self.per_crossing.values()], dtype=complex)


def initial_guess(system: ResidualSystem, mode: str = "regular",
                  rng: np.random.Generator | None = None) -> np.ndarray:
    """Starting point for the solver.

    ``regular``: black labels near 1/2 + i*h with bigon sides set exactly,
    crossing labels chosen so each corner has roughly the shape of a regular
    polygon with as many sides as its region.  ``consistent``: random edge
    labels first moved (by a short solve) to where the regular corner values
    agree at every crossing, then w set from them; this reaches solutions
    with real labels that the other modes rarely find.  ``anchored``: the
    same short solve, started from the ``regular`` edge labels; on families
    with many triangles it reaches the geometric root far more often than
    either parent mode.  ``random``: uniform in the disk of radius 2.
    """
    rng = rng if rng is not None else np.random.default_rng()
    n = system.n_unknowns
    if mode in ("consistent", "anchored"):
        pre = CornerConsistency(system)
        if mode == "anchored":
            u0 = np.full(system.ne, 0.5 + 1j * rng.uniform(0.3, 1.0))
            u0 = u0 + 0.05 * (rng.normal(size=system.ne) + 1j * rng.normal(size=system.ne))
        else:
            u0 = 2 * np.sqrt(rng.random(system.ne)) * np.exp(2j * np.pi * rng.random(system.ne))
        with np.errstate(all="ignore"):
            u, _, _ = lm_solve(pre, u0, max_iter=60)
            w = pre.crossing_labels(u)
        x = np.concatenate([u, w])
        if not np.all(np.isfinite(x)):
            x = np.concatenate([u0, np.full(system.nc, 0.5)])
    elif mode == "random":
        rad = 2 * np.sqrt(rng.random(n))
        x = rad * np.exp(2j * np.pi * rng.random(n))
    else:
        h = rng.uniform(0.3, 1.0)
        x = np.full(n, 0.5 + 1j * h, dtype=complex)
        x[:system.ne] += 0.05 * (rng.normal(size=system.ne) + 1j * rng.normal(size=system.ne))
        for s in system.bigon_sides:
            col, off = system._side[s]
            x[col] = off
        acc = np.zeros(system.nc, dtype=complex)
        cnt = np.zeros(system.nc)
        for r in system.regions:
            if r.n < 3:
                continue
            z = regular_shape(r.n)
            for c in r.corners:
                u1 = system.side_label(x, c.before)
                u2 = system.side_label(x, c.after)
                acc[c.crossing] += c.kappa * z * u1 * u2
                cnt[c.crossing] += 1
        w = np.where(cnt > 0, acc / np.maximum(cnt, 1), 0.5)
        w = w + 0.02 * (rng.normal(size=system.nc) + 1j * rng.normal(size=system.nc))
        x[system.ne:] = w
    if np.max(np.abs(x)) < 1e-12:
        x = x + 0.1 * (rng.normal(size=n) + 1j * rng.normal(size=n))
    return x


def _describe(system: ResidualSystem, x: np.ndarray, maxres: float, it: int) -> Solution:
    shapes = [system.corner_shapes(x, i) for i in range(len(system.regions))]
    dev = 0.0
    nonzero = True
    for r, sh in zip(system.regions, shapes):
        if r.n < 3:
            continue
        for z in sh:
            if z is None:
                nonzero = False
            else:
                dev += abs(z - regular_shape(r.n)) ** 2
        for s in r.sides:
            if abs(system.side_label(x, s)) < ZERO_TOL:
                nonzero = False
    ub = system.black_labels(x)
    tags = {
        "nonzero_edge_labels": nonzero,
        "nonneg_imag": bool(np.all(ub.imag >= -ACCEPT_TOL)),
        "real": bool(np.all(np.abs(x.imag) < 1e-8)),
        "conjugate_partner": None,
    }
    return Solution(x=x, max_residual=maxres, shapes=shapes,
                    regularity=dev if nonzero else float("inf"), tags=tags, iterations=it)


def is_degenerate(system: ResidualSystem, x: np.ndarray) -> bool:
    """Vanishing crossing label: the region products collapse to zero."""
    return bool(np.min(np.abs(system.crossing_labels(x))) < ZERO_TOL)


def polish(system: ResidualSystem, x: np.ndarray, iters: int = 8) -> tuple[np.ndarray, float]:
    """A few undamped Gauss-Newton steps near a root."""
    r = system.residual(x)
    for _ in range(iters):
        J = system.jacobian(x)
        dx = np.linalg.lstsq(J, -r, rcond=None)[0]
        xn = x + dx
        rn = system.residual(xn)
        if np.max(np.abs(rn)) >= np.max(np.abs(r)):
            break
        x, r = xn, rn
    return x, float(np.max(np.abs(r)))


def solve_all(system: ResidualSystem, budget: int = DEFAULT_BUDGET, seed: int = 0,
              tol: float = ACCEPT_TOL,
              modes: tuple[str, ...] = ("anchored", "regular", "consistent", "random"),
              starts: list[np.ndarray] | None = None) -> list[Solution]:
    """Search for all distinct non-degenerate solutions.

    Starts cycle through ``modes``; solutions whose conjugate has not been
    seen are completed by conjugation (the residual has real coefficients).
    Sorted by regularity deviation, then by label values, so a fixed seed
    gives an identical list.
    """
    if budget < 1:
        raise ValueError("budget must be >= 1")
    rng = np.random.default_rng(seed)
    found: list[np.ndarray] = []
    found_it: list[int] = []

    def add(x, it):
        if any(np.max(np.abs(x - y)) < DEDUP_TOL for y in found):
            return False
        found.append(x)
        found_it.append(it)
        return True

    start_list = list(starts or [])
    for t in range(budget + len(start_list)):
        if t < len(start_list):
            x0 = start_list[t]
        else:
            x0 = initial_guess(system, modes[(t - len(start_list)) % len(modes)], rng)
        x, res, it = lm_solve(system, x0)
        if res < 1e-7:
            x, res = polish(system, x)
        if res >= tol or is_degenerate(system, x):
            continue
        add(x, it)
        xc, rc = polish(system, np.conj(x), 2)
        if rc >= tol:
            # the residual has real coefficients, so this only fails when the
            # root is badly conditioned; retry with a full solve
            xc, rc, _ = lm_solve(system, np.conj(x))
        if rc < tol and not is_degenerate(system, xc):
            add(xc, 0)
    if not found:
        raise NoConvergence(f"no start converged below {tol:g} in {budget} tries")
    sols = []
    for x, it in zip(found, found_it):
        res = float(np.max(np.abs(system.residual(x))))
        sols.append(_describe(system, x, res, it))
    sols.sort(key=lambda s: (round(s.regularity, 9),
                             tuple(np.round(np.concatenate([s.x.real, s.x.imag]), 8))))
    for i, s in enumerate(sols):
        for j, t in enumerate(sols):
            if i != j and np.max(np.abs(np.conj(s.x) - t.x)) < DEDUP_TOL:
                s.tags["conjugate_partner"] = j
        if s.tags["real"]:
            s.tags["conjugate_partner"] = i
    log.info("found %d solutions", len(sols))
    return sols


class NotAnAutomorphism(ValueError):
    pass


class SymmetricSystem:
    """Residual restricted to labels invariant under a diagram symmetry.

    ``crossing_perm[k]`` is the image of crossing k under an orientation
    preserving symmetry that keeps slot positions; edges follow from the
    PD tuples.  Unknowns are one value per orbit.
    """

    def __init__(self, system: ResidualSystem, crossing_perm):
        d = system.diagram
        perm = list(crossing_perm)
        if sorted(perm) != list(range(d.num_crossings)):
            raise NotAnAutomorphism("crossing map is not a permutation")
        emap: dict[int, int] = {}
        for k, x in enumerate(d.pd):
            for p, e in enumerate(x):
                img = d.pd[perm[k]][p]
                if emap.setdefault(e, img) != img:
                    raise NotAnAutomorphism(f"edge {e} has two images")
        for e, f in emap.items():
            if (d.black_side[e].left != d.black_side[f].left
                    or d.edge_kappa[e] != d.edge_kappa[f]):
                raise NotAnAutomorphism(f"edge {e} and its image differ in colour")
        self.system = system
        cols = {}
        for i, e in enumerate(system.edges):
            cols[i] = ("e", _orbit_rep(e, emap))
        for k in range(system.nc):
            cols[system.ne + k] = ("w", _orbit_rep(k, dict(enumerate(perm))))
        keys = sorted(set(cols.values()))
        index = {key: j for j, key in enumerate(keys)}
        self.n_unknowns = len(keys)
        self.P = np.zeros((system.n_unknowns, len(keys)))
        for i, key in cols.items():
            self.P[i, index[key]] = 1.0

        self.n_edge_orbits = int(sum(1 for key in keys if key[0] == "e"))
        self.edge_part = _Restricted(CornerConsistency(system),
                                     self.P[:system.ne, :self.n_edge_orbits])

    def lift(self, y: np.ndarray) -> np.ndarray:
        return self.P @ y

    def project(self, x: np.ndarray) -> np.ndarray:
        return (self.P.T @ x) / self.P.sum(axis=0)

    def residual(self, y: np.ndarray) -> np.ndarray:
        return self.system.residual(self.lift(y))

    def jacobian(self, y: np.ndarray) -> np.ndarray:
        return self.system.jacobian(self.lift(y)) @ self.P


class _Restricted:
    """A residual map composed with a linear substitution x = P y."""

    def __init__(self, inner, P):
        self.inner = inner
        self.P = P

    def residual(self, y):
        return self.inner.residual(self.P @ y)

    def jacobian(self, y):
        return self.inner.jacobian(self.P @ y) @ self.P


def _orbit_rep(a, perm: dict) -> int:
    seen = [a]
    b = perm[a]
    while b != a:
        seen.append(b)
        b = perm[b]
    return min(seen)


def solve_symmetric(system: ResidualSystem, crossing_perm, budget: int = 24,
                    seed: int = 0, tol: float = ACCEPT_TOL,
                    modes: tuple[str, ...] = ("consistent", "random")) -> list[Solution]:
    """Solutions invariant under a symmetry, found in the reduced unknowns.

    Much cheaper than :func:`solve_all` on large symmetric diagrams; only
    invariant solutions can be found.  Each reduced root is polished on the
    full system before it is accepted.
    """
    sym = SymmetricSystem(system, crossing_perm)
    rng = np.random.default_rng(seed)
    found = []
    for t in range(budget):
        mode = modes[t % len(modes)]
        if mode == "consistent":
            # the consistency pre-solve is itself done on edge orbits
            m = sym.n_edge_orbits
            v0 = 2 * np.sqrt(rng.random(m)) * np.exp(2j * np.pi * rng.random(m))
            with np.errstate(all="ignore"):
                v, _, _ = lm_solve(sym.edge_part, v0, max_iter=60)
                u = sym.edge_part.P @ v
                w = sym.edge_part.inner.crossing_labels(u)
            x0 = np.concatenate([u, w])
            if not np.all(np.isfinite(x0)):
                continue
        else:
            x0 = initial_guess(system, mode, rng)
        y, res, it = lm_solve(sym, sym.project(x0))
        x = sym.lift(y)
        if res < 1e-7:
            x, res = polish(system, x)
        if res >= tol or is_degenerate(system, x):
            continue
        for z in (x, np.conj(x)):
            if not any(np.max(np.abs(z - f.x)) < DEDUP_TOL for f in found):
                found.append(_describe(system, z, float(np.max(np.abs(system.residual(z)))), it))
    if not found:
        raise NoConvergence(f"no symmetric start converged below {tol:g} in {budget} tries")
    found.sort(key=lambda s: (round(s.regularity, 9),
                              tuple(np.round(np.concatenate([s.x.real, s.x.imag]), 8))))
    return found


def select_geometric(solutions: list[Solution], alternating: bool = True) -> Solution:
    """Heuristic choice of the geometric solution.

    Discards solutions with a zero edge label on a region of three or more
    sides, prefers edge labels with non-negative imaginary part, then takes
    the most nearly regular polygons.  Volume is not computed; the choice is
    flagged heuristic.
    """
    if not solutions:
        raise NoCandidate("empty solution list")
    cands = [s for s in solutions if s.tags.get("nonzero_edge_labels", True)]
    if alternating:
        cands = [s for s in cands if not s.tags.get("real")] or cands
        upper = [s for s in cands if s.tags.get("nonneg_imag")]
        cands = upper or cands
    if not cands:
        raise NoCandidate("every solution has a vanishing edge label")
    best = min(cands, key=lambda s: s.regularity)
    best.heuristic = True
    return best
