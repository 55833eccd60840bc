"""Solvers and vertex geometry for the reduced inequality system.

The planar path enumerates the feasible polygon's vertices directly, which
also powers region classification and click-target geometry. The tableau
path handles any dimension and is checked against the planar path in tests.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateObjective,
    DegenerateRegion,
    DegenerateVertex,
    DomainError,
    EmptyRegion,
    ShapeError,
    Unbounded,
    UnsupportedDimension,
)
from .reduction import ReducedLpp, as_direction
from .core import _freeze

TIGHT_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class Vertex:
    """A feasible extreme point with its tight constraints (1-based indices)."""

    point: np.ndarray
    active_set: tuple[int, ...]


@dataclass(frozen=True, eq=False)
class Solution:
    """An optimal vertex, the adjacent constraint pair (planar case), and the value."""

    vertex: Vertex
    active_pair: tuple[int, int] | None
    value: float


def residuals(point, lpp: ReducedLpp) -> np.ndarray:
    """Slack of each constraint at a point; negative means violated."""
    p = np.asarray(point, dtype=float).ravel()
    return lpp.rhs - lpp.lhs @ p


def tight_set(point, lpp: ReducedLpp, tol: float = TIGHT_TOL) -> tuple[int, ...]:
    """1-based indices of constraints holding with equality at the point."""
    res = residuals(point, lpp)
    return tuple(int(i) + 1 for i in np.flatnonzero(res <= tol))


def is_feasible(point, lpp: ReducedLpp, tol: float = TIGHT_TOL) -> bool:
    return bool(residuals(point, lpp).min() >= -tol)


def _rows_parallel(a: np.ndarray, b: np.ndarray) -> bool:
    return abs(a[0] * b[1] - a[1] * b[0]) <= 1e-12 * max(1.0, float(np.abs(a).max() * np.abs(b).max()))


def enumerate_vertices(lpp: ReducedLpp, tol: float = TIGHT_TOL) -> list[Vertex]:
    """All vertices of a planar system, counterclockwise along the boundary."""
    if lpp.d != 2:
        raise UnsupportedDimension(f"vertex enumeration needs 2 free variables, got {lpp.d}")
    A, b = lpp.lhs, lpp.rhs
    rows = A.shape[0]
    points: list[np.ndarray] = []
    for i in range(rows):
        for j in range(i + 1, rows):
            det = A[i, 0] * A[j, 1] - A[i, 1] * A[j, 0]
            if abs(det) < 1e-12:
                continue
            p = np.array([
                (b[i] * A[j, 1] - A[i, 1] * b[j]) / det,
                (A[i, 0] * b[j] - b[i] * A[j, 0]) / det,
            ])
            if (A @ p <= b + tol).all():
                points.append(p)
    unique: list[np.ndarray] = []
    for p in points:
        if not any(np.abs(p - q).max() <= 1e-9 for q in unique):
            unique.append(p)
    if not unique:
        raise EmptyRegion("constraint system has no feasible point")
    center = np.mean(unique, axis=0)
    unique.sort(key=lambda p: np.arctan2(p[1] - center[1], p[0] - center[0]))
    return [Vertex(point=_freeze(p), active_set=tight_set(p, lpp, tol)) for p in unique]


def _edge_interval(anchor: np.ndarray, row_index: int, lpp: ReducedLpp,
                   tol: float = TIGHT_TOL) -> tuple[float, float]:
    """Parameter range of the feasible segment through anchor along one constraint line."""
    A, b = lpp.lhs, lpp.rhs
    row = A[row_index]
    direction = np.array([-row[1], row[0]])
    direction = direction / np.linalg.norm(direction)
    lo, hi = -np.inf, np.inf
    res = residuals(anchor, lpp)
    for k in range(A.shape[0]):
        if k == row_index:
            continue
        speed = float(A[k] @ direction)
        if speed > tol:
            hi = min(hi, res[k] / speed)
        elif speed < -tol:
            lo = max(lo, res[k] / speed)
    return float(lo), float(hi)


def active_pair_at(point, lpp: ReducedLpp, tol: float = TIGHT_TOL) -> tuple[int, int]:
    """The two constraints whose edges meet at a planar vertex.

    With more than two constraints tight (a degenerate corner), the pair is
    the two whose incident boundary edges have positive length.
    """
    if lpp.d != 2:
        raise UnsupportedDimension("adjacent pairs are defined for planar systems only")
    p = np.asarray(point, dtype=float).ravel()
    res = residuals(p, lpp)
    if res.min() < -tol:
        raise DomainError(f"point {p.tolist()} violates constraint {int(res.argmin()) + 1}")
    tight = [int(i) for i in np.flatnonzero(res <= tol)]
    if len(tight) < 2:
        raise DegenerateVertex(f"only {len(tight)} constraint(s) tight at {p.tolist()}")
    if len(tight) == 2:
        i, j = tight
        if _rows_parallel(lpp.lhs[i], lpp.lhs[j]):
            raise DegenerateRegion("the two tight constraints are parallel")
        return (i + 1, j + 1)
    edged = []
    for t in tight:
        lo, hi = _edge_interval(p, t, lpp, tol)
        if hi - lo > tol:
            edged.append(t)
    if len(edged) == 2:
        i, j = edged
        if _rows_parallel(lpp.lhs[i], lpp.lhs[j]):
            raise DegenerateRegion("adjacent edges lie on parallel constraints")
        return (i + 1, j + 1)
    if len(edged) < 2:
        raise DegenerateRegion(f"region has no two edges meeting at {p.tolist()}")
    raise DegenerateVertex(f"{len(edged)} positive-length edges meet at {p.tolist()}")


def _improving_ray(lpp: ReducedLpp, obj: np.ndarray, tol: float) -> np.ndarray | None:
    """A feasible recession direction that increases the objective, if one exists."""
    A = lpp.lhs
    unit_obj = obj / np.linalg.norm(obj)
    candidates = [unit_obj]
    for row in A:
        perp = np.array([-row[1], row[0]])
        norm = np.linalg.norm(perp)
        if norm < 1e-12:
            continue
        candidates.append(perp / norm)
        candidates.append(-perp / norm)
    for d in candidates:
        if (A @ d <= 1e-9).all() and float(unit_obj @ d) > tol:
            return d
    return None


def solve_max(lpp: ReducedLpp, objective, tol: float = TIGHT_TOL) -> Solution:
    """Maximize a linear objective; ties go to the lexicographically smallest point."""
    obj = as_direction(objective)
    if obj.size != lpp.d:
        raise ShapeError(f"objective has {obj.size} components, system has {lpp.d}")
    if float(np.linalg.norm(obj)) == 0.0:
        raise DegenerateObjective("objective vector is zero")
    if lpp.d != 2:
        return solve_simplex(lpp, objective, tol)
    vertices = enumerate_vertices(lpp, tol)
    ray = _improving_ray(lpp, obj, tol)
    if ray is not None:
        raise Unbounded(f"objective increases along direction {ray.tolist()}")
    values = [float(obj @ v.point) for v in vertices]
    best = max(values)
    contenders = [v for v, val in zip(vertices, values) if val >= best - tol]
    chosen = min(contenders, key=lambda v: tuple(v.point))
    pair = active_pair_at(chosen.point, lpp, tol)
    return Solution(vertex=chosen, active_pair=pair, value=float(obj @ chosen.point))


def _run_tableau(T: np.ndarray, basis: list[int], costs: np.ndarray, tol: float) -> None:
    """Bland-rule simplex iterations on an equality tableau, in place."""
    rows = T.shape[0]
    while True:
        reduced = costs - costs[basis] @ T[:, :-1]
        reduced[basis] = 0.0
        entering = -1
        for j in range(reduced.size):
            if reduced[j] > tol:
                entering = j
                break
        if entering < 0:
            return
        best = None
        for r in range(rows):
            coef = T[r, entering]
            if coef > tol:
                ratio = T[r, -1] / coef
                key = (ratio, basis[r])
                if best is None or key < best[0]:
                    best = (key, r)
        if best is None:
            raise Unbounded("no constraint limits the entering variable")
        leave = best[1]
        T[leave] /= T[leave, entering]
        for r in range(rows):
            if r != leave and abs(T[r, entering]) > 0.0:
                T[r] -= T[r, entering] * T[leave]
        basis[leave] = entering


def solve_simplex(lpp: ReducedLpp, objective, tol: float = TIGHT_TOL) -> Solution:
    """Two-phase tableau solver for any dimension.

    Free variables are split into positive parts, every row carries a slack,
    and rows with negative right-hand sides receive phase-one artificials.
    Ties resolve to whichever optimal basis Bland's rule reaches first.
    """
    obj = as_direction(objective)
    if obj.size != lpp.d:
        raise ShapeError(f"objective has {obj.size} components, system has {lpp.d}")
    if float(np.linalg.norm(obj)) == 0.0:
        raise DegenerateObjective("objective vector is zero")

    A, b = np.array(lpp.lhs, dtype=float), np.array(lpp.rhs, dtype=float)
    rows, d = A.shape
    flip = b < 0
    body = np.hstack([A, -A, np.eye(rows)])
    body[flip] *= -1.0
    rhs = np.where(flip, -b, b)

    art_rows = np.flatnonzero(flip)
    n_art = art_rows.size
    art_cols = np.zeros((rows, n_art))
    for k, r in enumerate(art_rows):
        art_cols[r, k] = 1.0
    T = np.hstack([body, art_cols, rhs.reshape(-1, 1)])
    n_main = body.shape[1]
    basis = [0] * rows
    for r in range(rows):
        basis[r] = 2 * d + r  # slack column
    for k, r in enumerate(art_rows):
        basis[r] = n_main + k  # artificial column

    if n_art:
        phase1 = np.zeros(n_main + n_art)
        phase1[n_main:] = -1.0
        _run_tableau(T, basis, phase1, tol)
        infeasibility = sum(T[r, -1] for r in range(rows) if basis[r] >= n_main)
        if infeasibility > tol:
            raise EmptyRegion("phase one could not eliminate the artificial variables")
        for r in range(rows):
            if basis[r] >= n_main:
                # degenerate artificial still basic at level zero: swap it out
                pivot_col = next(
                    (j for j in range(n_main) if abs(T[r, j]) > tol and j not in basis),
                    None,
                )
                if pivot_col is None:
                    continue  # redundant row, leave the zero artificial in place
                T[r] /= T[r, pivot_col]
                for rr in range(rows):
                    if rr != r and abs(T[rr, pivot_col]) > 0.0:
                        T[rr] -= T[rr, pivot_col] * T[r]
                basis[r] = pivot_col
        T = np.hstack([T[:, :n_main], T[:, -1:]])
        # any artificial stuck in the basis sits on a redundant zero row
        basis = [col if col < n_main else -1 for col in basis]
        keep = [r for r in range(rows) if basis[r] >= 0]
        T = T[keep]
        basis = [basis[r] for r in keep]

    phase2 = np.zeros(n_main)
    phase2[:d] = obj
    phase2[d:2 * d] = -obj
    _run_tableau(T, basis, phase2, tol)

    x_ext = np.zeros(n_main)
    for r, col in enumerate(basis):
        x_ext[col] = T[r, -1]
    point = x_ext[:d] - x_ext[d:2 * d]
    vertex = Vertex(point=_freeze(point), active_set=tight_set(point, lpp, tol))
    pair = active_pair_at(point, lpp, tol) if lpp.d == 2 else None
    return Solution(vertex=vertex, active_pair=pair, value=float(obj @ point))
