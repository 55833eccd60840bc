"""The problem's constraint spectrum: pair angles, ranks, weights, region types.

For a fixed problem size the constraint normals never move; only the
right-hand sides do. Every feasible region is therefore bounded by lines
drawn from one fixed fan of directions, and each region type can be
catalogued by which constraints contribute an edge. A vertex formed by a
wide-angled pair of normals pins the objective direction down poorly, a
narrow-angled pair pins it well; the rank and weight grade that.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .core import Dms
from .errors import (
    DegenerateRegion,
    DomainError,
    ParallelPair,
    UnsupportedDimension,
)
from .lpsolve import (
    TIGHT_TOL,
    _edge_interval,
    active_pair_at,
    enumerate_vertices,
    solve_simplex,
)
from .errors import Unbounded
from .reduction import ReducedLpp, Unlv, build_constraints, constraint_matrix

PARALLEL_DOT = 1.0 - 1e-12


@dataclass(frozen=True, eq=False)
class SpectrumPair:
    """One non-parallel constraint pair with its informativeness grading."""

    pair: tuple[int, int]
    angle: float
    sum_unlv: Unlv
    sum_length: float
    rank: int
    weight: float


@dataclass(frozen=True, eq=False)
class TrClassification:
    active_constraints: tuple[int, ...]
    vertex_ranks: tuple[int, ...]
    general_rank: int | None
    average_rank: float | None
    average_weight: float | None
    type_id: int | None
    group_id: int | None


@dataclass(frozen=True, eq=False)
class TrType:
    """One catalogue row: a realizable region type for the 2x3 problem."""

    type_id: int
    group_id: int
    active: tuple[int, ...]
    vertex_ranks: tuple[int, ...]
    general_rank: int
    average_rank: float
    average_weight: float


# Canonical numbering of the 18 realizable 2x3 region types and their shape
# families. The ids are a fixed published order, not derivable from geometry.
TYPE_CATALOGUE: dict[frozenset[int], tuple[int, int]] = {
    frozenset({1, 2, 5, 6}): (1, 5),
    frozenset({1, 2, 4, 5, 6}): (2, 7),
    frozenset({1, 2, 4, 6}): (3, 4),
    frozenset({1, 2, 3, 5, 6}): (4, 7),
    frozenset({1, 2, 3, 4, 5, 6}): (5, 9),
    frozenset({1, 3, 4, 5, 6}): (6, 8),
    frozenset({1, 3, 4, 6}): (7, 3),
    frozenset({1, 2, 3, 4, 6}): (8, 6),
    frozenset({1, 2, 3, 5}): (9, 4),
    frozenset({1, 3, 4, 5}): (10, 3),
    frozenset({1, 2, 3, 4, 5}): (11, 6),
    frozenset({1, 3, 4}): (12, 1),
    frozenset({1, 2, 3, 4}): (13, 5),
    frozenset({2, 5, 6}): (14, 1),
    frozenset({2, 4, 5, 6}): (15, 3),
    frozenset({2, 3, 4, 5, 6}): (16, 8),
    frozenset({2, 3, 5, 6}): (17, 3),
    frozenset({3, 4, 5, 6}): (18, 2),
}


@lru_cache(maxsize=None)
def _unlv_matrix(m: int, n: int) -> np.ndarray:
    lhs = constraint_matrix(m, n)
    return lhs / np.linalg.norm(lhs, axis=1, keepdims=True)


def constraint_unlvs(m: int, n: int) -> list[Unlv]:
    """Unit normals of every constraint row, in row order."""
    return [Unlv(row) for row in _unlv_matrix(m, n)]


def parallel_pairs(m: int, n: int) -> list[tuple[int, int]]:
    """Constraint pairs whose normals are parallel (same or opposite sense)."""
    mat = _unlv_matrix(m, n)
    out = []
    for i in range(mat.shape[0]):
        for j in range(i + 1, mat.shape[0]):
            if abs(float(mat[i] @ mat[j])) >= PARALLEL_DOT:
                out.append((i + 1, j + 1))
    return out


@lru_cache(maxsize=None)
def _angle_grades(m: int, n: int) -> tuple[float, ...]:
    """Distinct pair angles, widest first; a pair's rank is its angle's position."""
    mat = _unlv_matrix(m, n)
    angles = set()
    for i in range(mat.shape[0]):
        for j in range(i + 1, mat.shape[0]):
            dot = float(np.clip(mat[i] @ mat[j], -1.0, 1.0))
            if abs(dot) >= PARALLEL_DOT:
                continue
            angles.add(round(math.acos(dot), 9))
    return tuple(sorted(angles, reverse=True))


def pair_info(pair, m: int = 2, n: int = 3) -> SpectrumPair:
    """Angle, observation vector, rank, and weight of a constraint pair."""
    p, q = int(pair[0]), int(pair[1])
    mat = _unlv_matrix(m, n)
    if not (1 <= p <= mat.shape[0] and 1 <= q <= mat.shape[0]) or p == q:
        raise ParallelPair(f"({p}, {q}) is not a pair of distinct constraint indices")
    ep, eq = mat[p - 1], mat[q - 1]
    dot = float(np.clip(ep @ eq, -1.0, 1.0))
    if abs(dot) >= PARALLEL_DOT:
        raise ParallelPair(f"constraints {p} and {q} have parallel normals")
    angle = math.acos(dot)
    total = ep + eq
    lo, hi = sorted((p, q))
    return SpectrumPair(
        pair=(lo, hi),
        angle=angle,
        sum_unlv=Unlv(total),
        sum_length=float(np.linalg.norm(total)),
        rank=_angle_grades(m, n).index(round(angle, 9)) + 1,
        weight=1.0 - math.sin(angle / 2.0),
    )


def group_info(indices, m: int, n: int) -> tuple[Unlv, float]:
    """Observation vector and weight for a vertex formed by k constraints.

    Experimental generalization beyond planar systems: the vector is the
    normalized sum of the k normals with length L, and the weight
    1 - sqrt(1 - (L/k)^2) agrees with the pair weight at k = 2.
    """
    idx = sorted(set(int(i) for i in indices))
    if len(idx) < 2:
        raise ParallelPair("a vertex group needs at least two constraints")
    mat = _unlv_matrix(m, n)
    total = mat[[i - 1 for i in idx]].sum(axis=0)
    length = float(np.linalg.norm(total))
    ratio = min(length / len(idx), 1.0)
    return Unlv(total), 1.0 - math.sqrt(1.0 - ratio * ratio)


def _planar_active_set(lpp: ReducedLpp, tol: float = TIGHT_TOL) -> list[int]:
    """Constraints contributing a positive-length edge to a planar region."""
    vertices = enumerate_vertices(lpp, tol)
    active = []
    for i in range(lpp.lhs.shape[0]):
        anchors = [v.point for v in vertices if (i + 1) in v.active_set]
        if not anchors:
            continue
        lo, hi = _edge_interval(anchors[0], i, lpp, tol)
        if hi - lo > tol:
            active.append(i + 1)
    return active


def _general_active_set(lpp: ReducedLpp, tol: float = TIGHT_TOL) -> list[int]:
    """Non-redundant constraints of a general system, via one relaxation test each."""
    active = []
    for i in range(lpp.lhs.shape[0]):
        slack = 1.0 + abs(float(lpp.rhs[i]))
        relaxed_rhs = np.array(lpp.rhs, dtype=float)
        relaxed_rhs[i] += slack
        relaxed = lpp.with_rhs(relaxed_rhs)
        try:
            best = solve_simplex(relaxed, lpp.lhs[i], tol)
            cuts = best.value > float(lpp.rhs[i]) + tol
        except Unbounded:
            cuts = True
        if cuts:
            active.append(i + 1)
    return active


def _classify_planar(lpp: ReducedLpp, m: int, n: int, tol: float = TIGHT_TOL) -> TrClassification:
    vertices = enumerate_vertices(lpp, tol)
    if len(vertices) < 3:
        raise DegenerateRegion(
            f"region has only {len(vertices)} vertex point(s), no interior"
        )
    active = _planar_active_set(lpp, tol)
    ranks = []
    weights = []
    for v in vertices:
        pair = active_pair_at(v.point, lpp, tol)
        info = pair_info(pair, m, n)
        ranks.append(info.rank)
        weights.append(info.weight)
    ranks_sorted = tuple(sorted(ranks))
    type_id = group_id = None
    if (m, n) == (2, 3):
        type_id, group_id = TYPE_CATALOGUE.get(frozenset(active), (None, None))
    return TrClassification(
        active_constraints=tuple(active),
        vertex_ranks=ranks_sorted,
        general_rank=int(sum(ranks)),
        average_rank=float(np.mean(ranks)),
        average_weight=float(np.mean(weights)),
        type_id=type_id,
        group_id=group_id,
    )


def classify_tr(dms: Dms, tol: float = TIGHT_TOL) -> TrClassification:
    """Classify the feasible region induced by one situation.

    Planar systems get the full grading; other sizes report the active set only.
    """
    lpp = build_constraints(dms)
    if lpp.d == 2:
        return _classify_planar(lpp, dms.m, dms.n, tol)
    active = _general_active_set(lpp, tol)
    return TrClassification(
        active_constraints=tuple(active),
        vertex_ranks=(),
        general_rank=None,
        average_rank=None,
        average_weight=None,
        type_id=None,
        group_id=None,
    )


def polygon_dms(m: int, n: int, rho: float) -> Dms:
    """The maximally informative situation: every constraint line tangent to a circle.

    Valid for the 2x3 size, where the region is the hexagon tangent to the
    circle of radius rho centered at (rho, rho).
    """
    if (m, n) != (2, 3):
        raise UnsupportedDimension("the tangent polygon construction is defined for 2x3")
    if rho <= 0:
        raise DomainError("rho must be positive")
    root2 = math.sqrt(2.0)
    a1 = a2 = (2.0 + root2) * rho
    b2 = b3 = 2.0 * rho
    b1 = a1 + a2 - b2 - b3
    return Dms((a1, a2), (b1, b2, b3))


@lru_cache(maxsize=None)
def _normal_angles_2x3() -> dict[int, float]:
    mat = _unlv_matrix(2, 3)
    return {i + 1: math.atan2(mat[i, 1], mat[i, 0]) % (2 * math.pi) for i in range(6)}


def informativeness_report(m: int = 2, n: int = 3) -> list[TrType]:
    """All realizable region types for the 2x3 size, graded and ordered by type id.

    A constraint subset bounds a polygon with every member contributing an
    edge exactly when the subset's normals leave no directional gap of a
    half turn or more; adjacent normals in the angular order then meet at
    the polygon's vertices.
    """
    if (m, n) != (2, 3):
        raise UnsupportedDimension("the region-type catalogue is defined for 2x3")
    angles = _normal_angles_2x3()
    rows: list[TrType] = []
    indices = sorted(angles)
    for mask in range(1 << len(indices)):
        subset = [indices[k] for k in range(len(indices)) if mask >> k & 1]
        if len(subset) < 3:
            continue
        ordered = sorted(subset, key=lambda i: angles[i])
        gaps_ok = True
        for pos, idx in enumerate(ordered):
            nxt = ordered[(pos + 1) % len(ordered)]
            gap = (angles[nxt] - angles[idx]) % (2 * math.pi)
            if gap >= math.pi - 1e-9:
                gaps_ok = False
                break
        if not gaps_ok:
            continue
        key = frozenset(subset)
        if key not in TYPE_CATALOGUE:
            continue
        type_id, group_id = TYPE_CATALOGUE[key]
        ranks = []
        weights = []
        for pos, idx in enumerate(ordered):
            nxt = ordered[(pos + 1) % len(ordered)]
            info = pair_info((idx, nxt), m, n)
            ranks.append(info.rank)
            weights.append(info.weight)
        rows.append(TrType(
            type_id=type_id,
            group_id=group_id,
            active=tuple(sorted(subset)),
            vertex_ranks=tuple(sorted(ranks)),
            general_rank=int(sum(ranks)),
            average_rank=float(np.mean(ranks)),
            average_weight=float(np.mean(weights)),
        ))
    rows.sort(key=lambda r: r.type_id)
    return rows


def report_csv(rows: list[TrType]) -> str:
    """Render catalogue rows as CSV text."""
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow([
        "type_id", "active", "vertex_ranks", "general_rank",
        "average_rank", "average_weight", "group_id",
    ])
    for row in rows:
        writer.writerow([
            row.type_id,
            "-".join(str(i) for i in row.active),
            "-".join(str(r) for r in row.vertex_ranks),
            row.general_rank,
            f"{row.average_rank:.4f}",
            f"{row.average_weight:.4f}",
            row.group_id,
        ])
    return buf.getvalue()
