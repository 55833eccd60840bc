"""Reduce a transportation problem to an inequality-form maximum LP and back.

Balance lets the first-row and first-column plan cells be expressed through
the interior cells x_ij (i,j >= 2), called free variables. The cost minimum
becomes a maximum of a linear form over the free variables, subject to a
constraint matrix that depends only on the problem dimensions. Constraint
rows are numbered from 1 in the fixed order: aggregate row, supply rows for
i >= 2, demand rows for j >= 2, then one nonnegativity row per free cell.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import Dms, TransportInstance, TransportPlan, _freeze
from .errors import InfeasibleFreeVars, ShapeError, ZeroVector

RECONSTRUCT_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class Unlv:
    """A unit-length normal vector; normalizes its input on construction."""

    e: np.ndarray

    def __post_init__(self):
        vec = np.asarray(self.e, dtype=float).ravel()
        norm = float(np.linalg.norm(vec))
        if norm == 0.0:
            raise ZeroVector("cannot normalize a zero vector")
        object.__setattr__(self, "e", _freeze(vec / norm))


def unlv(vector) -> Unlv:
    """Normalize a vector to unit Euclidean length."""
    return Unlv(vector)


def as_direction(vector) -> np.ndarray:
    """Accept an Unlv or a plain array and return the float array."""
    if isinstance(vector, Unlv):
        return vector.e
    return np.asarray(vector, dtype=float).ravel()


@dataclass(frozen=True, eq=False)
class ReducedObjective:
    """Coefficients of the reduced maximum objective.

    ctilde holds the interior cost contrasts; the first cost row and column
    are retained so the situation-dependent additive constant can be formed
    for any balanced situation.
    """

    ctilde: np.ndarray
    first_row: np.ndarray
    first_col: np.ndarray

    def constant(self, dms: Dms) -> float:
        """Additive constant of the full reduced objective for one situation."""
        a, b = dms.supply, dms.demand
        c00 = self.first_col[0]
        fixed = c00 * (a[0] - b[1:].sum())
        fixed += float(self.first_row[1:] @ b[1:])
        fixed += float(self.first_col[1:] @ a[1:])
        return -float(fixed)

    @property
    def direction(self) -> Unlv:
        """Unit-length objective direction in free-variable space."""
        return Unlv(self.ctilde.ravel())


@dataclass(frozen=True, eq=False)
class ReducedLpp:
    """Inequality system lhs @ x <= rhs over the free variables."""

    m: int
    n: int
    lhs: np.ndarray
    rhs: np.ndarray

    @property
    def d(self) -> int:
        return int(self.lhs.shape[1])

    def with_rhs(self, rhs) -> "ReducedLpp":
        rhs = np.asarray(rhs, dtype=float)
        if rhs.shape != self.rhs.shape:
            raise ShapeError(f"rhs must have shape {self.rhs.shape}")
        return ReducedLpp(self.m, self.n, self.lhs, _freeze(rhs))


def constraint_matrix(m: int, n: int) -> np.ndarray:
    """Fixed constraint coefficients for an m x n problem; no situation needed."""
    d = (m - 1) * (n - 1)
    rows = 1 + (m - 1) + (n - 1) + d
    lhs = np.zeros((rows, d))
    lhs[0, :] = -1.0
    r = 1
    for i in range(m - 1):  # supply rows i = 2..m
        lhs[r, i * (n - 1):(i + 1) * (n - 1)] = 1.0
        r += 1
    for j in range(n - 1):  # demand rows j = 2..n
        lhs[r, j::(n - 1)] = 1.0
        r += 1
    for k in range(d):  # nonnegativity of each free cell
        lhs[r + k, k] = -1.0
    return lhs


def build_constraints(dms: Dms) -> ReducedLpp:
    """Attach situation-derived right-hand sides to the fixed coefficient rows."""
    a, b = dms.supply, dms.demand
    m, n = dms.m, dms.n
    d = (m - 1) * (n - 1)
    rhs = np.concatenate([
        [a[0] - b[1:].sum()],
        a[1:],
        b[1:],
        np.zeros(d),
    ])
    return ReducedLpp(m, n, _freeze(constraint_matrix(m, n)), _freeze(rhs))


def reduce_objective(instance_or_costs) -> ReducedObjective:
    """Interior cost contrasts c~_ij = -(c_11 - c_i1 - c_1j + c_ij)."""
    if isinstance(instance_or_costs, TransportInstance):
        c = instance_or_costs.costs
    else:
        c = np.asarray(instance_or_costs, dtype=float)
        if c.ndim != 2 or c.shape[0] < 2 or c.shape[1] < 2:
            raise ShapeError(f"costs must be an m x n matrix with m,n >= 2, got {c.shape}")
    ctilde = -(c[0, 0] - c[1:, :1] - c[:1, 1:] + c[1:, 1:])
    return ReducedObjective(
        ctilde=_freeze(ctilde),
        first_row=_freeze(c[0, :]),
        first_col=_freeze(c[:, 0]),
    )


def reconstruct_plan(dms: Dms, free_vars, tol: float = RECONSTRUCT_TOL) -> TransportPlan:
    """Rebuild the full plan from the interior cells via the balance identities."""
    m, n = dms.m, dms.n
    fv = np.asarray(free_vars, dtype=float).reshape(m - 1, n - 1)
    a, b = dms.supply, dms.demand
    x = np.zeros((m, n))
    x[1:, 1:] = fv
    x[0, 0] = a[0] - b[1:].sum() + fv.sum()
    x[1:, 0] = a[1:] - fv.sum(axis=1)
    x[0, 1:] = b[1:] - fv.sum(axis=0)
    if x.min() < -tol:
        i, j = np.unravel_index(int(np.argmin(x)), x.shape)
        raise InfeasibleFreeVars(
            f"reconstructed cell x[{i + 1},{j + 1}] = {x[i, j]:g} is negative"
        )
    x[(x < 0) & (x > -tol)] = 0.0
    return TransportPlan(x)


def reduced_value(objective: ReducedObjective, dms: Dms, free_vars) -> float:
    """Value of the reduced maximum objective; equals minus the raw plan cost."""
    fv = np.asarray(free_vars, dtype=float).ravel()
    return objective.constant(dms) + float(objective.ctilde.ravel() @ fv)


def representative_costs(ctilde) -> np.ndarray:
    """One cost matrix from the gauge class that reduces back to ctilde.

    The first row and column are pinned to zero; any row or column potential
    added on top yields the same reduced objective, so individual cost cells
    are not identifiable, only their interior contrasts are.
    """
    ct = np.atleast_2d(np.asarray(ctilde, dtype=float))
    m, n = ct.shape[0] + 1, ct.shape[1] + 1
    costs = np.zeros((m, n))
    costs[1:, 1:] = -ct
    return costs
