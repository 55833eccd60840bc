"""Balanced transportation problems: instances, situations, plans, and cost accounting.

A problem ships goods from m departure points (supply a_i) to n destinations
(demand b_j) at per-unit cost c_ij, with total supply equal to total demand.
A decision-making situation (Dms) is the same data without the costs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import BalanceError, DegenerateCosts, DomainError, ShapeError

BALANCE_TOL = 1e-9
FEAS_TOL = 1e-9


def _freeze(arr: np.ndarray) -> np.ndarray:
    out = np.array(arr, dtype=float)
    out.flags.writeable = False
    return out


def _check_vector(name: str, values) -> np.ndarray:
    vec = np.asarray(values, dtype=float)
    if vec.ndim != 1 or vec.size < 2:
        raise ShapeError(f"{name} must be a vector of length >= 2, got shape {vec.shape}")
    if not np.all(np.isfinite(vec)):
        raise DomainError(f"{name} contains non-finite entries")
    if np.any(vec <= 0):
        raise DomainError(f"{name} entries must be strictly positive")
    return vec


def _check_balance(supply: np.ndarray, demand: np.ndarray) -> None:
    # Integer data must balance exactly; real data gets a small tolerance.
    integral = np.all(supply == np.round(supply)) and np.all(demand == np.round(demand))
    tol = 0.0 if integral else BALANCE_TOL
    if abs(float(supply.sum()) - float(demand.sum())) > tol:
        raise BalanceError(
            f"total supply {supply.sum():g} != total demand {demand.sum():g}"
        )


@dataclass(frozen=True, eq=False)
class Dms:
    """A decision-making situation: supply and demand vectors, no costs."""

    supply: np.ndarray
    demand: np.ndarray

    def __post_init__(self):
        supply = _check_vector("supply", self.supply)
        demand = _check_vector("demand", self.demand)
        _check_balance(supply, demand)
        object.__setattr__(self, "supply", _freeze(supply))
        object.__setattr__(self, "demand", _freeze(demand))

    @property
    def m(self) -> int:
        return self.supply.size

    @property
    def n(self) -> int:
        return self.demand.size


@dataclass(frozen=True, eq=False)
class TransportInstance:
    """A full direct-problem input: cost matrix plus a balanced situation."""

    costs: np.ndarray
    supply: np.ndarray
    demand: np.ndarray

    def __post_init__(self):
        costs = np.asarray(self.costs, dtype=float)
        if costs.ndim != 2 or costs.shape[0] < 2 or costs.shape[1] < 2:
            raise ShapeError(f"costs must be an m x n matrix with m,n >= 2, got shape {costs.shape}")
        if not np.all(np.isfinite(costs)):
            raise DomainError("costs contain non-finite entries")
        supply = _check_vector("supply", self.supply)
        demand = _check_vector("demand", self.demand)
        if costs.shape != (supply.size, demand.size):
            raise ShapeError(
                f"costs shape {costs.shape} does not match supply/demand lengths "
                f"({supply.size}, {demand.size})"
            )
        _check_balance(supply, demand)
        object.__setattr__(self, "costs", _freeze(costs))
        object.__setattr__(self, "supply", _freeze(supply))
        object.__setattr__(self, "demand", _freeze(demand))

    @property
    def m(self) -> int:
        return self.supply.size

    @property
    def n(self) -> int:
        return self.demand.size

    @property
    def dms(self) -> Dms:
        return Dms(self.supply, self.demand)


@dataclass(frozen=True, eq=False)
class TransportPlan:
    """Shipped quantities x_ij for one plan."""

    x: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        if x.ndim != 2:
            raise ShapeError(f"plan must be a matrix, got shape {x.shape}")
        object.__setattr__(self, "x", _freeze(x))

    @property
    def free_vars(self) -> np.ndarray:
        """Interior cells x_ij for i,j >= 2, flattened row-major."""
        return self.x[1:, 1:].ravel()


@dataclass(frozen=True)
class PlanCost:
    raw: float
    normalized: float


@dataclass(frozen=True)
class Violation:
    kind: str  # "supply-row" | "demand-column" | "nonnegativity"
    index: tuple
    residual: float


@dataclass(frozen=True)
class FeasibilityReport:
    violations: tuple[Violation, ...] = field(default=())

    @property
    def ok(self) -> bool:
        return not self.violations


def validate_instance(costs, supply, demand) -> TransportInstance:
    """Check shapes, positivity, and balance; return the immutable instance."""
    return TransportInstance(costs, supply, demand)


def validate_dms(supply, demand) -> Dms:
    """Check positivity and balance of a costless situation."""
    return Dms(supply, demand)


def plan_cost(instance: TransportInstance, plan: TransportPlan) -> PlanCost:
    """Total expense of a plan, raw and divided by the cost matrix Frobenius norm."""
    if plan.x.shape != instance.costs.shape:
        raise ShapeError(
            f"plan shape {plan.x.shape} does not match costs shape {instance.costs.shape}"
        )
    fro = float(np.linalg.norm(instance.costs))
    if fro == 0.0:
        raise DegenerateCosts("all costs are zero, normalized cost is undefined")
    raw = float(np.sum(instance.costs * plan.x))
    return PlanCost(raw=raw, normalized=raw / fro)


def check_feasible(plan: TransportPlan, dms: Dms, tol: float = FEAS_TOL) -> FeasibilityReport:
    """Report every violated supply row, demand column, or negative cell."""
    x = plan.x
    if x.shape != (dms.m, dms.n):
        raise ShapeError(f"plan shape {x.shape} does not match situation ({dms.m}, {dms.n})")
    violations: list[Violation] = []
    row_resid = x.sum(axis=1) - dms.supply
    for i, r in enumerate(row_resid):
        if abs(r) > tol:
            violations.append(Violation("supply-row", (i + 1,), float(r)))
    col_resid = x.sum(axis=0) - dms.demand
    for j, r in enumerate(col_resid):
        if abs(r) > tol:
            violations.append(Violation("demand-column", (j + 1,), float(r)))
    for i in range(x.shape[0]):
        for j in range(x.shape[1]):
            if x[i, j] < -tol:
                violations.append(Violation("nonnegativity", (i + 1, j + 1), float(x[i, j])))
    return FeasibilityReport(tuple(violations))


def instance_to_json(instance: TransportInstance) -> str:
    return json.dumps(
        {
            "costs": instance.costs.tolist(),
            "supply": instance.supply.tolist(),
            "demand": instance.demand.tolist(),
        }
    )


def instance_from_json(text_or_mapping) -> TransportInstance:
    """Parse {"costs": [[...]], "supply": [...], "demand": [...]}."""
    data = text_or_mapping
    if isinstance(data, (str, bytes)):
        data = json.loads(data)
    try:
        return validate_instance(data["costs"], data["supply"], data["demand"])
    except KeyError as exc:
        raise ShapeError(f"instance JSON missing key {exc}") from None


def dms_from_json(text_or_mapping) -> Dms:
    """Parse {"supply": [...], "demand": [...]}."""
    data = text_or_mapping
    if isinstance(data, (str, bytes)):
        data = json.loads(data)
    try:
        return validate_dms(data["supply"], data["demand"])
    except KeyError as exc:
        raise ShapeError(f"situation JSON missing key {exc}") from None
