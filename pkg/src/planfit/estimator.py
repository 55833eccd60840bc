"""Direction estimation from observed choices.

Each observed choice pins the hidden objective direction to the cone between
the two constraint normals active at the chosen vertex. The estimator sums
the bisectors of those cones, weighted by how narrow each cone is, and
normalizes. A sliding window bounds how much history the sum keeps.
"""

from __future__ import annotations

import csv
import io
import math
import re
from dataclasses import dataclass, field

import numpy as np

from .core import Dms, TransportPlan
from .errors import (
    DegenerateVertex,
    DimensionMismatch,
    DomainError,
    NoObservations,
    NotAVertex,
    ZeroSum,
)
from .lpsolve import TIGHT_TOL, Solution, active_pair_at, solve_max
from .reduction import Unlv, as_direction, build_constraints, reconstruct_plan
from .spectrum import pair_info

ZERO_SUM_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class Observation:
    """One weighted direction hint extracted from a single observed choice."""

    vector: np.ndarray
    weight: float
    pair: tuple[int, int] | None = None
    step: int | None = None
    dms: Dms | None = None
    free_vars: np.ndarray | None = None


@dataclass(frozen=True, eq=False)
class StopDecision:
    stop: bool
    mean_delta: float | None
    std_delta: float | None


@dataclass(eq=False)
class EstimateState:
    """Running weighted sum over a sliding window of observations.

    window=None keeps every observation ever ingested; with a finite window
    the oldest observation is evicted once the buffer is full.
    """

    d: int = 2
    window: int | None = None
    buffer: list[np.ndarray] = field(default_factory=list)
    count: int = 0
    history: list[np.ndarray | None] = field(default_factory=list)
    sums_history: list[np.ndarray] = field(default_factory=list)

    @property
    def weighted_sum(self) -> np.ndarray:
        if not self.buffer:
            return np.zeros(self.d)
        return np.sum(self.buffer, axis=0)


def make_observation(dms: Dms, chosen, tol: float = TIGHT_TOL) -> Observation:
    """Grade one observed choice against its situation.

    The choice is a full plan or a free-variable point; it must sit at a
    vertex of the situation's feasible region.
    """
    lpp = build_constraints(dms)
    if isinstance(chosen, TransportPlan):
        point = chosen.free_vars
    else:
        point = np.asarray(chosen, dtype=float).ravel()
    if point.shape != (lpp.d,):
        raise DimensionMismatch(
            f"choice has {point.shape[0]} coordinates, region has {lpp.d}"
        )
    try:
        pair = active_pair_at(point, lpp, tol)
    except (DegenerateVertex, DomainError) as exc:
        raise NotAVertex(str(exc)) from exc
    info = pair_info(pair, dms.m, dms.n)
    return Observation(
        vector=info.sum_unlv.e,
        weight=info.weight,
        pair=info.pair,
        dms=dms,
        free_vars=point,
    )


def ingest(state: EstimateState, obs: Observation) -> EstimateState:
    """Add one observation, evicting the oldest past the window capacity."""
    vec = np.asarray(obs.vector, dtype=float).ravel()
    if vec.shape != (state.d,):
        raise DimensionMismatch(
            f"observation has {vec.shape[0]} coordinates, state tracks {state.d}"
        )
    state.buffer.append(obs.weight * vec)
    if state.window is not None and len(state.buffer) > state.window:
        state.buffer.pop(0)
    state.count += 1
    total = state.weighted_sum
    norm = float(np.linalg.norm(total))
    state.sums_history.append(total)
    state.history.append(total / norm if norm > ZERO_SUM_TOL else None)
    return state


def estimate(state: EstimateState) -> Unlv:
    """Current direction estimate: the normalized weighted sum."""
    if state.count == 0:
        raise NoObservations("no observations ingested yet")
    total = state.weighted_sum
    if float(np.linalg.norm(total)) <= ZERO_SUM_TOL:
        raise ZeroSum("weighted observation vectors cancel out")
    return Unlv(total)


def angle_between(u, v) -> float:
    """Angle in radians between two directions."""
    a = as_direction(u)
    b = as_direction(v)
    a = a / np.linalg.norm(a)
    b = b / np.linalg.norm(b)
    return math.acos(float(np.clip(a @ b, -1.0, 1.0)))


def convergence(state_or_history, references) -> np.ndarray:
    """Euclidean distance of each per-step estimate to each reference direction.

    Returns an array of shape (steps, len(references)); steps where the
    estimate was undefined give NaN.
    """
    history = getattr(state_or_history, "history", state_or_history)
    refs = [as_direction(r) for r in references]
    out = np.full((len(history), len(refs)), math.nan)
    for t, est in enumerate(history):
        if est is None:
            continue
        for r, ref in enumerate(refs):
            out[t, r] = float(np.linalg.norm(np.asarray(est) - ref))
    return out


def step_deltas(state_or_history) -> np.ndarray:
    """Angular change between consecutive estimates, one entry per step after the first."""
    history = getattr(state_or_history, "history", state_or_history)
    deltas = []
    for prev, cur in zip(history, history[1:]):
        if prev is None or cur is None:
            deltas.append(math.nan)
        else:
            deltas.append(angle_between(prev, cur))
    return np.array(deltas)


def should_stop(
    state_or_history,
    window: int = 5,
    eps_mean: float = 0.02,
    eps_std: float = 0.02,
) -> StopDecision:
    """Stop once the last `window` estimate shifts are small and steady.

    Shift k is the angle between estimates k and k-1. With k observations
    so far, stopping needs k > window and both the mean and the standard
    deviation of the last `window` shifts below their thresholds.
    """
    deltas = step_deltas(state_or_history)
    k = deltas.shape[0] + 1
    if k <= window:
        return StopDecision(stop=False, mean_delta=None, std_delta=None)
    tail = deltas[-window:]
    if np.any(np.isnan(tail)):
        return StopDecision(stop=False, mean_delta=None, std_delta=None)
    mean = float(np.mean(tail))
    std = float(np.std(tail))
    return StopDecision(stop=mean < eps_mean and std < eps_std,
                        mean_delta=mean, std_delta=std)


def stopping_step(
    state_or_history,
    window: int = 5,
    eps_mean: float = 0.02,
    eps_std: float = 0.02,
) -> int | None:
    """First step at which the stop rule fires, scanning the history in order."""
    history = getattr(state_or_history, "history", state_or_history)
    for k in range(1, len(history) + 1):
        if should_stop(history[:k], window, eps_mean, eps_std).stop:
            return k
    return None


def predict_plan(direction, dms: Dms, tol: float = TIGHT_TOL) -> tuple[TransportPlan, Solution]:
    """Solve a new situation with an estimated direction and rebuild the full plan."""
    lpp = build_constraints(dms)
    sol = solve_max(lpp, as_direction(direction), tol)
    plan = reconstruct_plan(dms, sol.vertex.point)
    return plan, sol


def estimate_records(state: EstimateState) -> list[dict]:
    """Per-step export records: step index, estimate, and weighted sums."""
    out = []
    for t, (est, total) in enumerate(zip(state.history, state.sums_history), start=1):
        out.append({
            "step": t,
            "e": None if est is None else [float(v) for v in est],
            "sums": [float(v) for v in total],
        })
    return out


_PLAN_COL = re.compile(r"^x_(\d+)_(\d+)$")


def read_observation_log(source) -> list[Observation]:
    """Parse an observation log from CSV text, a path, or an open file.

    Each row carries a situation and the chosen point: columns
    step,a1,a2,b1,b2,b3,x22,x23 for the two-by-three size, or supply/demand
    columns plus full plan columns x_i_j for other sizes. Observations are
    derived by grading the chosen point against its situation.
    """
    if hasattr(source, "read"):
        text = source.read()
    else:
        text = str(source)
        if "\n" not in text and "," not in text:
            with open(text, encoding="utf-8") as fh:
                text = fh.read()
    reader = csv.DictReader(io.StringIO(text))
    fields = list(reader.fieldnames or [])
    supply_cols = sorted((f for f in fields if re.fullmatch(r"a\d+", f)),
                         key=lambda f: int(f[1:]))
    demand_cols = sorted((f for f in fields if re.fullmatch(r"b\d+", f)),
                         key=lambda f: int(f[1:]))
    plan_cols = sorted(
        ((int(mm.group(1)), int(mm.group(2)), f)
         for f in fields for mm in [_PLAN_COL.match(f)] if mm),
    )
    compact = {"x22", "x23"} <= set(fields)
    if not supply_cols or not demand_cols or not (compact or plan_cols):
        raise DimensionMismatch(
            "log needs a1..am, b1..bn and either x22,x23 or x_i_j plan columns"
        )
    out = []
    for idx, row in enumerate(reader, start=1):
        step = int(row["step"]) if row.get("step") else idx
        supply = [float(row[c]) for c in supply_cols]
        demand = [float(row[c]) for c in demand_cols]
        dms = Dms(supply, demand)
        if compact:
            chosen = np.array([float(row["x22"]), float(row["x23"])])
        else:
            plan = np.zeros((dms.m, dms.n))
            for i, j, col in plan_cols:
                plan[i - 1, j - 1] = float(row[col])
            chosen = TransportPlan(plan).free_vars
        obs = make_observation(dms, chosen)
        out.append(Observation(
            vector=obs.vector,
            weight=obs.weight,
            pair=obs.pair,
            step=step,
            dms=dms,
            free_vars=obs.free_vars,
        ))
    return out
