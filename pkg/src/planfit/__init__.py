"""Toolkit for learning a transport planner's hidden objective direction.

The forward path solves balanced shipment problems; the inverse path watches
which plan a decision maker picks in each situation, grades every pick into a
weighted direction hint, and maintains a running unit-vector estimate of the
objective that can then propose plans for new situations.
"""

from .core import (
    Dms,
    FeasibilityReport,
    PlanCost,
    TransportInstance,
    TransportPlan,
    check_feasible,
    plan_cost,
    validate_dms,
    validate_instance,
)
from .errors import (
    BalanceError,
    DegenerateCosts,
    DegenerateObjective,
    DegenerateRegion,
    DegenerateVertex,
    DimensionMismatch,
    DomainError,
    EmptyRegion,
    InfeasibleFreeVars,
    NoObservations,
    NotAVertex,
    ParallelPair,
    PlanfitError,
    ShapeError,
    Unbounded,
    UnsupportedDimension,
    ZeroSum,
    ZeroVector,
)
from .estimator import (
    EstimateState,
    Observation,
    StopDecision,
    angle_between,
    convergence,
    estimate,
    estimate_records,
    ingest,
    make_observation,
    predict_plan,
    read_observation_log,
    should_stop,
    step_deltas,
    stopping_step,
)
from .lpsolve import (
    Solution,
    Vertex,
    active_pair_at,
    enumerate_vertices,
    solve_max,
    solve_simplex,
)
from .reduction import (
    ReducedLpp,
    ReducedObjective,
    Unlv,
    build_constraints,
    constraint_matrix,
    reconstruct_plan,
    reduce_objective,
    reduced_value,
    representative_costs,
    unlv,
)
from .simulation import (
    ExperimentConfig,
    ExperimentResult,
    StepRecord,
    effectiveness,
    gen_dms,
    run_experiment,
    simulated_dm,
)
from .spectrum import (
    TYPE_CATALOGUE,
    SpectrumPair,
    TrClassification,
    TrType,
    classify_tr,
    constraint_unlvs,
    group_info,
    informativeness_report,
    pair_info,
    parallel_pairs,
    polygon_dms,
    report_csv,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
