"""Exception types shared across the toolkit."""

from __future__ import annotations


class PlanfitError(Exception):
    """Base class for all toolkit errors."""


class ShapeError(PlanfitError):
    """Array shapes do not describe a valid problem."""


class DomainError(PlanfitError):
    """A numeric value lies outside its allowed domain."""


class BalanceError(PlanfitError):
    """Total supply does not equal total demand."""


class DegenerateCosts(PlanfitError):
    """Cost matrix has zero norm, so normalized cost is undefined."""


class ZeroVector(PlanfitError):
    """A zero vector cannot be normalized."""


class InfeasibleFreeVars(PlanfitError):
    """Free variables reconstruct to a plan with a negative cell."""


class EmptyRegion(PlanfitError):
    """The constraint system has no feasible point."""


class DegenerateObjective(PlanfitError):
    """Objective vector is zero, so no maximizer is defined."""


class Unbounded(PlanfitError):
    """The objective increases without bound over the feasible region."""


class DegenerateVertex(PlanfitError):
    """A point does not admit a well defined adjacent constraint pair."""


class ParallelPair(PlanfitError):
    """Constraints with parallel normals form no informative pair."""


class DegenerateRegion(PlanfitError):
    """Feasible region has no interior (a point or a segment)."""


class UnsupportedDimension(PlanfitError):
    """Operation is only defined for specific problem dimensions."""


class NotAVertex(PlanfitError):
    """Chosen point is not a vertex of the feasible region."""


class DimensionMismatch(PlanfitError):
    """Observation dimension differs from the estimator state."""


class NoObservations(PlanfitError):
    """Estimator has not ingested any observation yet."""


class ZeroSum(PlanfitError):
    """Weighted observation vectors cancelled, leaving no direction."""
