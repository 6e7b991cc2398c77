"""Exception hierarchy for meshflow.

Every error raised on purpose by the library derives from MeshflowError so the
CLI can map it to an exit code in one place.
"""

from __future__ import annotations


class MeshflowError(Exception):
    """Base class for all meshflow errors."""

    pass


class ConfigError(MeshflowError, ValueError):
    """Raised when a parameter object (spec, budget, experiment) is invalid."""

    pass


class TopologyError(MeshflowError):
    """Base class for connectivity-graph problems."""

    pass


class ParseError(TopologyError):
    """Raised when a topology document or solution dump is malformed."""

    pass


class InvariantError(TopologyError):
    """Raised when links violate symmetry, self-loop or duplicate rules."""

    pass


class GenerationError(TopologyError):
    """Raised when the random generator cannot meet its targets."""

    pass


class MissingLink(TopologyError, KeyError):
    """Raised when a directed link is not present in a graph or view."""

    def __init__(self, src: int, dst: int):
        self.src = src
        self.dst = dst
        super().__init__(f"Link {src}->{dst} does not exist")

    def __str__(self) -> str:
        return self.args[0]


class StalePlan(MeshflowError):
    """Raised when an allocation plan no longer matches its schedule."""

    pass


class SolverError(MeshflowError):
    """Base class for optimizer problems."""

    pass


class ZeroTime(SolverError, ZeroDivisionError):
    """Raised when throughput is requested over a zero-length frame."""

    pass


class InfeasiblePath(SolverError):
    """Raised when a link sequence is not a routable source-to-destination path."""

    pass


class NoPath(SolverError):
    """Raised when the destination cannot be reached from the source."""

    def __init__(self, source: int, destination: int):
        self.source = source
        self.destination = destination
        super().__init__(f"No path from {source} to {destination}")


class SameNode(SolverError):
    """Raised when source and destination coincide."""

    pass


class BudgetExceeded(MeshflowError):
    """Raised when an oracle computation would exceed its budget."""

    pass
