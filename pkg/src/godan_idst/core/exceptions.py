"""
Custom exceptions for godan-idst.
"""

from collections.abc import Iterable
from typing import Any


class GodanError(Exception):
    """Base exception for all godan-idst errors."""

    pass


# ---- permutations ----


class PermutationError(GodanError, ValueError):
    """Raised when a one-line string or image sequence is not a permutation."""

    pass


class OrderMismatchError(PermutationError):
    """Raised when two permutations of different orders are combined."""

    pass


class InvalidGeneratorError(GodanError, ValueError):
    """Raised when a generator tag is not valid for the requested order."""

    pass


class RankOutOfRangeError(GodanError, ValueError):
    """Raised when a rank lies outside [0, n!)."""

    pass


# ---- graphs ----


class GraphError(GodanError):
    """Base class for graph construction and query errors."""

    pass


class GraphSizeError(GraphError, ValueError):
    """Raised when a graph dimension is outside the supported range."""

    pass


class VertexAbsentError(GraphError, KeyError):
    """Raised when a vertex is not present in a view."""

    pass


class ClusterError(GraphError, ValueError):
    """Raised for invalid cluster positions, symbols or cluster pairs."""

    pass


class NonDistinctVerticesError(GraphError, ValueError):
    """Raised when an operation requires distinct vertices."""

    pass


class TerminalSetError(GraphError, ValueError):
    """Raised when a terminal set has the wrong size or foreign vertices."""

    pass


# ---- connectivity ----


class ConnectivityError(GodanError):
    """Base class for path and cut primitive failures."""

    pass


class AdjacentPairError(ConnectivityError, ValueError):
    """Raised when a vertex cut is requested for an adjacent pair."""

    pass


class InsufficientPathsError(ConnectivityError):
    """Raised when fewer than the requested number of disjoint paths exist."""

    def __init__(
        self,
        message: str,
        *,
        found: int,
        requested: int,
        cut: Iterable[Any] | None = None,
        paths: Iterable[Any] = (),
    ) -> None:
        super().__init__(message)
        self.found = found
        self.requested = requested
        self.cut = frozenset(cut) if cut is not None else None
        self.paths = tuple(paths)


class DisconnectedTerminalsError(ConnectivityError):
    """Raised when terminals lie in different components of a view."""

    pass


# ---- construction ----


class ConstructionError(GodanError):
    """Raised when no role assignment or position yields a verified tree set."""

    def __init__(self, message: str, *, attempts: Iterable[str] = ()) -> None:
        super().__init__(message)
        self.attempts = tuple(attempts)


class PreconditionError(ConstructionError):
    """Raised when a lemma is invoked outside its preconditions."""

    pass


class AssemblyConflictError(ConstructionError):
    """Raised when the pieces of a role assignment collide."""

    pass


class InternalConsistencyError(GodanError):
    """Raised when an asserted structural fact does not hold."""

    pass


# ---- search ----


class SearchError(GodanError):
    """Base class for packing search errors."""

    pass


class SearchBudgetExceeded(SearchError):
    """Raised when the packing search runs out of its node budget."""

    def __init__(self, message: str, *, explored: int) -> None:
        super().__init__(message)
        self.explored = explored


class ConfigurationError(GodanError):
    """Raised when settings or run options are inconsistent."""

    pass
