"""
Error hierarchy for the double-descent toolkit.
Validation problems subclass ValueError; numerical failures subclass RuntimeError.
"""

from typing import Optional


class DoubleDescentError(Exception):
    """Base class for every error raised by this package."""


# Validation errors

class ZeroColumn(DoubleDescentError, ValueError):
    """A design column has (numerically) zero norm."""

    def __init__(self, column: int, norm: float):
        super().__init__(f"Column {column} has norm {norm:.3e}; cannot normalize")
        self.column = column


class BadSparsity(DoubleDescentError, ValueError):
    """Sparsity s outside [1, p]."""


class DimensionMismatch(DoubleDescentError, ValueError):
    """Inconsistent array shapes."""


class RegimeViolation(DoubleDescentError, ValueError):
    """A solver was asked for a quantity outside its existence regime."""


class BadQ(DoubleDescentError, ValueError):
    """Requested number of sorted correlations is not available."""


class MissingParam(DoubleDescentError, ValueError):
    """A bound formula needs a parameter that was not supplied."""

    def __init__(self, bound_id: str, param: str):
        super().__init__(f"{bound_id} requires parameter '{param}'")
        self.bound_id = bound_id
        self.param = param


class DomainError(DoubleDescentError, ValueError):
    """A bound formula is not evaluable at the given parameters."""


class UnknownBound(DoubleDescentError, ValueError):
    """No bound with the requested identifier."""


class UnknownPreset(DoubleDescentError, ValueError):
    """No figure preset with the requested name."""


class UsageError(DoubleDescentError, ValueError):
    """Invalid command line."""


class Intractable(DoubleDescentError, ValueError):
    """Brute-force enumeration requested beyond its guard rails."""


class FeasibilityError(DoubleDescentError, ValueError):
    """Dual multipliers violate a constraint of the dual problem."""

    def __init__(self, index: int, violation: float):
        super().__init__(
            f"Dual constraint for column {index} violated: |lambda^T A_i| = {violation:.6g} > 1"
        )
        self.index = index
        self.violation = violation


# Numerical failures

class NumericalBreakdown(DoubleDescentError, RuntimeError):
    """The LP or factorization became numerically unreliable."""


class RankDeficient(DoubleDescentError, RuntimeError):
    """The design does not have full row rank."""


class FeasibilityLost(DoubleDescentError, RuntimeError):
    """Sparsification drifted off the constraint set."""

    def __init__(self, residual: float, round_index: Optional[int] = None):
        where = f" at round {round_index}" if round_index is not None else ""
        super().__init__(f"Interpolation residual {residual:.3e} exceeded tolerance{where}")
        self.residual = residual


class NoFeasibleBasis(DoubleDescentError, RuntimeError):
    """No column subset spans the observations."""


class DegenerateIncoherence(DoubleDescentError, RuntimeError):
    """Incoherence is (numerically) zero, so K is unbounded."""


class DegeneratePlot(DoubleDescentError, RuntimeError):
    """The data cannot be drawn as requested."""


class ReportIoError(DoubleDescentError, RuntimeError):
    """Writing an output file failed."""
