"""Exception types raised across the package."""


class HybridFracError(Exception):
    """Base class for all package errors."""


class DomainError(HybridFracError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class ShapeError(HybridFracError, ValueError):
    """Mismatched grids or vector lengths."""


class SamplingError(HybridFracError, ValueError):
    """A sampled function returned a non-finite value at a grid node."""

    def __init__(self, message, node=None):
        super().__init__(message)
        self.node = node


class ExprSyntaxError(HybridFracError, ValueError):
    """Malformed expression text. ``offset`` is the byte offset of the problem."""

    def __init__(self, message, offset):
        super().__init__(f"{message} (at byte offset {offset})")
        self.offset = offset


class EvaluationError(HybridFracError, ArithmeticError):
    """An expression produced a non-finite value."""

    def __init__(self, message, offset=None):
        if offset is not None:
            message = f"{message} (subexpression at byte offset {offset})"
        super().__init__(message)
        self.offset = offset


class ConvergenceError(HybridFracError, RuntimeError):
    """The per-node scalar iteration did not converge."""

    def __init__(self, message, node=None):
        super().__init__(message)
        self.node = node


class AccuracyError(HybridFracError, RuntimeError):
    """Adaptive quadrature could not reach the requested tolerance."""
