"""
Exception hierarchy for the Toeplitz Commutant Lab.

Input errors describe requests that can never succeed as stated (the CLI
exits with status 2); measurement errors describe numerical probes that
could not reach a trustworthy answer at the configured resolution (status 3).
"""


class ToeplitzLabError(Exception):
    """Base class for every error raised by the package."""


class InputError(ToeplitzLabError):
    """The request is malformed or violates a documented precondition."""


class MeasurementError(ToeplitzLabError):
    """A numerical probe failed at the configured resolution."""


# Input errors

class SymbolSyntaxError(InputError, SyntaxError):
    """Malformed symbol DSL text; ``position`` is 1-based."""

    def __init__(self, message, position):
        super().__init__(f"{message} at position {position}")
        self.position = position


class CompositionDomainError(InputError):
    """The inner map of a composition leaves the closed unit disk."""


class ConstantSymbolError(InputError):
    """The operation needs a nonconstant symbol."""


class OrderMismatch(InputError):
    """Requested matrix size exceeds the truncation order of the symbol."""


class NotUnimodular(InputError):
    """A dilation parameter is not on the unit circle."""


class DimensionCap(InputError):
    """Dense commutant solves are capped in dimension."""


class UnsupportedSymbol(InputError):
    """The operation is only defined for polynomial symbols."""


class NotACommutantElement(InputError):
    """The supplied operator does not commute with the Toeplitz compression."""


class ConfigError(InputError):
    """A configuration value is outside its documented range."""


class UnknownExample(InputError):
    """The named example is not in the registry."""


# Measurement errors

class ResolutionError(MeasurementError):
    """Too few circle nodes for the truncation order."""


class OnCurveError(MeasurementError):
    """The winding target lies on (or too close to) the boundary curve."""


class ResolutionExhausted(MeasurementError):
    """Curve refinement hit its cap before the winding sum settled."""


class OracleMismatch(MeasurementError):
    """Winding count and root count disagree."""


class EmptyProfile(MeasurementError):
    """Every grid sample was excluded from a winding profile."""


class BoundaryZeroError(MeasurementError):
    """A root sits too close to the unit circle to be classified."""


class IllConditioned(MeasurementError):
    """A least-squares system is numerically singular."""
