"""
Exception hierarchy for the potential-algebra toolkit.

Every error raised by the library derives from SpectralAlgebraError so the
CLI can map it to exit code 2 in one place.
"""


class SpectralAlgebraError(ValueError):
    """Base class for all library errors."""


class InvalidInputError(SpectralAlgebraError):
    """Malformed or out-of-domain input (x outside the family domain, g <= 0, ...)."""


class SingularParameterError(SpectralAlgebraError):
    """j hits a pole of 1/J3 or 1/(J3 - 1)."""


class QuantizationError(SpectralAlgebraError):
    """Strict mode requires an exact half-odd-integer j."""


class NoBoundStateError(SpectralAlgebraError):
    """Parameters lie outside the bound-state window of the family."""

    def __init__(self, message: str, window: str = ""):
        super().__init__(message if not window else f"{message} (window: {window})")
        self.window = window


class NonNormalizableError(SpectralAlgebraError):
    """Closed-form base state is not square integrable for these parameters."""


class OrderExhaustedError(SpectralAlgebraError):
    """A wavefunction was asked for more derivatives than it carries."""


class DegenerateFunctionError(SpectralAlgebraError):
    """Norm vanished or became non-finite during normalization."""


class GridError(SpectralAlgebraError):
    """Grid touches a singular point or produces non-finite matrix entries."""
