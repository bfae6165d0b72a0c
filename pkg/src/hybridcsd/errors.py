"""Exception types raised across the package."""


class SynthesisError(Exception):
    """Base class for all errors raised by hybridcsd."""


class DimensionError(SynthesisError, ValueError):
    """Matrix or register shapes do not fit together."""


class PartitionError(SynthesisError, ValueError):
    """A cosine-sine partition size violates ``1 <= r`` and ``2r <= m``."""


class NotUnitaryError(SynthesisError, ValueError):
    """An input that must be unitary is not, within tolerance."""

    def __init__(self, residual, tol):
        self.residual = residual
        self.tol = tol
        super().__init__(f"matrix is not unitary: ||M^H M - I||_F = {residual:.3e} > {tol:.1e}")


class NumericalFailure(SynthesisError, ArithmeticError):
    """A factorization could not reach its reconstruction tolerance."""

    def __init__(self, what, residual, tol):
        self.residual = residual
        self.tol = tol
        super().__init__(f"{what}: residual {residual:.3e} exceeds {tol:.3e}")


class GateValidationError(SynthesisError, ValueError):
    """A gate does not fit the register it is applied to."""


class FormatError(SynthesisError, ValueError):
    """A text file could not be parsed."""
