"""Exception types shared across the package.

Numerical failures map to CLI exit code 3, input/usage problems to exit code 2.
"""


class Spin2MPError(Exception):
    """Base class for all package errors."""


class NumericalError(Spin2MPError):
    """A numerical operation failed or a computed quantity is out of contract."""


class NotHermitian(NumericalError):
    """Matrix handed to a Hermitian routine is not Hermitian within tolerance."""


class DegenerateDominant(NumericalError):
    """Transfer-matrix dominant eigenvalue is degenerate in magnitude."""


class NonPositiveDominant(NumericalError):
    """Largest-magnitude eigenvalue is not real positive (Perron check failed)."""


class NotPSD(NumericalError):
    """Matrix has an eigenvalue below the negative-clipping tolerance."""


class CorrelatorVanishes(NumericalError):
    """Too few nonzero correlator values to extract a correlation length."""


class NoPlateau(NumericalError):
    """String correlator has not converged to its long-distance plateau."""


class StencilFailure(NumericalError):
    """A finite-difference stencil point could not be evaluated."""


class NotUnimodal(NumericalError):
    """Bracketed function shows more than one interior extremum."""


class InvariantViolation(NumericalError):
    """A physical invariant (trace, magnetization bound, ...) was violated."""


class InvalidInput(Spin2MPError):
    """Precondition on user-supplied input failed."""


class NotNegativeX(InvalidInput):
    """Gauge map from x<0 requested for a tensor with x >= 0."""


class ChainTooLong(InvalidInput):
    """Requested finite chain exceeds the exact-vector length cap."""


class SiteOutOfRange(InvalidInput):
    """Requested site index outside 1..L."""
