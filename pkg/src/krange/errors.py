"""Exception hierarchy.

Every library-specific failure derives from :class:`KrangeError` so that
callers can distinguish mathematical failures from programming errors.
"""

from __future__ import annotations


class KrangeError(Exception):
    """Base class for all library errors."""


class ShapeMismatchError(KrangeError):
    """Operands have incompatible dimensions or signatures."""


class NotHermitianError(KrangeError):
    """A matrix required to be Hermitian is not, beyond tolerance."""


class NoConvergenceError(KrangeError):
    """The eigensolver failed to converge within its budget."""


class NotPSDError(KrangeError):
    """A matrix required to be positive semidefinite has an eigenvalue
    below the clamping window."""


class NotContractionError(KrangeError):
    """A matrix required to be a contraction has operator norm > 1."""


class NotInRangeError(KrangeError):
    """The target vector does not belong to the operator's range.

    Carries the off-range component as ``witness`` together with the
    achieved ``residual``.
    """

    def __init__(self, message: str, witness=None, residual: float | None = None):
        super().__init__(message)
        self.witness = witness
        self.residual = residual


class InvalidTupleError(KrangeError):
    """The signed defect of the tuple is not positive semidefinite."""


class NotFullValidityError(KrangeError):
    """The operation requires the defect to satisfy both 0 <= D <= I."""


class ZeroDefectError(KrangeError):
    """The defect operator vanishes, so only the zero vector lies in its
    range."""


class EmptySubspaceError(KrangeError):
    """The requested spectral slice contains no eigenvalues."""


class NotUniformlyPositiveError(KrangeError):
    """The subspace's indefinite inner product is not bounded below by a
    positive multiple of the ambient norm.

    The computed bound is available as ``bound``.
    """

    def __init__(self, message: str, bound: float | None = None):
        super().__init__(message)
        self.bound = bound


class DegenerateBasisError(KrangeError):
    """Basis columns are numerically linearly dependent."""


class WireFormatError(KrangeError):
    """A serialized document violates the wire format."""
