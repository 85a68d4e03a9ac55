"""Dense complex linear algebra: Hermitian eigendecomposition and the
spectral function calculus every other module is built on.

All matrices are plain ``numpy.ndarray`` objects with dtype complex128.
Operations are pure functions of their inputs; nothing here mutates the
arrays it is given.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .config import (
    HERMITICITY_RTOL,
    PSD_CLAMP_TOL,
    RANK_TOL_FLOOR,
    RANK_TOL_REL,
    SPECTRAL_TIE_TOL,
)
from .errors import (
    NoConvergenceError,
    NotHermitianError,
    NotPSDError,
    ShapeMismatchError,
)


def as_complex_matrix(a, name: str = "matrix") -> np.ndarray:
    """Coerce to a 2-D complex128 array, rejecting non-finite entries."""
    arr = np.asarray(a, dtype=np.complex128)
    if arr.ndim != 2:
        raise ShapeMismatchError(f"{name} must be 2-D, got shape {arr.shape}")
    if not np.isfinite(arr).all():
        raise ShapeMismatchError(f"{name} contains NaN or Inf entries")
    return arr


def as_complex_vector(a, name: str = "vector") -> np.ndarray:
    """Coerce to a 1-D complex128 array, rejecting non-finite entries."""
    arr = np.asarray(a, dtype=np.complex128)
    if arr.ndim == 2 and 1 in arr.shape:
        arr = arr.reshape(-1)
    if arr.ndim != 1:
        raise ShapeMismatchError(f"{name} must be 1-D, got shape {arr.shape}")
    if not np.isfinite(arr).all():
        raise ShapeMismatchError(f"{name} contains NaN or Inf entries")
    return arr


def frobenius(a: np.ndarray) -> float:
    return float(np.linalg.norm(a))


def hermitian_part(a: np.ndarray) -> np.ndarray:
    return (a + a.conj().T) / 2.0


def hermiticity_defect(a: np.ndarray) -> float:
    """Frobenius distance to the Hermitian part, relative to max(1, |A|_F)."""
    return frobenius(a - a.conj().T) / max(1.0, frobenius(a))


def default_rank_tol(eig_max: float) -> float:
    """Rank cutoff: relative to the largest eigenvalue with an absolute floor."""
    return max(RANK_TOL_REL * max(eig_max, 0.0), RANK_TOL_FLOOR)


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenvalues (ascending) and orthonormal eigenvectors of a Hermitian
    matrix; columns of ``eigenvectors`` are the eigenvectors."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def dim(self) -> int:
        return self.eigenvectors.shape[0]

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T

    def max_eigenvalue(self) -> float:
        return float(self.eigenvalues[-1])

    def min_eigenvalue(self) -> float:
        return float(self.eigenvalues[0])


def hermitian_eig(a, *, check: bool = True) -> SpectralDecomposition:
    """Eigendecomposition of a Hermitian matrix.

    Parameters
    ----------
    a : array_like
        Square matrix with ``|A - A*|_F <= 1e-10 * max(1, |A|_F)``.
    check : bool
        Skip the Hermiticity precondition check when False (the input is
        then symmetrized before decomposition regardless).

    Raises
    ------
    NotHermitianError
        If the precondition fails.
    NoConvergenceError
        If the underlying iterative diagonalization does not converge.
    """
    arr = as_complex_matrix(a)
    if arr.shape[0] != arr.shape[1]:
        raise ShapeMismatchError(f"matrix must be square, got {arr.shape}")
    if check and hermiticity_defect(arr) > HERMITICITY_RTOL:
        raise NotHermitianError(
            f"matrix deviates from Hermitian by {hermiticity_defect(arr):.3e} (relative)"
        )
    try:
        vals, vecs = np.linalg.eigh(hermitian_part(arr))
    except np.linalg.LinAlgError as exc:
        raise NoConvergenceError(str(exc)) from exc
    return SpectralDecomposition(eigenvalues=vals, eigenvectors=vecs)


def apply_spectral_function(
    dec: SpectralDecomposition, f: Callable[[float], float]
) -> np.ndarray:
    """Scalar calculus f(A) = sum_i f(lambda_i) P_i from a decomposition.

    ``f`` must be defined (and finite) at every eigenvalue; the result is
    Hermitian by construction.
    """
    vals = np.array([f(float(lam)) for lam in dec.eigenvalues], dtype=np.float64)
    if not np.isfinite(vals).all():
        raise ValueError("spectral function produced a non-finite value")
    v = dec.eigenvectors
    return hermitian_part((v * vals) @ v.conj().T)


def sqrt_psd(a, *, tol_psd: float = PSD_CLAMP_TOL) -> np.ndarray:
    """Hermitian PSD square root.

    Eigenvalues in ``[-tol_psd, 0)`` are clamped to zero; an eigenvalue
    below ``-tol_psd`` raises :class:`NotPSDError`.
    """
    dec = hermitian_eig(a)
    if dec.min_eigenvalue() < -tol_psd:
        raise NotPSDError(
            f"matrix has eigenvalue {dec.min_eigenvalue():.3e} below -{tol_psd:.1e}"
        )
    return apply_spectral_function(dec, lambda lam: float(np.sqrt(max(lam, 0.0))))


def pinv_psd(a, rank_tol: float | None = None, *, tol_psd: float = PSD_CLAMP_TOL) -> np.ndarray:
    """Spectral pseudo-inverse of a Hermitian PSD matrix.

    Eigenvalues at or below ``rank_tol`` (default: relative cutoff from
    :func:`default_rank_tol`) are treated as exactly zero.
    """
    dec = hermitian_eig(a)
    if dec.min_eigenvalue() < -tol_psd:
        raise NotPSDError(
            f"matrix has eigenvalue {dec.min_eigenvalue():.3e} below -{tol_psd:.1e}"
        )
    if rank_tol is None:
        rank_tol = default_rank_tol(dec.max_eigenvalue())
    return apply_spectral_function(
        dec, lambda lam: 1.0 / lam if lam > rank_tol else 0.0
    )


def spectral_projector(dec: SpectralDecomposition, eps: float) -> np.ndarray:
    """Orthogonal projection onto the eigenspaces with eigenvalue > eps.

    The inequality is strict; eigenvalues within 1e-12 of ``eps`` count as
    lying at or below it.
    """
    if eps < 0:
        raise ValueError(f"eps must be nonnegative, got {eps}")
    mask = dec.eigenvalues > eps + SPECTRAL_TIE_TOL
    if not mask.any():
        n = dec.dim
        return np.zeros((n, n), dtype=np.complex128)
    v = dec.eigenvectors[:, mask]
    return hermitian_part(v @ v.conj().T)


def slice_above(dec: SpectralDecomposition, eps: float) -> np.ndarray:
    """Boolean mask of eigenvalues strictly above eps (same tie rule as
    :func:`spectral_projector`)."""
    return dec.eigenvalues > eps + SPECTRAL_TIE_TOL


def operator_norm(a) -> float:
    """Largest singular value, computed through the Hermitian
    eigendecomposition of the smaller Gram matrix."""
    arr = as_complex_matrix(a)
    if arr.shape[0] <= arr.shape[1]:
        gram = arr @ arr.conj().T
    else:
        gram = arr.conj().T @ arr
    dec = hermitian_eig(gram, check=False)
    return float(np.sqrt(max(dec.max_eigenvalue(), 0.0)))
