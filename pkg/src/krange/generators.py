"""Exact finite-dimensional tuple generators.

Three families feed the test surfaces:

* truncated analytic Toeplitz matrices and corona-style triplets built
  from polynomial symbols on the circle,
* the bidisk shift triplet (S (x) I, I (x) S, S (x) S), whose defect is
  exactly the projection annihilating the constant basis vector,
* seeded random tuples that are fully valid by construction.

Symbols are polynomials (finite coefficient sequences), so compression
to the span of the first n monomials is exact: the co-analytic adjoint
leaves that span invariant and every product identity survives
truncation verbatim.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import InvalidTupleError, ShapeMismatchError
from .krein import Signature
from .linalg import operator_norm
from .tuples import VALIDITY_FULL, SignedOperatorTuple

#: Roots-of-unity resolution for the screening estimate of circle sups.
CIRCLE_SAMPLES = 4096


def _coeff_array(coeffs: Sequence, name: str) -> np.ndarray:
    arr = np.atleast_1d(np.asarray(coeffs, dtype=np.complex128))
    if arr.ndim != 1 or arr.size == 0:
        raise ShapeMismatchError(f"{name} must be a nonempty coefficient sequence")
    if not np.isfinite(arr).all():
        raise ShapeMismatchError(f"{name} contains NaN or Inf coefficients")
    return arr


def toeplitz_analytic(coeffs: Sequence, n: int) -> np.ndarray:
    """n x n lower-triangular Toeplitz matrix of an analytic polynomial
    symbol: entry (i, j) is coeffs[i - j] (zero out of range).

    This is the compression of multiplication by the symbol to the span
    of the first n monomials; products of such matrices agree exactly
    with the truncated product symbol.
    """
    if n < 1:
        raise ShapeMismatchError(f"n must be >= 1, got {n}")
    c = _coeff_array(coeffs, "coeffs")
    idx = np.arange(n)[:, None] - np.arange(n)[None, :]
    padded = np.zeros(n, dtype=np.complex128)
    padded[: min(n, c.size)] = c[: min(n, c.size)]
    out = np.where((idx >= 0), padded[np.clip(idx, 0, n - 1)], 0.0 + 0.0j)
    return out


def circle_sup_sq(coeff_lists: Sequence[Sequence], samples: int = CIRCLE_SAMPLES) -> float:
    """Estimate sup over the unit circle of sum_k |p_k|^2 for polynomials
    p_k, evaluated on roots of unity via the FFT."""
    total = np.zeros(samples)
    for coeffs in coeff_lists:
        c = _coeff_array(coeffs, "coeffs")
        if c.size > samples:
            raise ShapeMismatchError("polynomial degree exceeds circle resolution")
        padded = np.zeros(samples, dtype=np.complex128)
        padded[: c.size] = c
        total += np.abs(np.fft.fft(padded)) ** 2
    return float(total.max())


@dataclass(frozen=True)
class CoronaDiagnostics:
    """Screening estimates for the corona-style construction."""

    row_sup_sq: float
    col_sup_sq: float
    row_ok: bool
    col_ok: bool


def corona_triplet(
    phi1: Sequence,
    phi2: Sequence,
    psi1: Sequence,
    psi2: Sequence,
    n: int,
    *,
    samples: int = CIRCLE_SAMPLES,
) -> tuple[SignedOperatorTuple, CoronaDiagnostics]:
    """Triplet (T_phi1, T_phi2, T_phi3) with phi3 = phi1 psi1 + phi2 psi2
    and signs (+, +, -), truncated to size n.

    When the row symbol (phi1, phi2) and the column symbol (psi1, psi2)
    are contractive on the circle, the result is fully valid. The circle
    sups are screened on roots of unity (a warning on violation); the
    authoritative check is the validation of the constructed matrices,
    which raises :class:`InvalidTupleError` when it does not come out
    full.
    """
    margin = 1e-9
    row_sup = circle_sup_sq([phi1, phi2], samples)
    col_sup = circle_sup_sq([psi1, psi2], samples)
    diag = CoronaDiagnostics(
        row_sup_sq=row_sup,
        col_sup_sq=col_sup,
        row_ok=row_sup <= 1.0 + margin,
        col_ok=col_sup <= 1.0 + margin,
    )
    if not diag.row_ok:
        warnings.warn(
            f"row symbol sup estimate {row_sup:.6f} exceeds 1; tuple may be invalid",
            stacklevel=2,
        )
    if not diag.col_ok:
        warnings.warn(
            f"column symbol sup estimate {col_sup:.6f} exceeds 1; tuple may be invalid",
            stacklevel=2,
        )
    p1 = _coeff_array(phi1, "phi1")
    p2 = _coeff_array(phi2, "phi2")
    q1 = _coeff_array(psi1, "psi1")
    q2 = _coeff_array(psi2, "psi2")
    conv1 = np.convolve(p1, q1)
    conv2 = np.convolve(p2, q2)
    phi3 = np.zeros(max(conv1.size, conv2.size), dtype=np.complex128)
    phi3[: conv1.size] += conv1
    phi3[: conv2.size] += conv2
    ops = (
        toeplitz_analytic(p1, n),
        toeplitz_analytic(p2, n),
        toeplitz_analytic(phi3, n),
    )
    tup = SignedOperatorTuple(ops, Signature((1, 1, -1)))
    if tup.validation.level != VALIDITY_FULL:
        err = InvalidTupleError(
            "constructed triplet is not fully valid "
            f"(level {tup.validation.level!r}, defect eigenvalues in "
            f"[{tup.validation.min_eig:.3e}, {tup.validation.max_eig:.3e}]); "
            "the symbols violate the contractivity hypotheses"
        )
        err.diagnostics = diag
        raise err
    return tup, diag


def shift_matrix(n: int) -> np.ndarray:
    """n x n down-shift: ones on the first subdiagonal."""
    if n < 1:
        raise ShapeMismatchError(f"n must be >= 1, got {n}")
    return np.eye(n, k=-1, dtype=np.complex128)


def bidisk_triplet(n: int) -> SignedOperatorTuple:
    """(S (x) I, I (x) S, S (x) S) on C^n (x) C^n with signs (+, +, -).

    Its defect is exactly I - P0 (x) P0, the orthogonal projection
    annihilating the constant basis vector (lexicographic ordering).
    """
    s = shift_matrix(n)
    eye = np.eye(n, dtype=np.complex128)
    ops = (np.kron(s, eye), np.kron(eye, s), np.kron(s, s))
    return SignedOperatorTuple(ops, Signature((1, 1, -1)))


def bidisk_expected_defect(n: int) -> np.ndarray:
    """I - P0 (x) P0 in the lexicographic basis (the exact defect of
    :func:`bidisk_triplet`)."""
    p0 = np.zeros((n, n), dtype=np.complex128)
    p0[0, 0] = 1.0
    return np.eye(n * n, dtype=np.complex128) - np.kron(p0, p0)


def random_tuple(
    n_ops_pos: int,
    n_ops_neg: int,
    dim: int,
    seed: int,
    margin: float = 0.5,
) -> SignedOperatorTuple:
    """Seeded random tuple that is fully valid by construction.

    Draws a Gaussian block row R = [G_1 ... G_p] scaled to operator norm
    1 - margin (the positive slots) and a Gaussian block column
    contraction C with the same scaling; the negative slots are the
    blocks of R C. The defect R (I - C C*) R* then satisfies
    0 <= D <= (1 - margin)^2 I.
    """
    if n_ops_pos < 1:
        raise ShapeMismatchError("need at least one positive slot")
    if n_ops_neg < 0:
        raise ShapeMismatchError("negative slot count must be >= 0")
    if dim < 1:
        raise ShapeMismatchError(f"dim must be >= 1, got {dim}")
    if not 0.0 < margin < 1.0:
        raise ShapeMismatchError(f"margin must lie in (0, 1), got {margin}")
    rng = np.random.default_rng(seed)
    row = rng.standard_normal((dim, n_ops_pos * dim)) + 1j * rng.standard_normal(
        (dim, n_ops_pos * dim)
    )
    row *= (1.0 - margin) / operator_norm(row)
    positives = [row[:, j * dim : (j + 1) * dim] for j in range(n_ops_pos)]
    negatives: list[np.ndarray] = []
    if n_ops_neg > 0:
        col = rng.standard_normal((n_ops_pos * dim, n_ops_neg * dim)) + 1j * rng.standard_normal(
            (n_ops_pos * dim, n_ops_neg * dim)
        )
        col *= (1.0 - margin) / operator_norm(col)
        prod = row @ col
        negatives = [prod[:, k * dim : (k + 1) * dim] for k in range(n_ops_neg)]
    signs = (1,) * n_ops_pos + (-1,) * n_ops_neg
    return SignedOperatorTuple(tuple(positives) + tuple(negatives), Signature(signs))
