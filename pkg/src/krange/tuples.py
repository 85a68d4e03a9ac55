"""Signed operator tuples, their defect operator, and the block row map.

A tuple (T_1, ..., T_n) with signs (s_1, ..., s_n) on a d-dimensional
space carries the defect D = sum_j s_j T_j T_j*. Its PSD square root T
drives every solver in this library. The associated row map

    R: (x_1, ..., x_n) |-> sum_j s_j T_j x_j

from the signed block space to H has the signed adjoint
R# x = (T_1* x, ..., T_n* x), so that R R# = D.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .config import PSD_CLAMP_TOL
from .errors import (
    InvalidTupleError,
    NotFullValidityError,
    NotPSDError,
    ShapeMismatchError,
)
from .krein import KreinVector, Signature
from .linalg import (
    SpectralDecomposition,
    as_complex_matrix,
    as_complex_vector,
    default_rank_tol,
    frobenius,
    hermitian_eig,
    hermitian_part,
    operator_norm,
)

VALIDITY_FULL = "full"
VALIDITY_LOWER = "lower"
VALIDITY_INVALID = "invalid"


@dataclass(frozen=True)
class ValidationReport:
    """Classification of a tuple's defect operator.

    ``full``   : 0 <= D <= I (within the PSD clamping window)
    ``lower``  : D >= 0 only
    ``invalid``: D has an eigenvalue below the window

    ``witnesses`` holds eigenvectors violating the failed inequality
    (columns), or None when the tuple is full.
    """

    level: str
    min_eig: float
    max_eig: float
    witnesses: np.ndarray | None


def _coerce_ops(ops: Sequence) -> tuple[np.ndarray, ...]:
    if len(ops) < 1:
        raise ShapeMismatchError("need at least one operator")
    mats = tuple(as_complex_matrix(op, name=f"operator {j}") for j, op in enumerate(ops))
    d = mats[0].shape[0]
    for j, m in enumerate(mats):
        if m.shape != (d, d):
            raise ShapeMismatchError(
                f"operator {j} has shape {m.shape}, expected ({d}, {d})"
            )
    return mats


def signed_defect(ops: Sequence, signature: Signature) -> np.ndarray:
    """D = sum_j s_j T_j T_j*, symmetrized."""
    mats = _coerce_ops(ops)
    if len(mats) != len(signature):
        raise ShapeMismatchError(
            f"{len(mats)} operators do not match signature of length {len(signature)}"
        )
    d = mats[0].shape[0]
    acc = np.zeros((d, d), dtype=np.complex128)
    for s, m in zip(signature, mats):
        acc += s * (m @ m.conj().T)
    return hermitian_part(acc)


def _classify(dec: SpectralDecomposition, tol_psd: float) -> ValidationReport:
    lo, hi = dec.min_eigenvalue(), dec.max_eigenvalue()
    if lo < -tol_psd:
        bad = dec.eigenvalues < -tol_psd
        return ValidationReport(VALIDITY_INVALID, lo, hi, dec.eigenvectors[:, bad].copy())
    if hi > 1.0 + tol_psd:
        bad = dec.eigenvalues > 1.0 + tol_psd
        return ValidationReport(VALIDITY_LOWER, lo, hi, dec.eigenvectors[:, bad].copy())
    return ValidationReport(VALIDITY_FULL, lo, hi, None)


def validate(ops: Sequence, signature: Signature, *, tol_psd: float = PSD_CLAMP_TOL) -> ValidationReport:
    """Classify the tuple as full (0 <= D <= I), lower (D >= 0 only) or
    invalid, returning extreme eigenvalues of D and violation witnesses."""
    if not isinstance(signature, Signature):
        signature = Signature(tuple(signature))
    defect = signed_defect(ops, signature)
    return _classify(hermitian_eig(defect), tol_psd)


class SignedOperatorTuple:
    """Operators (T_1, ..., T_n) on a common space with a sign per slot.

    The defect D, its PSD square root T, and both spectral decompositions
    are computed at construction and cached; instances are immutable and
    safe to share between threads.
    """

    def __init__(self, ops: Sequence, signature: Signature | Sequence[int], *, tol_psd: float = PSD_CLAMP_TOL):
        if not isinstance(signature, Signature):
            signature = Signature(tuple(signature))
        mats = _coerce_ops(ops)
        if len(mats) != len(signature):
            raise ShapeMismatchError(
                f"{len(mats)} operators do not match signature of length {len(signature)}"
            )
        for m in mats:
            m.flags.writeable = False
        self._ops = mats
        self._signature = signature
        self._defect = signed_defect(mats, signature)
        self._defect.flags.writeable = False
        self._defect_dec = hermitian_eig(self._defect)
        self._validation = _classify(self._defect_dec, tol_psd)
        if self._validation.level == VALIDITY_INVALID:
            self._sqrt = None
            self._sqrt_dec = None
        else:
            # T shares the defect's eigenbasis; sqrt preserves the order.
            sqrt_vals = np.sqrt(np.clip(self._defect_dec.eigenvalues, 0.0, None))
            v = self._defect_dec.eigenvectors
            self._sqrt = hermitian_part((v * sqrt_vals) @ v.conj().T)
            self._sqrt.flags.writeable = False
            self._sqrt_dec = SpectralDecomposition(sqrt_vals, v)
        self._max_op_norm: float | None = None

    @property
    def ops(self) -> tuple[np.ndarray, ...]:
        return self._ops

    @property
    def signature(self) -> Signature:
        return self._signature

    @property
    def dim(self) -> int:
        return self._ops[0].shape[0]

    @property
    def n_ops(self) -> int:
        return len(self._ops)

    @property
    def defect(self) -> np.ndarray:
        return self._defect

    @property
    def defect_decomposition(self) -> SpectralDecomposition:
        return self._defect_dec

    @property
    def validation(self) -> ValidationReport:
        return self._validation

    @property
    def defect_sqrt(self) -> np.ndarray:
        """T = D^(1/2); raises when the defect is not PSD."""
        if self._sqrt is None:
            raise NotPSDError(
                f"defect has eigenvalue {self._validation.min_eig:.3e}; no PSD square root"
            )
        return self._sqrt

    @property
    def sqrt_decomposition(self) -> SpectralDecomposition:
        if self._sqrt_dec is None:
            raise NotPSDError(
                f"defect has eigenvalue {self._validation.min_eig:.3e}; no PSD square root"
            )
        return self._sqrt_dec

    def max_op_norm(self) -> float:
        """max_j |T_j| (largest singular value over the slots)."""
        if self._max_op_norm is None:
            self._max_op_norm = max(operator_norm(m) for m in self._ops)
        return self._max_op_norm

    def require_validity(self, level: str) -> None:
        """Raise unless the tuple reaches the given validity level."""
        actual = self._validation.level
        if level == VALIDITY_LOWER and actual == VALIDITY_INVALID:
            raise InvalidTupleError(
                f"defect has eigenvalue {self._validation.min_eig:.3e} below zero"
            )
        if level == VALIDITY_FULL and actual != VALIDITY_FULL:
            raise NotFullValidityError(
                f"tuple validity is '{actual}', but the operation needs 0 <= D <= I"
            )

    def __repr__(self) -> str:
        return (
            f"SignedOperatorTuple(n_ops={self.n_ops}, dim={self.dim}, "
            f"signature={self._signature.signs}, validity={self._validation.level!r})"
        )


def row_apply(t: SignedOperatorTuple, z: KreinVector) -> np.ndarray:
    """Apply the signed row map: sum_j s_j T_j z_j."""
    if z.signature != t.signature:
        raise ShapeMismatchError("vector signature does not match the tuple")
    if z.block_dim != t.dim:
        raise ShapeMismatchError(
            f"block dimension {z.block_dim} does not match operator dimension {t.dim}"
        )
    out = np.zeros(t.dim, dtype=np.complex128)
    for s, op, block in zip(t.signature, t.ops, z.blocks):
        out += s * (op @ block)
    return out


def row_adjoint(t: SignedOperatorTuple, x) -> KreinVector:
    """Signed adjoint of the row map: x |-> (T_1* x, ..., T_n* x)."""
    vec = as_complex_vector(x)
    if vec.size != t.dim:
        raise ShapeMismatchError(f"vector has length {vec.size}, expected {t.dim}")
    blocks = np.stack([op.conj().T @ vec for op in t.ops])
    return KreinVector(blocks, t.signature)


def row_matrix(t: SignedOperatorTuple) -> np.ndarray:
    """The row map as an explicit d x (n*d) matrix [s_1 T_1, ..., s_n T_n]."""
    return np.hstack([s * op for s, op in zip(t.signature, t.ops)])


def row_adjoint_matrix(t: SignedOperatorTuple) -> np.ndarray:
    """The adjoint map as an explicit (n*d) x d matrix stacking the T_j*."""
    return np.vstack([op.conj().T for op in t.ops])


def adjoint_image(t: SignedOperatorTuple, columns: np.ndarray) -> np.ndarray:
    """Stacked images (T_1* w, ..., T_n* w) for each column w; shape
    (n*d, m)."""
    return np.vstack([op.conj().T @ columns for op in t.ops])


def isometry_deviation(t: SignedOperatorTuple, samples: int = 100, seed: int = 0) -> float:
    """Largest deviation of |T x|^2 from the signed norm of the adjoint
    image over random unit vectors.

    The two sides agree identically (the defect identity), so the return
    value measures pure roundoff.
    """
    t.require_validity(VALIDITY_LOWER)
    rng = np.random.default_rng(seed)
    d = t.dim
    x = rng.standard_normal((d, samples)) + 1j * rng.standard_normal((d, samples))
    x /= np.linalg.norm(x, axis=0)
    lhs = np.linalg.norm(t.defect_sqrt @ x, axis=0) ** 2
    rhs = np.zeros(samples)
    for s, op in zip(t.signature, t.ops):
        rhs += s * np.linalg.norm(op.conj().T @ x, axis=0) ** 2
    return float(np.max(np.abs(lhs - rhs)))


@dataclass(frozen=True)
class RowRestrictionReport:
    """Finite-dimensional health check of the row map restricted to the
    adjoint image of (ker T)-perp.

    ``injective``: the restriction has trivial kernel;
    ``ranges_equal``: its image coincides with ran T as a column space;
    ``extension_by_construction`` records that the restriction acts as
    the row map by definition.
    """

    vacuous: bool
    injective: bool
    min_singular_value: float
    image_rank: int
    range_rank: int
    ranges_equal: bool
    max_projection_residual: float
    extension_by_construction: bool = True

    @property
    def ok(self) -> bool:
        return self.vacuous or (self.injective and self.ranges_equal)


def row_restriction_report(t: SignedOperatorTuple, *, rank_tol: float | None = None) -> RowRestrictionReport:
    """Verify, at finite dimension, that the row map restricted to the
    adjoint image of L = (ker T)-perp is injective with image equal to
    ran T.

    Both properties are checked against explicit column spaces: the image
    columns are D w_i for the orthonormal eigenbasis {w_i} of L, and ran T
    is spanned by the same eigenbasis.
    """
    t.require_validity(VALIDITY_LOWER)
    dec = t.sqrt_decomposition
    if rank_tol is None:
        rank_tol = default_rank_tol(dec.max_eigenvalue())
    mask = dec.eigenvalues > rank_tol
    if not mask.any():
        return RowRestrictionReport(
            vacuous=True,
            injective=True,
            min_singular_value=0.0,
            image_rank=0,
            range_rank=0,
            ranges_equal=True,
            max_projection_residual=0.0,
        )
    w = dec.eigenvectors[:, mask]
    image = t.defect @ w
    svals = np.linalg.svd(image, compute_uv=False)
    min_sv = float(svals[-1])
    lam_min_kept = float(dec.eigenvalues[mask][0])
    injective = min_sv > 0.5 * lam_min_kept**2

    # image rank from the Gram spectrum, relative threshold
    gram = hermitian_part(image.conj().T @ image)
    gvals = hermitian_eig(gram, check=False).eigenvalues
    image_rank = int(np.sum(gvals > default_rank_tol(float(gvals[-1]))))
    range_rank = int(mask.sum())

    q, _ = np.linalg.qr(image, mode="reduced")
    resid_img_in_range = frobenius(q - w @ (w.conj().T @ q))
    resid_range_in_img = frobenius(w - q @ (q.conj().T @ w))
    max_resid = max(resid_img_in_range, resid_range_in_img)
    ranges_equal = image_rank == range_rank and max_resid <= 1e-8

    return RowRestrictionReport(
        vacuous=False,
        injective=injective,
        min_singular_value=min_sv,
        image_rank=image_rank,
        range_rank=range_rank,
        ranges_equal=ranges_equal,
        max_projection_residual=float(max_resid),
    )
