"""Indefinite inner-product geometry on block vectors.

The ambient space is H^n = H + ... + H (n copies of a d-dimensional
Hilbert space) carrying the signed inner product

    <x, y> = sum_j s_j <x_j, y_j>_H,       s_j in {+1, -1},

i.e. the inner product of the indefinite space (H^n, J) with signature
operator J = diag(s_1 I, ..., s_n I).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .config import BASIS_INDEPENDENCE_TOL, POSITIVITY_MIN
from .errors import (
    DegenerateBasisError,
    EmptySubspaceError,
    NotUniformlyPositiveError,
    ShapeMismatchError,
)
from .linalg import hermitian_eig, hermitian_part


@dataclass(frozen=True)
class Signature:
    """Sequence of signs (+1 / -1), one per block."""

    signs: tuple[int, ...]

    def __post_init__(self):
        if len(self.signs) < 1:
            raise ShapeMismatchError("signature must have at least one entry")
        if any(s not in (1, -1) for s in self.signs):
            raise ShapeMismatchError(f"signature entries must be +1 or -1, got {self.signs}")
        object.__setattr__(self, "signs", tuple(int(s) for s in self.signs))

    def __len__(self) -> int:
        return len(self.signs)

    def __iter__(self) -> Iterator[int]:
        return iter(self.signs)

    def as_floats(self) -> np.ndarray:
        return np.asarray(self.signs, dtype=np.float64)

    def j_diagonal(self, block_dim: int) -> np.ndarray:
        """Diagonal of the signature operator in stacked coordinates."""
        return np.repeat(self.as_floats(), block_dim)


@dataclass(frozen=True)
class KreinVector:
    """Block column vector (x_1, ..., x_n) with its signature.

    ``blocks`` has shape (n, d): row j is the j-th block.
    """

    blocks: np.ndarray
    signature: Signature

    def __post_init__(self):
        arr = np.asarray(self.blocks, dtype=np.complex128)
        if arr.ndim != 2:
            raise ShapeMismatchError(f"blocks must be 2-D (n, d), got shape {arr.shape}")
        if not np.isfinite(arr).all():
            raise ShapeMismatchError("blocks contain NaN or Inf entries")
        if arr.shape[0] != len(self.signature):
            raise ShapeMismatchError(
                f"{arr.shape[0]} blocks do not match signature of length {len(self.signature)}"
            )
        arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "blocks", arr)

    @property
    def n_blocks(self) -> int:
        return self.blocks.shape[0]

    @property
    def block_dim(self) -> int:
        return self.blocks.shape[1]

    def block(self, j: int) -> np.ndarray:
        return self.blocks[j]

    def stacked(self) -> np.ndarray:
        """Blocks concatenated into a single (n*d,) column."""
        return self.blocks.reshape(-1).copy()

    @classmethod
    def from_stacked(cls, vec, signature: Signature) -> "KreinVector":
        arr = np.asarray(vec, dtype=np.complex128).reshape(-1)
        n = len(signature)
        if arr.size % n != 0:
            raise ShapeMismatchError(
                f"stacked length {arr.size} is not a multiple of {n} blocks"
            )
        return cls(arr.reshape(n, arr.size // n), signature)

    @classmethod
    def zeros(cls, signature: Signature, block_dim: int) -> "KreinVector":
        return cls(np.zeros((len(signature), block_dim), dtype=np.complex128), signature)

    def __add__(self, other: "KreinVector") -> "KreinVector":
        _check_compatible(self, other)
        return KreinVector(self.blocks + other.blocks, self.signature)

    def __sub__(self, other: "KreinVector") -> "KreinVector":
        _check_compatible(self, other)
        return KreinVector(self.blocks - other.blocks, self.signature)


def _check_compatible(x: KreinVector, y: KreinVector) -> None:
    if x.signature != y.signature:
        raise ShapeMismatchError("signatures differ")
    if x.blocks.shape != y.blocks.shape:
        raise ShapeMismatchError(
            f"block shapes differ: {x.blocks.shape} vs {y.blocks.shape}"
        )


def krein_inner(x: KreinVector, y: KreinVector) -> complex:
    """Signed inner product sum_j s_j <x_j, y_j>; conjugate-linear in x."""
    _check_compatible(x, y)
    per_block = np.einsum("jd,jd->j", x.blocks.conj(), y.blocks)
    return complex(np.dot(x.signature.as_floats(), per_block))


def j_norm_squared(x: KreinVector) -> float:
    """Ambient (unsigned) squared norm sum_j |x_j|^2."""
    return float(np.sum(np.abs(x.blocks) ** 2))


@dataclass(frozen=True)
class Subspace:
    """Subspace of the stacked block space, spanned by the columns of
    ``basis`` (shape (n*d, m))."""

    basis: np.ndarray
    signature: Signature

    def __post_init__(self):
        arr = np.asarray(self.basis, dtype=np.complex128)
        if arr.ndim != 2:
            raise ShapeMismatchError(f"basis must be 2-D, got shape {arr.shape}")
        if arr.shape[1] == 0:
            raise EmptySubspaceError("basis has no columns")
        if arr.shape[0] % len(self.signature) != 0:
            raise ShapeMismatchError(
                f"ambient dimension {arr.shape[0]} is not a multiple of "
                f"{len(self.signature)} blocks"
            )
        norms = np.linalg.norm(arr, axis=0)
        if np.any(norms == 0.0):
            raise DegenerateBasisError("basis contains a zero column")
        smin = np.linalg.svd(arr / norms, compute_uv=False)[-1]
        if smin <= BASIS_INDEPENDENCE_TOL:
            raise DegenerateBasisError(
                f"normalized basis has smallest singular value {smin:.3e}"
            )
        arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "basis", arr)

    @property
    def ambient_dim(self) -> int:
        return self.basis.shape[0]

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    @property
    def block_dim(self) -> int:
        return self.ambient_dim // len(self.signature)

    def j_diagonal(self) -> np.ndarray:
        return self.signature.j_diagonal(self.block_dim)

    def vector(self, coeffs) -> KreinVector:
        """Span element with the given basis coefficients."""
        coeffs = np.asarray(coeffs, dtype=np.complex128).reshape(-1)
        if coeffs.size != self.dim:
            raise ShapeMismatchError(
                f"expected {self.dim} coefficients, got {coeffs.size}"
            )
        return KreinVector.from_stacked(self.basis @ coeffs, self.signature)


def uniform_positivity_bound(sub: Subspace) -> float:
    """Largest delta with <x, x>_signed >= delta * |x|^2 on the subspace.

    Computed as the smallest eigenvalue of Q* J Q for an orthonormal basis
    Q of the span. Raises :class:`NotUniformlyPositiveError` when the
    bound does not exceed the positivity cutoff.
    """
    q, _ = np.linalg.qr(sub.basis, mode="reduced")
    jq = q * sub.j_diagonal()[:, None]
    compressed = hermitian_part(q.conj().T @ jq)
    delta = hermitian_eig(compressed, check=False).min_eigenvalue()
    if delta <= POSITIVITY_MIN:
        raise NotUniformlyPositiveError(
            f"positivity bound {delta:.3e} is not above {POSITIVITY_MIN:.1e}",
            bound=delta,
        )
    return delta
