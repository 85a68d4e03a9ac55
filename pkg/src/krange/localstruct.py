"""Local structure of the range spaces.

For eps > 0 the spectral slice E of T above eps generates the subspace

    M_eps = { (T_1* x, ..., T_n* x) : x in (slice) }

of the signed block space. M_eps is uniformly positive with lower bound
at least eps^2 / (n max_j |T_j|^2), the row map restricted to it is
bounded as an operator between Hilbert spaces, and the pull-back norm of
the restricted defect root T|_slice coincides with the pull-back norm of
the restricted row map when M_eps carries the signed inner product.
All three statements are computed here on concrete matrices.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import GRAM_INDEPENDENCE_TOL, NORM_EQUALITY_RTOL, POSITIVITY_MIN
from .errors import (
    DegenerateBasisError,
    EmptySubspaceError,
    NotUniformlyPositiveError,
)
from .krein import Subspace, uniform_positivity_bound
from .linalg import (
    apply_spectral_function,
    hermitian_eig,
    hermitian_part,
    pinv_psd,
    slice_above,
)
from .tuples import VALIDITY_LOWER, SignedOperatorTuple, adjoint_image


def slice_eigenbasis(t: SignedOperatorTuple, eps: float) -> np.ndarray:
    """Orthonormal eigenbasis (columns) of T's spectral slice above eps."""
    if eps < 0:
        raise ValueError(f"eps must be nonnegative, got {eps}")
    dec = t.sqrt_decomposition
    mask = slice_above(dec, eps)
    if not mask.any():
        raise EmptySubspaceError(f"no eigenvalue of the defect root exceeds {eps}")
    return dec.eigenvectors[:, mask]


def adjoint_image_basis(t: SignedOperatorTuple, eps: float) -> Subspace:
    """Basis of M_eps: the stacked adjoint images of the slice eigenbasis.

    Column independence follows from uniform positivity and is verified
    through the raw Gram spectrum.
    """
    t.require_validity(VALIDITY_LOWER)
    w = slice_eigenbasis(t, eps)
    basis = adjoint_image(t, w)
    gram = hermitian_part(basis.conj().T @ basis)
    gmin = hermitian_eig(gram, check=False).min_eigenvalue()
    if gmin <= GRAM_INDEPENDENCE_TOL:
        raise DegenerateBasisError(
            f"adjoint-image Gram has smallest eigenvalue {gmin:.3e}"
        )
    return Subspace(basis, t.signature)


@dataclass(frozen=True)
class PositivityBoundReport:
    """Computed positivity bound of M_eps against the guaranteed lower
    bound eps^2 / (n max_j |T_j|^2)."""

    eps: float
    vacuous: bool
    delta_star: float | None
    bound: float
    n_ops: int
    max_op_norm: float
    satisfied: bool


def positivity_bound_report(t: SignedOperatorTuple, eps: float) -> PositivityBoundReport:
    """Build M_eps, compute its positivity bound, and compare against the
    guaranteed lower bound.

    An empty slice (eps at or above |T|, or a vanishing defect) yields a
    vacuous report that counts as satisfied.
    """
    t.require_validity(VALIDITY_LOWER)
    if eps <= 0:
        raise ValueError(f"eps must be positive, got {eps}")
    n = t.n_ops
    max_norm = t.max_op_norm()
    try:
        sub = adjoint_image_basis(t, eps)
    except EmptySubspaceError:
        return PositivityBoundReport(
            eps=eps,
            vacuous=True,
            delta_star=None,
            bound=0.0,
            n_ops=n,
            max_op_norm=max_norm,
            satisfied=True,
        )
    delta = uniform_positivity_bound(sub)
    bound = eps**2 / (n * max_norm**2)
    return PositivityBoundReport(
        eps=eps,
        vacuous=False,
        delta_star=delta,
        bound=bound,
        n_ops=n,
        max_op_norm=max_norm,
        satisfied=delta >= bound - 1e-9,
    )


def _signed_gram(sub: Subspace) -> np.ndarray:
    b = sub.basis
    return hermitian_part(b.conj().T @ (b * sub.j_diagonal()[:, None]))


def _row_image_of_basis(t: SignedOperatorTuple, basis: np.ndarray) -> np.ndarray:
    """Row map applied to each stacked basis column; shape (d, m)."""
    d = t.dim
    out = np.zeros((d, basis.shape[1]), dtype=np.complex128)
    for j, (s, op) in enumerate(zip(t.signature, t.ops)):
        out += s * (op @ basis[j * d : (j + 1) * d, :])
    return out


def restricted_operator_norm(t: SignedOperatorTuple, eps: float) -> float:
    """Operator norm of the row map from (M_eps, signed inner product)
    to the base space.

    With basis B, signed Gram G = B* J B (positive definite on M_eps) and
    image M = (row map) B, this is the largest generalized singular value
    sqrt(lambda_max(G^(-1/2) M* M G^(-1/2))).
    """
    sub = adjoint_image_basis(t, eps)
    gram = _signed_gram(sub)
    gdec = hermitian_eig(gram, check=False)
    if gdec.min_eigenvalue() <= POSITIVITY_MIN:
        raise NotUniformlyPositiveError(
            f"signed Gram has eigenvalue {gdec.min_eigenvalue():.3e}",
            bound=gdec.min_eigenvalue(),
        )
    ginv_sqrt = apply_spectral_function(gdec, lambda lam: 1.0 / float(np.sqrt(lam)))
    image = _row_image_of_basis(t, sub.basis)
    core = hermitian_part(ginv_sqrt @ (image.conj().T @ image) @ ginv_sqrt)
    top = hermitian_eig(core, check=False).max_eigenvalue()
    return float(np.sqrt(max(top, 0.0)))


@dataclass(frozen=True)
class NormEqualityReport:
    """Sampled comparison of the two pull-back norms.

    ``restricted_norms``: min{|y| : y in slice, T y = u};
    ``signed_norms``:     min over M_eps preimages of u under the row
                          map, in the signed (Hilbert) norm of M_eps.
    The embedding direction asserts signed <= restricted, the reverse
    direction the converse; both hold within the stated tolerance.
    """

    eps: float
    samples: int
    seed: int
    restricted_norms: tuple[float, ...]
    signed_norms: tuple[float, ...]
    max_abs_dev: float
    embedding_ok: bool
    reverse_ok: bool
    equality_ok: bool


def verify_norm_equality(
    t: SignedOperatorTuple, eps: float, samples: int = 20, seed: int = 0
) -> NormEqualityReport:
    """Check the two-sided pull-back norm equality on random targets.

    For random x in the spectral slice and u = T x, computes

    n1 = min{ |y| : y in slice, T y = u }           (restricted defect root)
    n2 = min{ sqrt(<w, w>_signed) : w in M_eps, row(w) = u }

    and asserts |n1 - n2| <= 1e-7 max(1, n1) per sample, recording each
    one-sided inequality separately. The signed minimization is the
    equality-constrained quadratic program min c* G c s.t. M c = u,
    solved through the G-weighted pseudo-inverse.
    """
    if samples < 1:
        raise ValueError(f"samples must be >= 1, got {samples}")
    sub = adjoint_image_basis(t, eps)
    w = slice_eigenbasis(t, eps)
    m = w.shape[1]
    rng = np.random.default_rng(seed)
    coeffs = rng.standard_normal((m, samples)) + 1j * rng.standard_normal((m, samples))
    x = w @ coeffs
    u = t.defect_sqrt @ x

    # restricted pull-back: least-norm coefficients against T on the slice
    a1 = t.defect_sqrt @ w
    c1 = np.linalg.lstsq(a1, u, rcond=None)[0]
    n1 = np.linalg.norm(c1, axis=0)

    # signed pull-back on M_eps via the weighted pseudo-inverse
    gram = _signed_gram(sub)
    image = _row_image_of_basis(t, sub.basis)
    ginv_mstar = np.linalg.solve(gram, image.conj().T)
    core = hermitian_part(image @ ginv_mstar)
    mults = pinv_psd(core) @ u
    c2 = ginv_mstar @ mults
    signed_sq = np.einsum("is,ij,js->s", c2.conj(), gram, c2).real
    n2 = np.sqrt(np.clip(signed_sq, 0.0, None))

    devs = np.abs(n1 - n2)
    tol_per = NORM_EQUALITY_RTOL * np.maximum(1.0, n1)
    embedding_ok = bool(np.all(n2 <= n1 + tol_per))
    reverse_ok = bool(np.all(n1 <= n2 + tol_per))
    return NormEqualityReport(
        eps=eps,
        samples=samples,
        seed=seed,
        restricted_norms=tuple(float(v) for v in n1),
        signed_norms=tuple(float(v) for v in n2),
        max_abs_dev=float(devs.max()),
        embedding_ok=embedding_ok,
        reverse_ok=reverse_ok,
        equality_ok=bool(np.all(devs <= tol_per)),
    )
