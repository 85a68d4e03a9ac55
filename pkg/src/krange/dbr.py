"""Operator ranges with the pull-back norm.

For a (possibly rectangular) operator A, the range ran A carries the
pull-back norm |A x| = min{ |y| : A y = A x }, realized by the
minimal-norm preimage A+ u. Membership of a target u in ran A is
equivalent to finiteness of

    gamma = sup_{A* y != 0} |<y, u>| / |A* y|,

and on range members gamma equals the pull-back norm. At finite
dimension the sup collapses to |A+ u|, which is how it is computed here;
random probing serves only as an independent lower-bound sanity check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .config import CONTRACTION_TOL, resolve_range_tol
from .errors import NotContractionError, NotInRangeError, ShapeMismatchError
from .linalg import (
    apply_spectral_function,
    as_complex_matrix,
    as_complex_vector,
    hermitian_eig,
    hermitian_part,
    pinv_psd,
)


@dataclass(frozen=True)
class PreimageResult:
    """Minimal-norm preimage candidate with its achieved residual."""

    y: np.ndarray
    residual: float
    in_range: bool


def _pinv_apply(a: np.ndarray, u: np.ndarray, rank_tol: float | None) -> np.ndarray:
    """A+ u through the spectral pseudo-inverse of the smaller Gram."""
    if a.shape[0] >= a.shape[1]:
        gram = hermitian_part(a.conj().T @ a)
        return pinv_psd(gram, rank_tol) @ (a.conj().T @ u)
    gram = hermitian_part(a @ a.conj().T)
    return a.conj().T @ (pinv_psd(gram, rank_tol) @ u)


def min_norm_preimage(a, u, *, rank_tol: float | None = None, range_tol: float | None = None) -> PreimageResult:
    """Least-norm solution candidate y = A+ u.

    ``in_range`` is true iff |A y - u| <= tol * max(1, |u|); the returned
    y always lies in (ker A)-perp.
    """
    a = as_complex_matrix(a, "A")
    u = as_complex_vector(u, "u")
    if u.size != a.shape[0]:
        raise ShapeMismatchError(
            f"target has length {u.size}, operator has {a.shape[0]} rows"
        )
    tol = resolve_range_tol(range_tol)
    y = _pinv_apply(a, u, rank_tol)
    residual = float(np.linalg.norm(a @ y - u))
    return PreimageResult(y=y, residual=residual, in_range=residual <= tol * max(1.0, float(np.linalg.norm(u))))


def dbr_norm(a, u, *, rank_tol: float | None = None, range_tol: float | None = None) -> float:
    """Pull-back norm of a range member: |A+ u|.

    Raises :class:`NotInRangeError` when u fails the membership check.
    """
    res = min_norm_preimage(a, u, rank_tol=rank_tol, range_tol=range_tol)
    if not res.in_range:
        a = as_complex_matrix(a, "A")
        u = as_complex_vector(u, "u")
        witness = u - a @ res.y
        raise NotInRangeError(
            f"target is off-range with residual {res.residual:.3e}",
            witness=witness,
            residual=res.residual,
        )
    return float(np.linalg.norm(res.y))


@dataclass(frozen=True)
class GammaVerdict:
    """Outcome of the range-criterion sup.

    For range members ``gamma`` is the pull-back norm and ``probe_max``
    the largest sampled quotient (never exceeding gamma beyond roundoff).
    Otherwise ``gamma`` is inf, ``witness`` spans a direction with
    A* y = 0 but <y, u> != 0, and ``witness_ratios`` lists (t, quotient)
    along y_t = witness + t * (range direction), exhibiting the blow-up.
    """

    in_range: bool
    gamma: float
    probe_max: float
    witness: np.ndarray | None = None
    witness_ratios: tuple[tuple[float, float], ...] = ()


def shmulyan_gamma(
    a,
    u,
    probes: int = 64,
    seed: int = 0,
    *,
    rank_tol: float | None = None,
    range_tol: float | None = None,
) -> GammaVerdict:
    """Evaluate the range-criterion sup for the target u.

    Deterministic part: split u into its range component and the
    remainder u_k. A non-negligible u_k certifies non-membership (it is
    itself a witness: A* u_k = 0 while <u_k, u> = |u_k|^2). Otherwise
    gamma = |A+ u| exactly; seeded random probes provide quotients that
    must stay below gamma.
    """
    a = as_complex_matrix(a, "A")
    u = as_complex_vector(u, "u")
    tol = resolve_range_tol(range_tol)
    res = min_norm_preimage(a, u, rank_tol=rank_tol, range_tol=range_tol)
    u_range = a @ res.y
    u_kernel = u - u_range

    if res.residual > tol * max(1.0, float(np.linalg.norm(u))):
        ratios = []
        direction = _range_direction(a, u_range)
        if direction is not None:
            for t in (1.0, 1e-1, 1e-2, 1e-3):
                y_t = u_kernel + t * direction
                denom = float(np.linalg.norm(a.conj().T @ y_t))
                if denom > 0.0:
                    ratios.append((t, float(abs(np.vdot(y_t, u))) / denom))
        return GammaVerdict(
            in_range=False,
            gamma=math.inf,
            probe_max=math.inf,
            witness=u_kernel,
            witness_ratios=tuple(ratios),
        )

    gamma = float(np.linalg.norm(res.y))
    rng = np.random.default_rng(seed)
    m = a.shape[0]
    probe_max = 0.0
    if probes > 0:
        # probe i consumes a fixed slice of the stream, so probe sets are
        # nested across different probe counts for the same seed
        raw = rng.standard_normal((probes, 2, m))
        ys = raw[:, 0, :] + 1j * raw[:, 1, :]
        denoms = np.linalg.norm(ys @ a.conj(), axis=1)
        numers = np.abs(ys.conj() @ u)
        ok = denoms > 1e-13 * max(1.0, float(np.linalg.norm(a)))
        if ok.any():
            probe_max = float(np.max(numers[ok] / denoms[ok]))
    return GammaVerdict(in_range=True, gamma=gamma, probe_max=probe_max)


def _range_direction(a: np.ndarray, u_range: np.ndarray) -> np.ndarray | None:
    """A unit vector of ran A with nonzero A* image, used to display the
    blow-up of the quotient; None when A = 0."""
    nrm = float(np.linalg.norm(u_range))
    if nrm > 0.0:
        return u_range / nrm
    cols = np.linalg.norm(a, axis=0)
    j = int(np.argmax(cols))
    if cols[j] == 0.0:
        return None
    v = a[:, j]
    return v / float(np.linalg.norm(v))


def complement_defect(t_mat, *, contraction_tol: float = CONTRACTION_TOL) -> np.ndarray:
    """S = (I - T^2)^(1/2) for a Hermitian contraction T.

    Computed through a single eigendecomposition of T, clamping the
    (roundoff-level) negative part of 1 - lambda^2; S^2 + T^2 = I within
    the contraction tolerance.
    """
    t_mat = as_complex_matrix(t_mat, "T")
    dec = hermitian_eig(t_mat)
    top = max(abs(dec.min_eigenvalue()), abs(dec.max_eigenvalue()))
    if top > 1.0 + contraction_tol:
        raise NotContractionError(f"operator norm {top:.12f} exceeds 1")
    return apply_spectral_function(
        dec, lambda lam: float(np.sqrt(max(1.0 - lam * lam, 0.0)))
    )
