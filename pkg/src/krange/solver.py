"""Constructive minimal-norm solutions of the range-inclusion problem.

Given a valid tuple with defect square root T and a target u in ran T,
the truncated solution at level eps > 0 is built from the minimal
preimage x = T+ u:

    x_eps = (spectral slice of x above eps),
    y_eps = f_eps(T) x_eps   with  f_eps(lam) = 1/lam for lam > eps,
    z_eps = (T_1* y_eps, ..., T_n* y_eps),

so that the row map sends z_eps to T x_eps, the signed squared norm of
z_eps equals |x_eps|^2, and, as eps decreases, the signed norms increase
monotonically to the squared pull-back norm |u|^2 while the residual
drops to zero once eps falls below the smallest positive eigenvalue of
T. At finite dimension the solution is exact for any sufficiently small
eps; ``solve_exact`` picks half the smallest positive eigenvalue.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import CAUCHY_TOL, MONOTONE_SLACK, resolve_range_tol
from .errors import NotInRangeError, ShapeMismatchError, ZeroDefectError
from .krein import KreinVector, Signature, krein_inner
from .linalg import as_complex_vector, default_rank_tol, slice_above
from .tuples import (
    VALIDITY_FULL,
    VALIDITY_LOWER,
    SignedOperatorTuple,
    row_adjoint,
    row_apply,
)


@dataclass(frozen=True)
class SolveReport:
    """Per-eps record of a truncated solve.

    ``krein_norm_sq``     signed squared norm of the block solution z;
    ``target_norm_sq``    squared pull-back norm of the target;
    ``truncated_norm_sq`` squared norm of the spectral slice of the
                          minimal preimage (equal to ``krein_norm_sq``
                          up to roundoff).
    """

    eps: float
    z: KreinVector
    residual: float
    krein_norm_sq: float
    target_norm_sq: float
    truncated_norm_sq: float


def _checked_preimage(t: SignedOperatorTuple, u: np.ndarray, range_tol: float) -> np.ndarray:
    """Minimal preimage x = T+ u through the cached spectral data.

    Raises :class:`NotInRangeError` when the residual exceeds tolerance.
    """
    dec = t.sqrt_decomposition
    rank_tol = default_rank_tol(dec.max_eigenvalue())
    mask = dec.eigenvalues > rank_tol
    v = dec.eigenvectors[:, mask]
    coeffs = (v.conj().T @ u) / dec.eigenvalues[mask] if mask.any() else np.zeros(0)
    x = v @ coeffs if mask.any() else np.zeros_like(u)
    residual = float(np.linalg.norm(t.defect_sqrt @ x - u))
    if residual > range_tol * max(1.0, float(np.linalg.norm(u))):
        raise NotInRangeError(
            f"target is off the defect root's range with residual {residual:.3e}",
            witness=u - t.defect_sqrt @ x,
            residual=residual,
        )
    return x


def _solve_with_state(
    t: SignedOperatorTuple, u: np.ndarray, eps: float, range_tol: float
) -> tuple[SolveReport, np.ndarray]:
    dec = t.sqrt_decomposition
    x = _checked_preimage(t, u, range_tol)
    mask = slice_above(dec, eps)
    v = dec.eigenvectors[:, mask]
    coords = v.conj().T @ x
    x_eps = v @ coords
    y_eps = v @ (coords / dec.eigenvalues[mask]) if mask.any() else np.zeros_like(x)
    z = row_adjoint(t, y_eps)
    residual = float(np.linalg.norm(u - row_apply(t, z)))
    return (
        SolveReport(
            eps=float(eps),
            z=z,
            residual=residual,
            krein_norm_sq=float(krein_inner(z, z).real),
            target_norm_sq=float(np.linalg.norm(x) ** 2),
            truncated_norm_sq=float(np.linalg.norm(x_eps) ** 2),
        ),
        x_eps,
    )


def solve_truncated(
    t: SignedOperatorTuple, u, eps: float, *, range_tol: float | None = None
) -> SolveReport:
    """Truncated minimal-norm solve at spectral level eps > 0.

    Requires a valid tuple (defect PSD) and u in ran T within the range
    tolerance.
    """
    t.require_validity(VALIDITY_LOWER)
    u = as_complex_vector(u, "u")
    if u.size != t.dim:
        raise ShapeMismatchError(f"target has length {u.size}, expected {t.dim}")
    if eps <= 0:
        raise ValueError(f"eps must be positive, got {eps}")
    report, _ = _solve_with_state(t, u, eps, resolve_range_tol(range_tol))
    return report


def lambda_min_positive(t: SignedOperatorTuple) -> float | None:
    """Smallest eigenvalue of T above the rank cutoff, or None if T = 0."""
    dec = t.sqrt_decomposition
    rank_tol = default_rank_tol(dec.max_eigenvalue())
    mask = dec.eigenvalues > rank_tol
    if not mask.any():
        return None
    return float(dec.eigenvalues[mask][0])


def solve_exact(t: SignedOperatorTuple, u, *, range_tol: float | None = None) -> SolveReport:
    """Exact finite-dimensional solve: truncate at half the smallest
    positive eigenvalue of T, where the slice already covers all of
    (ker T)-perp.

    The residual is then <= tol * max(1, |u|) and the signed squared norm
    matches the squared pull-back norm of u to the same order.
    """
    t.require_validity(VALIDITY_LOWER)
    u = as_complex_vector(u, "u")
    if u.size != t.dim:
        raise ShapeMismatchError(f"target has length {u.size}, expected {t.dim}")
    tol = resolve_range_tol(range_tol)
    lam = lambda_min_positive(t)
    if lam is None:
        if float(np.linalg.norm(u)) > tol:
            raise ZeroDefectError("defect vanishes but the target is nonzero")
        # zero tuple, zero target: any eps gives the all-zero report
        report, _ = _solve_with_state(t, u, 1.0, tol)
        return report
    report, _ = _solve_with_state(t, u, lam / 2.0, tol)
    return report


def extended_tuple(t: SignedOperatorTuple) -> SignedOperatorTuple:
    """The (n+1)-tuple (I, T_1, ..., T_n) with signs (+, -s_1, ..., -s_n),
    whose defect is I - D."""
    eye = np.eye(t.dim, dtype=np.complex128)
    ops = (eye,) + tuple(t.ops)
    signs = (1,) + tuple(-s for s in t.signature)
    return SignedOperatorTuple(ops, Signature(signs))


def solve_complement(
    t: SignedOperatorTuple, v, eps: float | None = None, *, range_tol: float | None = None
) -> SolveReport:
    """Minimal-norm solve against the complement defect (I - D)^(1/2).

    Requires full validity. Delegates to the truncated (or exact, when
    ``eps`` is None) solve on the extended tuple, so the report's block
    vector has n+1 slots with signature (+, -s_1, ..., -s_n).
    """
    t.require_validity(VALIDITY_FULL)
    ext = extended_tuple(t)
    if eps is None:
        return solve_exact(ext, v, range_tol=range_tol)
    return solve_truncated(ext, v, eps, range_tol=range_tol)


@dataclass(frozen=True)
class SweepReport:
    """Reports along a decreasing eps schedule plus the monotonicity,
    signed Cauchy-identity, and final-equality verdicts."""

    reports: tuple[SolveReport, ...]
    krein_monotone: tuple[bool, ...]
    residual_monotone: tuple[bool, ...]
    cauchy_max_dev: float
    final_residual_ok: bool
    final_equality_ok: bool
    lambda_min_pos: float | None

    @property
    def monotone_ok(self) -> bool:
        return all(self.krein_monotone) and all(self.residual_monotone)

    @property
    def ok(self) -> bool:
        return self.monotone_ok and self.final_equality_ok


def convergence_sweep(
    t: SignedOperatorTuple, u, eps_schedule, *, range_tol: float | None = None
) -> SweepReport:
    """Run truncated solves along a strictly decreasing positive eps
    schedule and check the convergence contract.

    Checks per consecutive pair: signed norms nondecreasing and residuals
    nonincreasing (within slack), and the signed Cauchy identity
    <z_e - z_d, z_e - z_d> = |x_e - x_d|^2.
    """
    t.require_validity(VALIDITY_LOWER)
    u = as_complex_vector(u, "u")
    schedule = np.asarray(eps_schedule, dtype=np.float64)
    if schedule.ndim != 1 or schedule.size == 0:
        raise ValueError("eps schedule must be a nonempty 1-D sequence")
    if np.any(schedule <= 0):
        raise ValueError("eps schedule must be positive")
    if schedule.size > 1 and not np.all(np.diff(schedule) < 0):
        raise ValueError("eps schedule must be strictly decreasing")

    tol = resolve_range_tol(range_tol)
    reports: list[SolveReport] = []
    states: list[np.ndarray] = []
    for eps in schedule:
        rep, x_eps = _solve_with_state(t, u, float(eps), tol)
        reports.append(rep)
        states.append(x_eps)

    krein_flags = [True]
    resid_flags = [True]
    cauchy_dev = 0.0
    for prev, cur, xp, xc in zip(reports, reports[1:], states, states[1:]):
        krein_flags.append(cur.krein_norm_sq >= prev.krein_norm_sq - MONOTONE_SLACK)
        resid_flags.append(cur.residual <= prev.residual + MONOTONE_SLACK)
        dz = cur.z - prev.z
        signed = krein_inner(dz, dz).real
        cauchy_dev = max(cauchy_dev, abs(signed - float(np.linalg.norm(xc - xp) ** 2)))

    last = reports[-1]
    final_residual_ok = last.residual <= tol * max(1.0, float(np.linalg.norm(u)))
    final_equality_ok = (
        final_residual_ok
        and abs(last.krein_norm_sq - last.target_norm_sq) <= CAUCHY_TOL
    )
    return SweepReport(
        reports=tuple(reports),
        krein_monotone=tuple(krein_flags),
        residual_monotone=tuple(resid_flags),
        cauchy_max_dev=float(cauchy_dev),
        final_residual_ok=final_residual_ok,
        final_equality_ok=final_equality_ok,
        lambda_min_pos=lambda_min_positive(t),
    )


def geometric_schedule(start: float, ratio: float, count: int) -> np.ndarray:
    """start * ratio^k for k = 0..count-1; requires 0 < ratio < 1."""
    if start <= 0:
        raise ValueError(f"start must be positive, got {start}")
    if not 0.0 < ratio < 1.0:
        raise ValueError(f"ratio must lie in (0, 1), got {ratio}")
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    return start * ratio ** np.arange(count, dtype=np.float64)
