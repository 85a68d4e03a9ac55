"""Numerical tolerances and environment-driven configuration.

All thresholds used across the library live here so that the meaning of
every magic number is pinned in one place.
"""

from __future__ import annotations

import os

#: Relative tolerance for accepting a matrix as Hermitian.
HERMITICITY_RTOL = 1e-10

#: Eigenvalues of a nominally PSD matrix may dip this far below zero
#: before the matrix is rejected; anything in [-PSD_CLAMP_TOL, 0) is
#: clamped to 0.
PSD_CLAMP_TOL = 1e-9

#: Rank cutoff for pseudo-inverses: relative factor times the largest
#: eigenvalue, with an absolute floor.
RANK_TOL_REL = 1e-10
RANK_TOL_FLOOR = 1e-14

#: Eigenvalues within this distance of a spectral cut are treated as
#: lying below the cut (deterministic tie rule for strict ">").
SPECTRAL_TIE_TOL = 1e-12

#: A subspace counts as uniformly positive only if its positivity bound
#: exceeds this cutoff.
POSITIVITY_MIN = 1e-12

#: Smallest singular value (after column normalization) below which a
#: basis is rejected as degenerate.
BASIS_INDEPENDENCE_TOL = 1e-10

#: Raw Gram matrices of generated bases must have eigenvalues above this.
GRAM_INDEPENDENCE_TOL = 1e-12

#: Residual tolerance deciding range membership, relative to max(1, |u|).
DEFAULT_RANGE_TOL = 1e-8

#: Operator-norm slack when requiring a Hermitian contraction.
CONTRACTION_TOL = 1e-8

#: Relative tolerance for the two-sided pull-back norm equality.
NORM_EQUALITY_RTOL = 1e-7

#: Slack absorbed when checking monotone convergence of sweeps.
MONOTONE_SLACK = 1e-10

#: Tolerance for signed-norm identities along a sweep.
CAUCHY_TOL = 1e-8

#: Environment variable overriding the range-membership tolerance.
TOL_ENV_VAR = "KRANGE_TOL"


def resolve_range_tol(override: float | None = None) -> float:
    """Resolve the residual tolerance used for range-membership decisions.

    Priority: explicit ``override`` (e.g. a CLI flag), then the
    ``KRANGE_TOL`` environment variable, then the built-in default.
    """
    if override is not None:
        return float(override)
    env = os.environ.get(TOL_ENV_VAR)
    if env is not None:
        return float(env)
    return DEFAULT_RANGE_TOL
