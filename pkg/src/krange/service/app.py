"""HTTP service exposing the solvers and verifiers.

Endpoints wrap the pure handler functions below; the CLI calls the same
handlers in-process. Malformed payloads surface as HTTP 422 (pydantic or
parameter validation), while mathematical verdicts (off-range targets,
invalid tuples, failed properties) come back as 200 responses with
``ok: false`` and a witness where one exists.
"""

from __future__ import annotations

import numpy as np
from fastapi import FastAPI, HTTPException

from .. import __version__
from ..config import (
    CAUCHY_TOL,
    NORM_EQUALITY_RTOL,
    PSD_CLAMP_TOL,
    resolve_range_tol,
)
from ..errors import (
    EmptySubspaceError,
    InvalidTupleError,
    KrangeError,
    NotFullValidityError,
    NotInRangeError,
    NotPSDError,
    NotUniformlyPositiveError,
    ShapeMismatchError,
    WireFormatError,
    ZeroDefectError,
)
from ..generators import bidisk_triplet, corona_triplet, random_tuple
from ..localstruct import (
    positivity_bound_report,
    restricted_operator_norm,
    verify_norm_equality,
)
from ..solver import convergence_sweep, geometric_schedule, solve_exact, solve_truncated
from ..tuples import VALIDITY_INVALID, isometry_deviation, row_restriction_report
from .schemas import (
    CheckRequest,
    CheckResponse,
    CoronaDiagnosticsModel,
    CoronaParams,
    GenerateRequest,
    GenerateResponse,
    HealthResponse,
    MatrixModel,
    NormEqualityModel,
    RowRestrictionModel,
    SolveRequest,
    SolveResponse,
    SweepRequest,
    SweepResponse,
    SweepRowModel,
    TupleModel,
    VectorModel,
    VerifyRequest,
    VerifyResponse,
)

#: Largest tolerated deviation in the defect identity check.
ISOMETRY_TOL = 1e-9


def _tolerances(range_tol: float | None = None) -> dict[str, float]:
    out = {
        "psd_clamp_tol": PSD_CLAMP_TOL,
        "isometry_tol": ISOMETRY_TOL,
        "norm_equality_rtol": NORM_EQUALITY_RTOL,
        "equality_tol": CAUCHY_TOL,
    }
    if range_tol is not None:
        out["range_tol"] = range_tol
    return out


def handle_check(req: CheckRequest) -> CheckResponse:
    t = req.tuple.to_core()
    rep = t.validation
    witnesses = []
    if rep.witnesses is not None:
        witnesses = [VectorModel.from_array(rep.witnesses[:, k]) for k in range(rep.witnesses.shape[1])]
    if rep.level == VALIDITY_INVALID:
        return CheckResponse(
            ok=False,
            level=rep.level,
            min_eig=rep.min_eig,
            max_eig=rep.max_eig,
            witnesses=witnesses,
            seed=req.seed,
            samples=req.samples,
            version=__version__,
            tolerances=_tolerances(),
        )
    deviation = isometry_deviation(t, samples=req.samples, seed=req.seed)
    restriction = row_restriction_report(t)
    ok = deviation <= ISOMETRY_TOL and restriction.ok
    return CheckResponse(
        ok=ok,
        level=rep.level,
        min_eig=rep.min_eig,
        max_eig=rep.max_eig,
        isometry_max_deviation=deviation,
        row_restriction=RowRestrictionModel(
            vacuous=restriction.vacuous,
            injective=restriction.injective,
            min_singular_value=restriction.min_singular_value,
            image_rank=restriction.image_rank,
            range_rank=restriction.range_rank,
            ranges_equal=restriction.ranges_equal,
            max_projection_residual=restriction.max_projection_residual,
        ),
        witnesses=witnesses,
        seed=req.seed,
        samples=req.samples,
        version=__version__,
        tolerances=_tolerances(),
    )


def handle_solve(req: SolveRequest) -> SolveResponse:
    t = req.tuple.to_core()
    u = req.u.to_array()
    tol = resolve_range_tol(req.tol)
    try:
        if req.exact:
            report = solve_exact(t, u, range_tol=tol)
        else:
            report = solve_truncated(t, u, req.eps, range_tol=tol)
    except NotInRangeError as exc:
        return SolveResponse(
            ok=False,
            in_range=False,
            error=str(exc),
            witness=VectorModel.from_array(exc.witness) if exc.witness is not None else None,
            version=__version__,
            tolerances=_tolerances(tol),
        )
    except (InvalidTupleError, ZeroDefectError, NotPSDError) as exc:
        return SolveResponse(
            ok=False,
            in_range=False,
            error=str(exc),
            version=__version__,
            tolerances=_tolerances(tol),
        )
    exact_ok = None
    if req.exact:
        exact_ok = (
            report.residual <= tol * max(1.0, float(np.linalg.norm(u)))
            and abs(report.krein_norm_sq - report.target_norm_sq) <= CAUCHY_TOL
        )
    ok = exact_ok if exact_ok is not None else True
    return SolveResponse(
        ok=ok,
        in_range=True,
        eps=report.eps,
        residual=report.residual,
        krein_norm_sq=report.krein_norm_sq,
        target_norm_sq=report.target_norm_sq,
        truncated_norm_sq=report.truncated_norm_sq,
        signature=list(report.z.signature.signs),
        z_blocks=[VectorModel.from_array(report.z.block(j)) for j in range(report.z.n_blocks)],
        exact_equality_ok=exact_ok,
        version=__version__,
        tolerances=_tolerances(tol),
    )


def handle_sweep(req: SweepRequest) -> SweepResponse:
    t = req.tuple.to_core()
    u = req.u.to_array()
    tol = resolve_range_tol(req.tol)
    schedule = geometric_schedule(req.grid.start, req.grid.ratio, req.grid.count)
    try:
        sweep = convergence_sweep(t, u, schedule, range_tol=tol)
    except NotInRangeError as exc:
        return SweepResponse(
            ok=False,
            in_range=False,
            error=str(exc),
            witness=VectorModel.from_array(exc.witness) if exc.witness is not None else None,
            version=__version__,
            tolerances=_tolerances(tol),
        )
    except (InvalidTupleError, ZeroDefectError, NotPSDError) as exc:
        return SweepResponse(
            ok=False,
            in_range=False,
            error=str(exc),
            version=__version__,
            tolerances=_tolerances(tol),
        )
    rows = [
        SweepRowModel(
            eps=rep.eps,
            residual=rep.residual,
            krein_norm_sq=rep.krein_norm_sq,
            target_norm_sq=rep.target_norm_sq,
            monotone_ok=k_ok and r_ok,
        )
        for rep, k_ok, r_ok in zip(sweep.reports, sweep.krein_monotone, sweep.residual_monotone)
    ]
    return SweepResponse(
        ok=sweep.ok,
        in_range=True,
        rows=rows,
        monotone_ok=sweep.monotone_ok,
        cauchy_max_dev=sweep.cauchy_max_dev,
        final_equality_ok=sweep.final_equality_ok,
        lambda_min_pos=sweep.lambda_min_pos,
        target_norm_sq=sweep.reports[-1].target_norm_sq,
        version=__version__,
        tolerances=_tolerances(tol),
    )


def handle_generate(req: GenerateRequest) -> GenerateResponse:
    if req.kind == "bidisk":
        t = bidisk_triplet(req.bidisk.n)
        meta = {"kind": "bidisk", "n": req.bidisk.n, "version": __version__}
        return GenerateResponse(
            ok=True, tuple=TupleModel.from_core(t, meta), version=__version__
        )
    if req.kind == "random":
        p = req.random
        t = random_tuple(p.pos, p.neg, p.dim, seed=p.seed, margin=p.margin)
        meta = {
            "kind": "random",
            "dim": p.dim,
            "seed": p.seed,
            "pos": p.pos,
            "neg": p.neg,
            "margin": p.margin,
            "version": __version__,
        }
        return GenerateResponse(
            ok=True, tuple=TupleModel.from_core(t, meta), version=__version__
        )
    p = req.corona
    coeffs = {
        name: CoronaParams.coeffs_to_complex(getattr(p, name))
        for name in ("phi1", "phi2", "psi1", "psi2")
    }
    try:
        t, diag = corona_triplet(
            coeffs["phi1"], coeffs["phi2"], coeffs["psi1"], coeffs["psi2"], p.n
        )
    except InvalidTupleError as exc:
        diag = getattr(exc, "diagnostics", None)
        return GenerateResponse(
            ok=False,
            error=str(exc),
            diagnostics=CoronaDiagnosticsModel(
                row_sup_sq=diag.row_sup_sq,
                col_sup_sq=diag.col_sup_sq,
                row_ok=diag.row_ok,
                col_ok=diag.col_ok,
            )
            if diag is not None
            else None,
            version=__version__,
        )
    meta = {
        "kind": "corona",
        "n": p.n,
        "phi1": [[c.real, c.imag] for c in coeffs["phi1"]],
        "phi2": [[c.real, c.imag] for c in coeffs["phi2"]],
        "psi1": [[c.real, c.imag] for c in coeffs["psi1"]],
        "psi2": [[c.real, c.imag] for c in coeffs["psi2"]],
        "version": __version__,
    }
    return GenerateResponse(
        ok=True,
        tuple=TupleModel.from_core(t, meta),
        diagnostics=CoronaDiagnosticsModel(
            row_sup_sq=diag.row_sup_sq,
            col_sup_sq=diag.col_sup_sq,
            row_ok=diag.row_ok,
            col_ok=diag.col_ok,
        ),
        version=__version__,
    )


def handle_verify(req: VerifyRequest) -> VerifyResponse:
    t = req.tuple.to_core()
    tol = resolve_range_tol(req.tol)
    try:
        bound_rep = positivity_bound_report(t, req.eps)
    except (InvalidTupleError, NotPSDError) as exc:
        return VerifyResponse(
            ok=False,
            error=str(exc),
            eps=req.eps,
            seed=req.seed,
            samples=req.samples,
            version=__version__,
            tolerances=_tolerances(tol),
        )
    if bound_rep.vacuous:
        return VerifyResponse(
            ok=True,
            eps=req.eps,
            vacuous=True,
            seed=req.seed,
            samples=req.samples,
            version=__version__,
            tolerances=_tolerances(tol),
        )
    try:
        restricted = restricted_operator_norm(t, req.eps)
        equality = verify_norm_equality(t, req.eps, samples=req.samples, seed=req.seed)
    except (EmptySubspaceError, NotUniformlyPositiveError) as exc:
        return VerifyResponse(
            ok=False,
            error=str(exc),
            eps=req.eps,
            delta_star=bound_rep.delta_star,
            delta_bound=bound_rep.bound,
            bound_satisfied=bound_rep.satisfied,
            seed=req.seed,
            samples=req.samples,
            version=__version__,
            tolerances=_tolerances(tol),
        )
    ok = bound_rep.satisfied and equality.equality_ok and equality.embedding_ok and equality.reverse_ok
    return VerifyResponse(
        ok=ok,
        eps=req.eps,
        vacuous=False,
        delta_star=bound_rep.delta_star,
        delta_bound=bound_rep.bound,
        bound_satisfied=bound_rep.satisfied,
        restricted_norm=restricted,
        norm_equality=NormEqualityModel(
            max_abs_dev=equality.max_abs_dev,
            embedding_ok=equality.embedding_ok,
            reverse_ok=equality.reverse_ok,
            equality_ok=equality.equality_ok,
            samples=equality.samples,
            seed=equality.seed,
        ),
        seed=req.seed,
        samples=req.samples,
        version=__version__,
        tolerances=_tolerances(tol),
    )


def create_app() -> FastAPI:
    app = FastAPI(
        title="krange",
        version=__version__,
        description="Signed operator tuples, pull-back norms, and minimal-norm solvers.",
    )

    def _guard(handler, req):
        try:
            return handler(req)
        except (ShapeMismatchError, WireFormatError, NotFullValidityError, ValueError) as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc
        except KrangeError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc

    @app.get("/health", response_model=HealthResponse)
    def health() -> HealthResponse:
        return HealthResponse(status="ok", version=__version__)

    @app.post("/check", response_model=CheckResponse)
    def check(req: CheckRequest) -> CheckResponse:
        return _guard(handle_check, req)

    @app.post("/solve", response_model=SolveResponse)
    def solve(req: SolveRequest) -> SolveResponse:
        return _guard(handle_solve, req)

    @app.post("/sweep", response_model=SweepResponse)
    def sweep(req: SweepRequest) -> SweepResponse:
        return _guard(handle_sweep, req)

    @app.post("/generate", response_model=GenerateResponse)
    def generate(req: GenerateRequest) -> GenerateResponse:
        return _guard(handle_generate, req)

    @app.post("/verify", response_model=VerifyResponse)
    def verify(req: VerifyRequest) -> VerifyResponse:
        return _guard(handle_verify, req)

    return app


app = create_app()
