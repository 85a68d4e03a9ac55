"""Pydantic request/response models for the HTTP service.

These mirror the JSON wire formats: matrices and vectors carry complex
entries as [re, im] pairs, tuples bundle operators with a signature and
optional generation metadata. Every response carries the library
version plus the tolerances and seeds that produced it.
"""

from __future__ import annotations

import math
from typing import Literal, Optional, Union

import numpy as np
from pydantic import BaseModel, Field, field_validator, model_validator

from ..errors import WireFormatError
from ..krein import Signature
from ..tuples import SignedOperatorTuple

Pair = tuple[float, float]

#: Polynomial coefficients arrive as plain reals or [re, im] pairs.
Coefficient = Union[float, Pair]


def _require_finite(values, where: str) -> None:
    for i, pair in enumerate(values):
        for part in pair:
            if not math.isfinite(part):
                raise ValueError(f"{where}[{i}] contains a non-finite value")


class MatrixModel(BaseModel):
    rows: int = Field(ge=1)
    cols: int = Field(ge=1)
    data: list[Pair]

    @model_validator(mode="after")
    def _check(self):
        if len(self.data) != self.rows * self.cols:
            raise ValueError(
                f"data has {len(self.data)} entries, expected rows*cols = {self.rows * self.cols}"
            )
        _require_finite(self.data, "data")
        return self

    def to_array(self) -> np.ndarray:
        flat = np.array([complex(re, im) for re, im in self.data], dtype=np.complex128)
        return flat.reshape(self.rows, self.cols)

    @classmethod
    def from_array(cls, a: np.ndarray) -> "MatrixModel":
        arr = np.asarray(a, dtype=np.complex128)
        return cls(
            rows=arr.shape[0],
            cols=arr.shape[1],
            data=[(float(z.real), float(z.imag)) for z in arr.reshape(-1)],
        )


class VectorModel(BaseModel):
    dim: int = Field(ge=1)
    data: list[Pair]

    @model_validator(mode="after")
    def _check(self):
        if len(self.data) != self.dim:
            raise ValueError(f"data has {len(self.data)} entries, expected dim = {self.dim}")
        _require_finite(self.data, "data")
        return self

    def to_array(self) -> np.ndarray:
        return np.array([complex(re, im) for re, im in self.data], dtype=np.complex128)

    @classmethod
    def from_array(cls, v: np.ndarray) -> "VectorModel":
        arr = np.asarray(v, dtype=np.complex128).reshape(-1)
        return cls(dim=arr.size, data=[(float(z.real), float(z.imag)) for z in arr])


class TupleModel(BaseModel):
    dim: int = Field(ge=1)
    signature: list[int]
    ops: list[MatrixModel]
    meta: Optional[dict] = None

    @field_validator("signature")
    @classmethod
    def _signs(cls, v):
        if not v:
            raise ValueError("signature must be nonempty")
        if any(s not in (1, -1) for s in v):
            raise ValueError("signature entries must be +1 or -1")
        return v

    @model_validator(mode="after")
    def _check(self):
        if len(self.ops) != len(self.signature):
            raise ValueError("ops must match the signature length")
        for j, op in enumerate(self.ops):
            if op.rows != self.dim or op.cols != self.dim:
                raise ValueError(f"ops[{j}] must be {self.dim} x {self.dim}")
        return self

    def to_core(self) -> SignedOperatorTuple:
        try:
            return SignedOperatorTuple(
                [op.to_array() for op in self.ops], Signature(tuple(self.signature))
            )
        except WireFormatError:
            raise
        except Exception as exc:
            raise ValueError(str(exc)) from exc

    @classmethod
    def from_core(cls, t: SignedOperatorTuple, meta: Optional[dict] = None) -> "TupleModel":
        return cls(
            dim=t.dim,
            signature=list(t.signature.signs),
            ops=[MatrixModel.from_array(op) for op in t.ops],
            meta=meta,
        )


# ---------------------------------------------------------------- requests


class CheckRequest(BaseModel):
    tuple: TupleModel
    samples: int = Field(default=200, ge=1)
    seed: int = 0


class SolveRequest(BaseModel):
    tuple: TupleModel
    u: VectorModel
    eps: Optional[float] = None
    exact: bool = False
    tol: Optional[float] = Field(default=None, gt=0)

    @model_validator(mode="after")
    def _mode(self):
        if not self.exact and self.eps is None:
            raise ValueError("either eps or exact must be given")
        if self.exact and self.eps is not None:
            raise ValueError("eps and exact are mutually exclusive")
        if self.eps is not None and self.eps <= 0:
            raise ValueError("eps must be positive")
        return self


class EpsGrid(BaseModel):
    start: float = Field(gt=0)
    ratio: float = Field(gt=0, lt=1)
    count: int = Field(ge=1)


class SweepRequest(BaseModel):
    tuple: TupleModel
    u: VectorModel
    grid: EpsGrid
    tol: Optional[float] = Field(default=None, gt=0)


class BidiskParams(BaseModel):
    n: int = Field(ge=1)


class CoronaParams(BaseModel):
    phi1: list[Coefficient]
    phi2: list[Coefficient]
    psi1: list[Coefficient]
    psi2: list[Coefficient]
    n: int = Field(ge=1)

    @staticmethod
    def coeffs_to_complex(coeffs: list[Coefficient]) -> list[complex]:
        out = []
        for c in coeffs:
            if isinstance(c, (int, float)):
                out.append(complex(c))
            else:
                out.append(complex(c[0], c[1]))
        return out


class RandomParams(BaseModel):
    dim: int = Field(ge=1)
    seed: int = 0
    pos: int = Field(default=2, ge=1)
    neg: int = Field(default=1, ge=0)
    margin: float = Field(default=0.5, gt=0, lt=1)


class GenerateRequest(BaseModel):
    kind: Literal["bidisk", "corona", "random"]
    bidisk: Optional[BidiskParams] = None
    corona: Optional[CoronaParams] = None
    random: Optional[RandomParams] = None

    @model_validator(mode="after")
    def _params_present(self):
        if getattr(self, self.kind) is None:
            raise ValueError(f"missing parameters for kind={self.kind!r}")
        return self


class VerifyRequest(BaseModel):
    tuple: TupleModel
    eps: float = Field(gt=0)
    samples: int = Field(default=20, ge=1)
    seed: int = 0
    tol: Optional[float] = Field(default=None, gt=0)


# --------------------------------------------------------------- responses


class RowRestrictionModel(BaseModel):
    vacuous: bool
    injective: bool
    min_singular_value: float
    image_rank: int
    range_rank: int
    ranges_equal: bool
    max_projection_residual: float


class CheckResponse(BaseModel):
    ok: bool
    level: str
    min_eig: float
    max_eig: float
    isometry_max_deviation: Optional[float] = None
    row_restriction: Optional[RowRestrictionModel] = None
    witnesses: list[VectorModel] = []
    seed: int = 0
    samples: int = 0
    version: str
    tolerances: dict[str, float]


class SolveResponse(BaseModel):
    ok: bool
    in_range: bool
    error: Optional[str] = None
    eps: Optional[float] = None
    residual: Optional[float] = None
    krein_norm_sq: Optional[float] = None
    target_norm_sq: Optional[float] = None
    truncated_norm_sq: Optional[float] = None
    signature: Optional[list[int]] = None
    z_blocks: Optional[list[VectorModel]] = None
    exact_equality_ok: Optional[bool] = None
    witness: Optional[VectorModel] = None
    version: str
    tolerances: dict[str, float]


class SweepRowModel(BaseModel):
    eps: float
    residual: float
    krein_norm_sq: float
    target_norm_sq: float
    monotone_ok: bool


class SweepResponse(BaseModel):
    ok: bool
    in_range: bool
    error: Optional[str] = None
    rows: list[SweepRowModel] = []
    monotone_ok: Optional[bool] = None
    cauchy_max_dev: Optional[float] = None
    final_equality_ok: Optional[bool] = None
    lambda_min_pos: Optional[float] = None
    target_norm_sq: Optional[float] = None
    witness: Optional[VectorModel] = None
    version: str
    tolerances: dict[str, float]


class CoronaDiagnosticsModel(BaseModel):
    row_sup_sq: float
    col_sup_sq: float
    row_ok: bool
    col_ok: bool


class GenerateResponse(BaseModel):
    ok: bool
    error: Optional[str] = None
    tuple: Optional[TupleModel] = None
    diagnostics: Optional[CoronaDiagnosticsModel] = None
    version: str


class NormEqualityModel(BaseModel):
    max_abs_dev: float
    embedding_ok: bool
    reverse_ok: bool
    equality_ok: bool
    samples: int
    seed: int


class VerifyResponse(BaseModel):
    ok: bool
    error: Optional[str] = None
    eps: float
    vacuous: bool = False
    delta_star: Optional[float] = None
    delta_bound: Optional[float] = None
    bound_satisfied: Optional[bool] = None
    restricted_norm: Optional[float] = None
    norm_equality: Optional[NormEqualityModel] = None
    seed: int = 0
    samples: int = 0
    version: str
    tolerances: dict[str, float]


class HealthResponse(BaseModel):
    status: str
    version: str
