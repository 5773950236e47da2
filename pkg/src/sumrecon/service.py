"""HTTP service wrapping the core package.

Endpoints (all POST unless noted):

* ``/bounds``        -> CSV of the three bound curves on a distortion grid
* ``/simulate``      -> one Monte Carlo experiment, JSON report
* ``/sweep``         -> list of reports along one swept parameter
* ``/check-triple``  -> region membership flags for a (R1, R2, D) triple
* ``/code-info``     -> quantizer statistics of a code spec
* ``GET /healthz``   -> liveness

Error mapping: domain violations -> 400, infeasible designs (enumeration
capacity) -> 409, request-shape problems -> 422 (FastAPI validation).
"""

from __future__ import annotations

import secrets
from typing import Literal

import numpy as np
from fastapi import FastAPI
from fastapi.responses import JSONResponse, PlainTextResponse
from pydantic import BaseModel, Field

from . import __version__
from .bounds import (
    DEFAULT_GRID_SIZE,
    RegionTriple,
    lkm_inner_curve,
    membership,
    steinberg_inner_curve,
    wz_outer_curve,
)
from .codes import DEFAULT_ENUMERATION_CAP, CodeSpec, build_code, code_info
from .errors import CapacityError, ConstructionError, InvalidParameterError
from .montecarlo import ExperimentConfig, run_experiment, sweep

__all__ = [
    "BoundsRequest",
    "CodeInfoRequest",
    "CodeInfoResponse",
    "CodeSpecModel",
    "MembershipResponse",
    "SimulateRequest",
    "SweepRequest",
    "TrialReportModel",
    "app",
    "bounds_csv",
]


class CodeSpecModel(BaseModel):
    kind: Literal["none", "repetition", "hamming74", "random"]
    n: int | None = None
    m: int | None = None
    seed: int | None = None

    def to_spec(self) -> CodeSpec:
        return CodeSpec(kind=self.kind, n=self.n, m=self.m, seed=self.seed)


class BoundsRequest(BaseModel):
    p: float
    grid: int = DEFAULT_GRID_SIZE


class SimulateRequest(BaseModel):
    scheme: Literal["lkm", "csr-lkm", "csr-steinberg"]
    p: float
    n: int
    code: CodeSpecModel
    r: int | None = None
    k: int | None = None
    variant: Literal["full_index", "syndrome_binned"] | None = None
    trials: int = 1000
    seed: int | None = None
    dither: bool = True
    enumeration_cap: int = DEFAULT_ENUMERATION_CAP
    workers: int = Field(default=1, ge=1, le=64)

    def to_config(self, seed: int) -> ExperimentConfig:
        config = ExperimentConfig(
            scheme=self.scheme,
            p=self.p,
            n=self.n,
            code=self.code.to_spec(),
            trials=self.trials,
            master_seed=seed,
            r=self.r,
            k=self.k,
            variant=self.variant,
            dither=self.dither,
            enumeration_cap=self.enumeration_cap,
        )
        config.validate()
        return config


class SweepRequest(BaseModel):
    config: SimulateRequest
    axis: Literal["r", "k", "p", "n", "trials"]
    values: list[float]


class TrialReportModel(BaseModel):
    distortion_z1: float
    distortion_z2: float
    distortion_z1_ci95: float
    distortion_z2_ci95: float
    mismatch_rate: float
    psi_mismatch_rate: float
    decode_failure_rate: float
    exact_recovery_rate: float
    rate1: float
    rate2: float
    trials: int
    master_seed: int


class TripleRequest(BaseModel):
    r1: float
    r2: float
    d: float
    p: float
    grid: int = DEFAULT_GRID_SIZE


class MembershipResponse(BaseModel):
    in_R_A: bool
    in_R_B: bool
    in_R_C: bool
    in_TSE_outer: bool


class CodeInfoRequest(BaseModel):
    code: CodeSpecModel


class CodeInfoResponse(BaseModel):
    kind: str
    n: int
    m: int
    rate: float
    q_eff: float
    per_symbol_marginals: list[float]
    covering_radius: int


_CSV_HEADER = (
    "D,wz_outer,steinberg_inner,lkm_inner,"
    "wz_pre_envelope,steinberg_prehull,lkm_prehull"
)


def bounds_csv(p: float, grid_size: int = DEFAULT_GRID_SIZE) -> str:
    """The three bound curves sampled on a uniform distortion grid over
    [0, p], one row per grid point.  Floats are emitted with ``repr`` so the
    output is byte-identical across runs."""
    if not 0.0 < p <= 0.5:
        raise InvalidParameterError(f"p must lie in (0, 1/2], got {p!r}")
    wz = wz_outer_curve(p, grid_size)
    st = steinberg_inner_curve(p, grid_size)
    lk = lkm_inner_curve(p, grid_size)
    ds = p * (np.arange(grid_size) / (grid_size - 1))
    columns = []
    for curve in (wz.hulled, st.hulled, lk.hulled, wz.prehull, st.prehull, lk.prehull):
        try:
            columns.append([repr(float(v)) for v in curve.evaluate_many(ds)])
        except InvalidParameterError:
            columns.append([""] * grid_size)
    lines = [_CSV_HEADER]
    for i, d in enumerate(ds):
        lines.append(",".join([repr(float(d))] + [col[i] for col in columns]))
    return "\n".join(lines) + "\n"


app = FastAPI(title="sumrecon", version=__version__)


@app.exception_handler(InvalidParameterError)
async def _invalid_parameter(request, exc: InvalidParameterError):
    return JSONResponse(status_code=400, content={"detail": str(exc)})


@app.exception_handler(ConstructionError)
async def _construction(request, exc: ConstructionError):
    return JSONResponse(status_code=400, content={"detail": str(exc)})


@app.exception_handler(CapacityError)
async def _capacity(request, exc: CapacityError):
    return JSONResponse(status_code=409, content={"detail": str(exc)})


@app.get("/healthz")
def healthz() -> dict:
    return {"status": "ok", "version": __version__}


@app.post("/bounds")
def post_bounds(req: BoundsRequest) -> PlainTextResponse:
    return PlainTextResponse(bounds_csv(req.p, req.grid), media_type="text/csv")


@app.post("/simulate", response_model=TrialReportModel)
def post_simulate(req: SimulateRequest) -> TrialReportModel:
    seed = req.seed if req.seed is not None else secrets.randbits(64)
    report = run_experiment(req.to_config(seed), workers=req.workers)
    return TrialReportModel(**report.to_dict())


@app.post("/sweep", response_model=list[TrialReportModel])
def post_sweep(req: SweepRequest) -> list[TrialReportModel]:
    seed = req.config.seed if req.config.seed is not None else secrets.randbits(64)
    reports = sweep(
        req.config.to_config(seed), req.axis, req.values, workers=req.config.workers
    )
    return [TrialReportModel(**r.to_dict()) for r in reports]


@app.post("/check-triple", response_model=MembershipResponse)
def post_check_triple(req: TripleRequest) -> MembershipResponse:
    result = membership(RegionTriple(req.r1, req.r2, req.d), req.p, req.grid)
    return MembershipResponse(**result.to_dict())


@app.post("/code-info", response_model=CodeInfoResponse)
def post_code_info(req: CodeInfoRequest) -> CodeInfoResponse:
    return CodeInfoResponse(**code_info(build_code(req.code.to_spec())))
