"""JSON-over-HTTP service around one loaded checkpoint.

The checkpoint is read once at startup and never mutated, so request
handlers are pure functions of their inputs and may run concurrently.
Clients supply their own seeds; calling an endpoint twice with the same
body returns the same bytes.

Error contract: 400 for anything wrong with the request content, 422 when
a supplied volume does not match the model's grid, 500 otherwise. Bodies
are always {"error": ..., "detail": ...}.
"""

from __future__ import annotations

import math
from typing import Literal

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from ..datakit.types import ConditionProfile
from ..engine.infer import (
    SWEEP_FACTORS,
    complete_sequence,
    condition_sweep,
    generate_sequences,
)
from ..engine.train import DEFAULT_FRAME_PERIOD_S
from ..errors import ShapeError
from ..model.checkpoint import CHECKPOINT_FORMAT_VERSION, load_checkpoint
from ..model.networks import CardiacVAE
from .payloads import CODECS, payload_to_volume, sequence_to_payload

MAX_SAMPLES_PER_REQUEST = 500

Codec = Literal["raw_b64", "rle_b64"]


class ConditionsIn(BaseModel):
    age: int
    gender: str
    weight: float
    height: float
    sbp: float

    def to_profile(self) -> ConditionProfile:
        return ConditionProfile(
            age_years=self.age,
            gender=self.gender,
            weight_kg=self.weight,
            height_cm=self.height,
            sbp_mmhg=self.sbp,
        )


class GenerateIn(BaseModel):
    conditions: ConditionsIn
    n: int = Field(default=1, ge=1, le=MAX_SAMPLES_PER_REQUEST)
    seed: int = 0
    codec: Codec = "raw_b64"


class CompleteIn(BaseModel):
    x0: dict
    conditions: ConditionsIn
    mode: Literal["posterior_mean", "sample"] = "posterior_mean"
    seed: int = 0
    codec: Codec = "raw_b64"


class SweepIn(BaseModel):
    base_conditions: ConditionsIn
    factor: str
    values: list[int | float | str] = Field(min_length=1)
    n: int = Field(default=50, ge=1, le=MAX_SAMPLES_PER_REQUEST)
    seed: int = 0
    fix_latent: bool = True
    include_samples: bool = False
    codec: Codec = "raw_b64"


# how to coerce swept values before they land in the profile field
_VALUE_CAST = {"age": int, "gender": str}


def _json_numbers(values) -> list:
    """Strict JSON forbids NaN; undefined table cells become null."""
    return [float(v) if math.isfinite(v) else None for v in values]


def create_app(model: CardiacVAE, meta: dict | None = None) -> FastAPI:
    meta = dict(meta or {})
    frame_period_s = float(meta.get("frame_period_s", DEFAULT_FRAME_PERIOD_S))
    app = FastAPI(title="cheart", docs_url=None, redoc_url=None)

    @app.exception_handler(RequestValidationError)
    async def on_bad_request(request: Request, exc: RequestValidationError):
        detail = [
            {"field": ".".join(str(p) for p in err["loc"] if p != "body"), "message": err["msg"]}
            for err in exc.errors()
        ]
        return JSONResponse(status_code=400, content={"error": "validation", "detail": detail})

    @app.exception_handler(ValueError)
    async def on_value_error(request: Request, exc: ValueError):
        return JSONResponse(status_code=400, content={"error": "validation", "detail": str(exc)})

    @app.exception_handler(ShapeError)
    async def on_shape_error(request: Request, exc: ShapeError):
        return JSONResponse(
            status_code=422, content={"error": "dimension_mismatch", "detail": str(exc)}
        )

    @app.exception_handler(Exception)
    async def on_internal_error(request: Request, exc: Exception):
        return JSONResponse(status_code=500, content={"error": "internal", "detail": str(exc)})

    @app.get("/model/info")
    def model_info():
        cfg = model.config
        return {
            "grid_dims": list(cfg.grid_dims),
            "t_frames": cfg.t_frames,
            "z0_dim": cfg.z0_dim,
            "zc_dim": cfg.zc_dim,
            "channels": list(cfg.channels),
            "beta": cfg.beta,
            "bounds": cfg.bounds.as_dict(),
            "frame_period_s": frame_period_s,
            "format_version": CHECKPOINT_FORMAT_VERSION,
            "codecs": list(CODECS),
            "sweep_factors": sorted(SWEEP_FACTORS),
        }

    @app.post("/generate")
    def generate(body: GenerateIn):
        profile = body.conditions.to_profile()
        seqs = generate_sequences(model, profile, body.n, seed=body.seed,
                                  frame_period_s=frame_period_s)
        return {"n": body.n, "seed": body.seed,
                "sequences": [sequence_to_payload(s, body.codec) for s in seqs]}

    @app.post("/complete")
    def complete(body: CompleteIn):
        x0 = payload_to_volume(body.x0)
        if x0.dims != model.config.grid_dims:
            raise ShapeError(
                f"frame grid {x0.dims} does not match model grid {model.config.grid_dims}"
            )
        profile = body.conditions.to_profile()
        seq = complete_sequence(model, x0, profile, mode=body.mode, seed=body.seed,
                                frame_period_s=frame_period_s)
        return {"mode": body.mode, "seed": body.seed,
                "sequence": sequence_to_payload(seq, body.codec)}

    @app.post("/sweep")
    def sweep(body: SweepIn):
        cast = _VALUE_CAST.get(body.factor, float)
        values = [cast(v) for v in body.values]
        result = condition_sweep(
            model,
            body.base_conditions.to_profile(),
            body.factor,
            values,
            n=body.n,
            seed=body.seed,
            fix_latent=body.fix_latent,
            frame_period_s=frame_period_s,
        )
        out = {
            "factor": result.factor,
            "values": result.values,
            "n": result.n,
            "mean": {f: _json_numbers(v) for f, v in result.mean.items()},
            "ci_half": {f: _json_numbers(v) for f, v in result.ci_half.items()},
            "defined_counts": result.defined_counts(),
        }
        if body.include_samples:
            out["sequences"] = [
                [sequence_to_payload(s, body.codec) for s in per_value]
                for per_value in result.sequences
            ]
        return out

    return app


def serve(checkpoint_path, host: str = "127.0.0.1", port: int = 8000):
    """Load the checkpoint and block serving requests."""
    import uvicorn

    model, meta = load_checkpoint(checkpoint_path)
    uvicorn.run(create_app(model, meta), host=host, port=port, log_level="info")
