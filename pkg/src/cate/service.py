"""HTTP service exposing parsing and model metadata to the web UI.

Endpoints: POST /api/parse, GET /api/models, GET /api/health.  Models
are separate checkpoint files discovered from a directory and held
read-only; every response is a pure function of the request.
"""

from __future__ import annotations

import time
from pathlib import Path
from typing import Optional, Union

from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel

from .errors import CateError, EmptySentenceError
from .inference import ParseConfig, parse_tokens, tree_to_json
from .rnn import ModelParams, load_checkpoint
from .trees import BranchingMode, tokenize


class ParseRequest(BaseModel):
    sentence: str
    beam_width: int = 1
    use_temperature: bool = False
    branching: str = "left"
    embedding_variant: str = "random"


class ParseResponse(BaseModel):
    tree: dict
    cum_logprob: float
    model_version: str
    timing_ms: float


def variant_id(params: ModelParams) -> str:
    return f"{params.embedding_variant}-{params.branching.value}"


class ModelRegistry:
    """Immutable map from (branching, embedding_variant) to loaded
    checkpoints."""

    def __init__(self, models: dict[tuple[str, str], ModelParams]):
        self._models = models

    @classmethod
    def from_directory(cls, model_dir: Union[str, Path]) -> "ModelRegistry":
        models = {}
        for path in sorted(Path(model_dir).glob("*.json")):
            params = load_checkpoint(path)
            key = (params.branching.value, params.embedding_variant)
            models[key] = params
        return cls(models)

    def get(self, branching: str, embedding_variant: str) -> Optional[ModelParams]:
        return self._models.get((branching, embedding_variant))

    def describe(self) -> list[dict]:
        return [
            {
                "variant_id": variant_id(p),
                "branching": p.branching.value,
                "embedding_mode": p.embedding.mode.value,
                "embedding_variant": p.embedding_variant,
                "dim": p.dim,
                "temperature_fitted": p.temperature is not None,
            }
            for p in self._models.values()
        ]

    def __len__(self) -> int:
        return len(self._models)


def create_app(model_dir: Union[str, Path]) -> FastAPI:
    registry = ModelRegistry.from_directory(model_dir)
    app = FastAPI(title="causality tree extraction service")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.get("/api/health")
    def health():
        return {"status": "ok", "models": len(registry)}

    @app.get("/api/models")
    def models():
        return registry.describe()

    @app.post("/api/parse")
    def parse(request: ParseRequest) -> ParseResponse:
        if not request.sentence.strip():
            raise HTTPException(status_code=400, detail="sentence is empty")
        if request.beam_width < 1:
            raise HTTPException(status_code=400,
                                detail="beam_width must be >= 1")
        try:
            BranchingMode(request.branching)
        except ValueError:
            raise HTTPException(status_code=400,
                                detail=f"unknown branching "
                                       f"{request.branching!r}")
        params = registry.get(request.branching, request.embedding_variant)
        if params is None:
            raise HTTPException(
                status_code=404,
                detail=f"no model for branching={request.branching!r}, "
                       f"embedding_variant={request.embedding_variant!r}")
        config = ParseConfig(
            beam_width=request.beam_width,
            use_temperature=request.use_temperature,
            branching=params.branching,
            embedding_variant=request.embedding_variant,
        )
        started = time.perf_counter()
        try:
            tokens = tokenize(request.sentence)
            root = parse_tokens(params, None, tokens, config)
        except EmptySentenceError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        except CateError as exc:
            raise HTTPException(status_code=500,
                                detail={"error": str(exc)})
        elapsed_ms = (time.perf_counter() - started) * 1000.0
        return ParseResponse(
            tree=tree_to_json(root),
            cum_logprob=root.cum_logprob,
            model_version=params.version,
            timing_ms=elapsed_ms,
        )

    return app
