"""FastAPI service wrapping the solver: submit QCIR text, get a verdict."""

from __future__ import annotations

from typing import Dict, Optional

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from . import __doc__ as _pkg_doc
from .engine import EngineConfig, solve
from .families import FAMILY_NAMES, gen_family
from .qcir import QcirParseError, parse_qcir

app = FastAPI(title="qbflearn", description=_pkg_doc or "")


class SolveRequest(BaseModel):
    qcir: str = Field(description="QCIR-G14 formula text")
    k: int = Field(default=64, ge=1, description="Learn every K iterations")
    learning: bool = True
    accumulate: bool = True
    time_limit: Optional[float] = Field(default=None, gt=0)


class StatsModel(BaseModel):
    iterations: int
    refinements: int
    learn_calls: int
    kept_strategies: int


class SolveResponse(BaseModel):
    verdict: str
    winning_move: Optional[Dict[str, int]] = None
    stats: StatsModel


class FamilyRequest(BaseModel):
    name: str
    n: int = Field(ge=1)


class FamilyResponse(BaseModel):
    qcir: str


@app.get("/health")
def health() -> dict:
    return {"status": "ok"}


@app.post("/solve", response_model=SolveResponse)
def solve_endpoint(req: SolveRequest) -> SolveResponse:
    try:
        game, table = parse_qcir(req.qcir)
    except QcirParseError as exc:
        raise HTTPException(status_code=422, detail=str(exc))
    cfg = EngineConfig(learn_interval=req.k, learning_enabled=req.learning,
                       accumulate=req.accumulate, time_limit=req.time_limit)
    result = solve(table, game, cfg)
    move = None
    if result.winning_move is not None and game.prefix.blocks:
        move = {table.name_of(v): result.winning_move.get(v, 0)
                for v in game.prefix.blocks[0].variables}
    s = result.stats
    return SolveResponse(
        verdict=result.verdict,
        winning_move=move,
        stats=StatsModel(iterations=s.iterations, refinements=s.refinements,
                         learn_calls=s.learn_calls,
                         kept_strategies=s.kept_strategies),
    )


@app.post("/family", response_model=FamilyResponse)
def family_endpoint(req: FamilyRequest) -> FamilyResponse:
    if req.name not in FAMILY_NAMES:
        raise HTTPException(status_code=422, detail=f"unknown family '{req.name}'")
    return FamilyResponse(qcir=gen_family(req.name, req.n))
