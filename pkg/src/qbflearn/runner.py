"""Shared plumbing between the CLI, benchmark harness, and HTTP service."""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Optional

from .engine import EngineConfig, SolveResult, Verdict, solve
from .qcir import QcirParseError, parse_qcir


@dataclass
class RunRecord:
    instance: str
    config: str
    verdict: str            # TRUE / FALSE / UNKNOWN / ERROR
    time_s: float
    iterations: int = 0
    refinements: int = 0
    learn_calls: int = 0
    kept_strategies: int = 0

    def csv_row(self) -> str:
        return (f"{self.instance},{self.config},{self.verdict},{self.time_s:.3f},"
                f"{self.iterations},{self.refinements},{self.learn_calls},"
                f"{self.kept_strategies}")


CSV_HEADER = ("instance,config,verdict,time_s,iterations,refinements,"
              "learn_calls,kept_strategies")


def parse_config(spec: str) -> EngineConfig:
    """Parse a configuration spec like ``no-learn``, ``k=16`` or ``k=64,forgetful``."""
    cfg = EngineConfig()
    for part in spec.split(","):
        part = part.strip()
        if not part or part == "default":
            continue
        if part == "no-learn":
            cfg.learning_enabled = False
        elif part == "forgetful":
            cfg.accumulate = False
        elif part.startswith("k="):
            cfg.learn_interval = int(part[2:])
        else:
            raise ValueError(f"unknown config flag '{part}'")
    if not cfg.learning_enabled and not cfg.accumulate:
        raise ValueError("'forgetful' requires learning to stay enabled")
    if cfg.learn_interval < 1:
        raise ValueError("k must be >= 1")
    return cfg


def solve_text(text: str, cfg: EngineConfig) -> SolveResult:
    game, table = parse_qcir(text)
    return solve(table, game, cfg)


def run_file(path: str, config_spec: str,
             time_limit: Optional[float] = None) -> RunRecord:
    """Solve one QCIR file under one configuration; never raises."""
    start = time.monotonic()
    try:
        cfg = parse_config(config_spec)
        cfg.time_limit = time_limit
        with open(path, "r") as fh:
            text = fh.read()
        result = solve_text(text, cfg)
        elapsed = time.monotonic() - start
        s = result.stats
        return RunRecord(path, config_spec, result.verdict, elapsed,
                         s.iterations, s.refinements, s.learn_calls,
                         s.kept_strategies)
    except (OSError, QcirParseError, ValueError, MemoryError):
        return RunRecord(path, config_spec, "ERROR", time.monotonic() - start)
