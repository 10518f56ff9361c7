"""Recursive counterexample-guided expansion solver with strategy learning.

A closed prenex game is viewed as a multi-game for the top block.  The loop
draws candidate moves from a growing abstraction, checks them against every
sub-game, and refines the abstraction with each counter-move.  Periodically
the recorded (move, counter-move) samples are generalized into per-variable
opponent strategies which are substituted into the refuting sub-game instead
of plain constants.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Union

from .aig import FALSE, TRUE, AigTable, Ref
from .learner import SampleBatch, StrategyStore, learn_strategies
from .prefix import (Assignment, Game, MultiGame, Prefix, Quantifier, Subgame,
                     game_to_multigame, restrict, substitute_into_game)
from .sat import CnfInstance, ResourceLimit, encode, sat_solve


@dataclass
class EngineConfig:
    learn_interval: int = 64
    learning_enabled: bool = True
    accumulate: bool = True
    time_limit: Optional[float] = None      # seconds
    memory_limit: Optional[int] = None      # bytes, enforced by the harness
    conflict_limit: Optional[int] = None    # per SAT call

    def __post_init__(self) -> None:
        if self.learn_interval < 1:
            raise ValueError("learn interval must be >= 1")
        if not self.learning_enabled and not self.accumulate:
            # forgetful is a learning mode; without learning the flag is moot
            self.accumulate = True


@dataclass
class SolveStats:
    iterations: int = 0
    refinements: int = 0
    learn_calls: int = 0
    kept_strategies: int = 0


class Verdict:
    TRUE = "TRUE"
    FALSE = "FALSE"
    UNKNOWN = "UNKNOWN"


@dataclass
class SolveResult:
    verdict: str
    winning_move: Optional[Assignment]  # over the top block, when the top player wins
    stats: SolveStats


class _Run:
    """Mutable per-solve state shared across the recursion."""

    def __init__(self, table: AigTable, cfg: EngineConfig):
        self.table = table
        self.cfg = cfg
        self.stats = SolveStats()
        self.deadline: Optional[float] = None
        if cfg.time_limit is not None:
            self.deadline = time.monotonic() + cfg.time_limit
        # test instrumentation: called with (multigame, candidate) per iteration
        self.candidate_hook = None

    def check_budget(self) -> None:
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise ResourceLimit("solve time budget exceeded")


def wins_one(table: AigTable, q: Quantifier, x_vars: Sequence[int],
             phis: Sequence[Ref], run: Optional[_Run] = None) -> Optional[Assignment]:
    """Winning move for a multi-game whose sub-games are all propositional.

    The empty sub-game list is the empty conjunction, i.e. always winnable
    with the deterministic default assignment (all zeros).
    """
    if q is Quantifier.EXISTS:
        conjuncts = list(phis)
    else:
        conjuncts = [r ^ 1 for r in phis]  # the universal player falsifies
    inst = encode(table, conjuncts)
    deadline = run.deadline if run is not None else None
    climit = run.cfg.conflict_limit if run is not None else None
    return sat_solve(inst, x_vars, deadline=deadline, conflict_limit=climit)


def _magic(counter: int, cfg: EngineConfig) -> bool:
    """Learning fires on every K-th iteration of the owning call's loop."""
    return cfg.learning_enabled and counter > 0 and counter % cfg.learn_interval == 0


def refine(run: _Run, abstraction: MultiGame, phi_l: Subgame,
           strategies: Mapping[int, Ref]) -> None:
    """Append to the abstraction the sub-game instance under the strategies.

    For a sub-game with blocks beyond the opponent's, the player block is
    renamed to fresh duplicates which join the abstraction's top block.
    Constant strategies (plain counter-moves) arrive as TRUE/FALSE images.
    """
    table = run.table
    if isinstance(phi_l, Game):
        blocks = phi_l.prefix.blocks
        sigma: Dict[int, Ref] = dict(strategies)
        if len(blocks) >= 2:
            x1 = blocks[1].variables
            fresh = [table.fresh_var(table.name_of(v)) for v in x1]
            sigma.update({v: f for v, f in zip(x1, fresh)})
            abstraction.top_vars.extend(f >> 1 for f in fresh)
            matrix = table.substitute(phi_l.matrix, sigma)
            rest = blocks[2:]
            if rest:
                abstraction.append(Game(Prefix(rest), matrix))
            else:
                abstraction.append(matrix)
        else:
            abstraction.append(table.substitute(phi_l.matrix, sigma))
    else:
        # propositional sub-game over the top block: append it unchanged
        abstraction.append(table.substitute(phi_l, dict(strategies)))
    run.stats.refinements += 1


def _constants(table: AigTable, mu: Assignment) -> Dict[int, Ref]:
    return {v: (TRUE if b else FALSE) for v, b in mu.items()}


def _subgame_first_block(sg: Subgame) -> List[int]:
    if isinstance(sg, Game):
        return list(sg.prefix.blocks[0].variables)
    return []


def _solve_rec(run: _Run, mg: MultiGame) -> Optional[Assignment]:
    """Winning move for the top block of ``mg``, or None if there is none."""
    run.check_budget()
    table = run.table

    if all(not isinstance(sg, Game) for sg in mg.subgames):
        return wins_one(table, mg.quantifier, mg.top_vars, mg.subgames, run)

    x_set = set(mg.top_vars)
    batches = [SampleBatch(list(mg.top_vars), _subgame_first_block(sg))
               for sg in mg.subgames]
    store = StrategyStore()
    abstraction = MultiGame(mg.quantifier, list(mg.top_vars), [])
    counter = 0

    while True:
        run.check_budget()
        counter += 1
        run.stats.iterations += 1

        tau_full = _solve_rec(run, abstraction)
        if tau_full is None:
            return None  # loss: not even the abstraction is winnable
        tau = restrict(tau_full, x_set)
        # complete on X: duplicates only ever extend the block, never shrink it
        for v in mg.top_vars:
            tau.setdefault(v, 0)
        if run.candidate_hook is not None:
            run.candidate_hook(mg, dict(tau))

        counter_move: Optional[Assignment] = None
        culprit = -1
        for i, sg in enumerate(mg.subgames):
            mu = _check_subgame(run, mg.quantifier, sg, tau)
            if mu is not None:
                counter_move = mu
                culprit = i
                break
        if counter_move is None:
            return tau  # win: no sub-game refutes the candidate

        batches[culprit].append(tau, counter_move)

        if _magic(counter, run.cfg):
            strategies, kept = learn_strategies(
                table, batches[culprit], store, run.cfg.accumulate)
            run.stats.learn_calls += 1
            run.stats.kept_strategies += kept
            refine(run, abstraction, mg.subgames[culprit], strategies)
            batches[culprit].clear()
        else:
            refine(run, abstraction, mg.subgames[culprit],
                   _constants(table, counter_move))


def _check_subgame(run: _Run, q: Quantifier, sg: Subgame,
                   tau: Assignment) -> Optional[Assignment]:
    """Counter-move of the opponent in ``sg`` under the candidate, if any."""
    table = run.table
    if isinstance(sg, Game):
        inst = substitute_into_game(table, sg, tau)
        return _solve_rec(run, game_to_multigame(inst))
    # Propositional sub-game: the opponent has no variables left, so the
    # empty assignment refutes the candidate iff the value goes against ``q``.
    value = table.evaluate(sg, tau)
    wanted = 1 if q is Quantifier.EXISTS else 0
    return None if value == wanted else {}


def solve(table: AigTable, game: Game, cfg: Optional[EngineConfig] = None) -> SolveResult:
    """Decide a closed prenex game; report the verdict, move, and statistics."""
    cfg = cfg or EngineConfig()
    run = _Run(table, cfg)
    try:
        if not game.prefix.blocks:
            value = table.evaluate(game.matrix, {})
            return SolveResult(Verdict.TRUE if value else Verdict.FALSE, None, run.stats)
        mg = game_to_multigame(game)
        move = _solve_rec(run, mg)
    except ResourceLimit:
        return SolveResult(Verdict.UNKNOWN, None, run.stats)
    top_q = game.prefix.blocks[0].quantifier
    if move is not None:
        verdict = Verdict.TRUE if top_q is Quantifier.EXISTS else Verdict.FALSE
        return SolveResult(verdict, move, run.stats)
    verdict = Verdict.FALSE if top_q is Quantifier.EXISTS else Verdict.TRUE
    return SolveResult(verdict, None, run.stats)
