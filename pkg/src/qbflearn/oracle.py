"""Brute-force reference semantics for closed prenex QBF (test oracle)."""

from __future__ import annotations

import itertools
from typing import Dict, List, Optional

from .aig import AigTable
from .prefix import (Assignment, Game, MultiGame, Quantifier, Subgame,
                     substitute_into_game)


class TooLarge(Exception):
    """Instance exceeds the brute-force variable cap."""


DEFAULT_CAP = 24


def brute_force_eval(table: AigTable, game: Game, cap: int = DEFAULT_CAP,
                     _extra: Optional[Assignment] = None) -> bool:
    """Expansion semantics: conjunction over forall blocks, disjunction over
    exists blocks, matrix evaluated at the leaves."""
    total = sum(len(b.variables) for b in game.prefix.blocks)
    if total > cap:
        raise TooLarge(f"{total} quantified variables exceed the cap of {cap}")
    tau: Dict[int, int] = dict(_extra or {})

    def rec(block_idx: int) -> bool:
        if block_idx == len(game.prefix.blocks):
            return bool(table.evaluate(game.matrix, tau))
        blk = game.prefix.blocks[block_idx]
        want_all = blk.quantifier is Quantifier.FORALL
        for bits in itertools.product((0, 1), repeat=len(blk.variables)):
            for v, b in zip(blk.variables, bits):
                tau[v] = b
            sub = rec(block_idx + 1)
            if want_all and not sub:
                return False
            if not want_all and sub:
                return True
        for v in blk.variables:
            tau.pop(v, None)
        return want_all

    return rec(0)


def _tau_wins_subgame(table: AigTable, q: Quantifier, sg: Subgame,
                      tau: Assignment, cap: int) -> bool:
    if isinstance(sg, Game):
        inst = substitute_into_game(table, sg, tau)
        value = brute_force_eval(table, inst, cap=cap, _extra=tau)
        return value if q is Quantifier.EXISTS else not value
    value = bool(table.evaluate(sg, tau))
    return value if q is Quantifier.EXISTS else not value


def brute_force_winning_move(table: AigTable, mg: MultiGame,
                             cap: int = DEFAULT_CAP) -> Optional[Assignment]:
    """First winning top-block assignment in lexicographic order (0 before 1)."""
    bound = len(mg.top_vars) + max(
        (sum(len(b.variables) for b in sg.prefix.blocks)
         for sg in mg.subgames if isinstance(sg, Game)),
        default=0,
    )
    if bound > cap:
        raise TooLarge(f"{bound} variables exceed the cap of {cap}")
    for bits in itertools.product((0, 1), repeat=len(mg.top_vars)):
        tau = dict(zip(mg.top_vars, bits))
        if all(_tau_wins_subgame(table, mg.quantifier, sg, tau, cap)
               for sg in mg.subgames):
            return tau
    return None
