"""Expansion-based QBF solver with decision-tree strategy learning."""

from .aig import FALSE, TRUE, AigTable, UnassignedVariable, neg
from .engine import EngineConfig, SolveResult, SolveStats, Verdict, solve, wins_one
from .families import gen_family
from .oracle import TooLarge, brute_force_eval, brute_force_winning_move
from .prefix import (Assignment, Game, MultiGame, Prefix, Quantifier,
                     apply_to_game, game_to_multigame, make_prefix, restrict)
from .qcir import parse_qcir, print_qcir
from .sat import CnfInstance, ResourceLimit, encode, sat_solve

__all__ = [
    "AigTable", "TRUE", "FALSE", "neg", "UnassignedVariable",
    "EngineConfig", "SolveResult", "SolveStats", "Verdict", "solve", "wins_one",
    "gen_family",
    "TooLarge", "brute_force_eval", "brute_force_winning_move",
    "Assignment", "Game", "MultiGame", "Prefix", "Quantifier",
    "apply_to_game", "game_to_multigame", "make_prefix", "restrict",
    "parse_qcir", "print_qcir",
    "CnfInstance", "ResourceLimit", "encode", "sat_solve",
]
