"""Prenex QBF data model: blocks, games, multi-games, assignments."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Sequence, Set, Tuple, Union

from .aig import AigTable, Ref

Assignment = Dict[int, int]


class Quantifier(enum.Enum):
    EXISTS = "exists"
    FORALL = "forall"

    @property
    def opponent(self) -> "Quantifier":
        return Quantifier.FORALL if self is Quantifier.EXISTS else Quantifier.EXISTS


class PartialBlock(Exception):
    """An assignment applied to a game does not cover its whole first block."""


@dataclass(frozen=True)
class Block:
    quantifier: Quantifier
    variables: Tuple[int, ...]  # prefix order, duplicates impossible


@dataclass(frozen=True)
class Prefix:
    """Alternating quantifier blocks; immutable after construction."""

    blocks: Tuple[Block, ...]

    def __post_init__(self) -> None:
        seen: Set[int] = set()
        for i, blk in enumerate(self.blocks):
            if not blk.variables:
                raise ValueError("empty quantifier block")
            if i > 0 and blk.quantifier is self.blocks[i - 1].quantifier:
                raise ValueError("adjacent blocks must alternate quantifiers")
            for v in blk.variables:
                if v in seen:
                    raise ValueError(f"variable {v} bound twice")
                seen.add(v)

    def variables(self) -> Set[int]:
        return {v for blk in self.blocks for v in blk.variables}

    def level(self, var_id: int) -> int:
        """1-based block index of ``var_id``."""
        for i, blk in enumerate(self.blocks, start=1):
            if var_id in blk.variables:
                return i
        raise KeyError(var_id)

    def domain(self, var_id: int) -> Set[int]:
        """Variables of all blocks strictly before the block of ``var_id``."""
        lev = self.level(var_id)
        return {v for blk in self.blocks[: lev - 1] for v in blk.variables}


def make_prefix(blocks: Sequence[Tuple[Quantifier, Sequence[int]]]) -> Prefix:
    """Build a prefix, merging adjacent same-quantifier blocks."""
    merged: List[Tuple[Quantifier, List[int]]] = []
    for q, vs in blocks:
        if merged and merged[-1][0] is q:
            merged[-1][1].extend(vs)
        else:
            merged.append((q, list(vs)))
    return Prefix(tuple(Block(q, tuple(vs)) for q, vs in merged))


@dataclass(frozen=True)
class Game:
    """A prefix plus a propositional matrix over the prefix variables."""

    prefix: Prefix
    matrix: Ref

    def check_closed(self, table: AigTable) -> None:
        free = table.collect_vars(self.matrix) - self.prefix.variables()
        if free:
            names = ", ".join(sorted(table.name_of(v) for v in free))
            raise ValueError(f"free variables in matrix: {names}")


Subgame = Union[Ref, Game]


@dataclass
class MultiGame:
    """A top quantifier block plus sub-games the mover must win at once.

    Every sub-game is propositional or begins with the opponent quantifier.
    """

    quantifier: Quantifier
    top_vars: List[int]
    subgames: List[Subgame] = field(default_factory=list)

    def __post_init__(self) -> None:
        for sg in self.subgames:
            self._check_subgame(sg)

    def _check_subgame(self, sg: Subgame) -> None:
        if isinstance(sg, Game):
            if sg.prefix.blocks[0].quantifier is self.quantifier:
                raise ValueError("sub-game must begin with the opponent quantifier")

    def append(self, sg: Subgame) -> None:
        self._check_subgame(sg)
        self.subgames.append(sg)


def restrict(tau: Mapping[int, int], keep: Set[int]) -> Assignment:
    """Assignment equal to ``tau`` on ``keep``, undefined elsewhere."""
    return {v: b for v, b in tau.items() if v in keep}


def apply_to_game(table: AigTable, g: Game, tau: Mapping[int, int]) -> Subgame:
    """Assign the whole first block of ``g``; drop the block from the prefix."""
    first = g.prefix.blocks[0]
    if set(tau.keys()) != set(first.variables):
        raise PartialBlock(
            f"assignment domain does not match the first block of the game"
        )
    from .aig import TRUE, FALSE  # local to avoid import clutter at top

    sigma = {v: (TRUE if b else FALSE) for v, b in tau.items()}
    matrix = table.substitute(g.matrix, sigma)
    rest = g.prefix.blocks[1:]
    if not rest:
        return matrix
    return Game(Prefix(rest), matrix)


def substitute_into_game(table: AigTable, g: Game, tau: Mapping[int, int]) -> Game:
    """Substitute constants for variables *outside* the prefix of ``g``."""
    from .aig import TRUE, FALSE

    sigma = {v: (TRUE if b else FALSE) for v, b in tau.items()}
    return Game(g.prefix, table.substitute(g.matrix, sigma))


def game_to_multigame(g: Game) -> MultiGame:
    """View a game as the multi-game of its first block over the remainder."""
    first = g.prefix.blocks[0]
    rest = g.prefix.blocks[1:]
    sub: Subgame = g.matrix if not rest else Game(Prefix(rest), g.matrix)
    return MultiGame(first.quantifier, list(first.variables), [sub])
