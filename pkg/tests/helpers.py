"""Shared generators for the test suite: random expressions, games, trees."""

from __future__ import annotations

import itertools
import random
from typing import Dict, List, Tuple

from qbflearn.aig import AigTable, Ref, neg
from qbflearn.learner import DecisionTree, Leaf, Split
from qbflearn.prefix import Game, Quantifier, make_prefix

# Expression trees: ("var", name) | ("not", e) | ("and", a, b) | ("or", a, b)
Expr = tuple


def random_expr(rng: random.Random, names: List[str], size: int) -> Expr:
    if size <= 1:
        return ("var", rng.choice(names))
    op = rng.choice(("not", "and", "or"))
    if op == "not":
        return ("not", random_expr(rng, names, size - 1))
    left = rng.randint(1, size - 1)
    return (op, random_expr(rng, names, left), random_expr(rng, names, size - left))


def expr_eval(e: Expr, tau: Dict[str, int]) -> int:
    """Direct recursive evaluation, independent of the AIG engine."""
    if e[0] == "var":
        return tau[e[1]]
    if e[0] == "not":
        return 1 - expr_eval(e[1], tau)
    a, b = expr_eval(e[1], tau), expr_eval(e[2], tau)
    return (a & b) if e[0] == "and" else (a | b)


def expr_eval_mask(e: Expr, masks: Dict[str, int], all_ones: int) -> int:
    """Truth table of the expression as a bitmask over all assignments."""
    if e[0] == "var":
        return masks[e[1]]
    if e[0] == "not":
        return all_ones ^ expr_eval_mask(e[1], masks, all_ones)
    a = expr_eval_mask(e[1], masks, all_ones)
    b = expr_eval_mask(e[2], masks, all_ones)
    return (a & b) if e[0] == "and" else (a | b)


def expr_to_aig(table: AigTable, e: Expr) -> Ref:
    if e[0] == "var":
        return table.mk_var(e[1])
    if e[0] == "not":
        return neg(expr_to_aig(table, e[1]))
    a = expr_to_aig(table, e[1])
    b = expr_to_aig(table, e[2])
    return table.mk_and(a, b) if e[0] == "and" else table.mk_or(a, b)


def aig_truth_mask(table: AigTable, root: Ref, var_masks: Dict[int, int],
                   all_ones: int) -> int:
    """Truth table of an AIG node as a bitmask (test-side evaluator)."""
    val = {0: all_ones}
    for idx in table._postorder(root):
        node = table.node(idx)
        if node[0] == 1:
            val[idx] = var_masks[idx]
        elif node[0] == 2:
            a, b = node[1], node[2]
            va = val[a >> 1] ^ (all_ones if a & 1 else 0)
            vb = val[b >> 1] ^ (all_ones if b & 1 else 0)
            val[idx] = va & vb
    return val[root >> 1] ^ (all_ones if root & 1 else 0)


def var_masks_for(var_ids: List[int]) -> Tuple[Dict[int, int], int]:
    n = len(var_ids)
    all_ones = (1 << (1 << n)) - 1
    masks = {}
    for i, v in enumerate(var_ids):
        m = 0
        for a in range(1 << n):
            if (a >> i) & 1:
                m |= 1 << a
        masks[v] = m
    return masks, all_ones


def random_game(rng: random.Random, table: AigTable, max_blocks: int = 3,
                max_vars: int = 10, max_gates: int = 40) -> Game:
    nblocks = rng.randint(1, max_blocks)
    nvars = rng.randint(nblocks, max_vars)
    vars_ = [table.mk_var(f"r{rng.randrange(10 ** 12)}") >> 1 for _ in range(nvars)]
    cuts = sorted(rng.sample(range(1, nvars), nblocks - 1)) if nblocks > 1 else []
    first = rng.choice((Quantifier.EXISTS, Quantifier.FORALL))
    blocks = []
    prev = 0
    for i, c in enumerate(cuts + [nvars]):
        q = first if i % 2 == 0 else first.opponent
        blocks.append((q, vars_[prev:c]))
        prev = c
    pool = [table.var_ref(v) for v in vars_]
    for _ in range(rng.randint(1, max_gates)):
        a = rng.choice(pool)
        b = rng.choice(pool)
        if rng.random() < 0.5:
            a ^= 1
        if rng.random() < 0.5:
            b ^= 1
        pool.append(table.mk_and(a, b))
    matrix = pool[-1]
    if rng.random() < 0.5:
        matrix ^= 1
    return Game(make_prefix(blocks), matrix)


def random_tree(rng: random.Random, features: List[int]) -> DecisionTree:
    if not features or rng.random() < 0.3:
        return Leaf(rng.randint(0, 1))
    f = rng.choice(features)
    rest = [g for g in features if g != f]
    return Split(f, random_tree(rng, rest), random_tree(rng, rest))


def random_training_set(rng: random.Random, features: List[int],
                        max_examples: int) -> List[Tuple[Dict[int, int], int]]:
    """Consistent labeled examples: one label per distinct feature vector."""
    label_of: Dict[Tuple[int, ...], int] = {}
    out = []
    for _ in range(rng.randint(1, max_examples)):
        vec = tuple(rng.randint(0, 1) for _ in features)
        label = label_of.setdefault(vec, rng.randint(0, 1))
        out.append((dict(zip(features, vec)), label))
    return out


def assignments_over(var_ids: List[int]):
    for bits in itertools.product((0, 1), repeat=len(var_ids)):
        yield dict(zip(var_ids, bits))
