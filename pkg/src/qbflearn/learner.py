"""Strategy learning from (move, counter-move) sample batches.

Per opponent variable: project the batch to a labeled training set, grow an
ID3 decision tree, read off positive/negative path cubes, minimize them by
subsumption and self-subsuming resolution, and take the smaller side as the
strategy formula.  A store keeps the last learned strategy per variable so
it can be reused across batches while it still fits the data.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional, Sequence, Set, Tuple, Union

from .aig import FALSE, TRUE, AigTable, Ref, neg
from .prefix import Assignment

# A cube is a set of literals over feature variables: +v for v, -v for not-v.
Cube = FrozenSet[int]


@dataclass(frozen=True)
class Sample:
    tau: Assignment  # move, over the X block
    mu: Assignment   # counter-move, over the adjacent Y block


@dataclass
class SampleBatch:
    x_vars: List[int]
    y_vars: List[int]
    samples: List[Sample] = field(default_factory=list)

    def append(self, tau: Assignment, mu: Assignment) -> None:
        self.samples.append(Sample(dict(tau), dict(mu)))

    def clear(self) -> None:
        self.samples.clear()

    def __len__(self) -> int:
        return len(self.samples)


@dataclass(frozen=True)
class Leaf:
    value: int


@dataclass(frozen=True)
class Split:
    feature: int
    on_false: "DecisionTree"
    on_true: "DecisionTree"


DecisionTree = Union[Leaf, Split]


@dataclass
class StrategyStore:
    """Last learned strategy formula per opponent variable."""

    formulas: Dict[int, Ref] = field(default_factory=dict)


def project_training_set(batch: SampleBatch, y: int) -> List[Tuple[Assignment, int]]:
    """One labeled example per sample: features tau, label mu(y)."""
    if y not in batch.y_vars:
        raise ValueError(f"variable {y} is not in the batch's Y block")
    return [(s.tau, s.mu[y]) for s in batch.samples]


def _entropy(pos: int, n: int) -> float:
    if pos == 0 or pos == n:
        return 0.0
    p = pos / n
    return -(p * math.log2(p) + (1 - p) * math.log2(1 - p))


def id3(train: Sequence[Tuple[Assignment, int]], features: Sequence[int]) -> DecisionTree:
    """Grow a decision tree fitting every consistent training example.

    Splits on maximum information gain (ties broken by lowest variable id).
    Mixed labels with no distinguishing feature left fall to the majority
    label, ties to 0.
    """
    if not train:
        return Leaf(0)
    pos = sum(label for _, label in train)
    n = len(train)
    if pos == 0:
        return Leaf(0)
    if pos == n:
        return Leaf(1)

    # Only features that actually vary on this training set can split it.
    best_feat = None
    best_gain = -1.0
    base = _entropy(pos, n)
    for f in sorted(features):
        n1 = sum(ex[f] for ex, _ in train)
        if n1 == 0 or n1 == n:
            continue
        p1 = sum(label for ex, label in train if ex[f])
        p0 = pos - p1
        n0 = n - n1
        gain = base - (n0 / n) * _entropy(p0, n0) - (n1 / n) * _entropy(p1, n1)
        if gain > best_gain + 1e-12:
            best_gain = gain
            best_feat = f
    if best_feat is None:
        # identical feature vectors with conflicting labels: majority, tie -> 0
        return Leaf(1 if pos * 2 > n else 0)

    rest = [f for f in features if f != best_feat]
    lo = [(ex, label) for ex, label in train if not ex[best_feat]]
    hi = [(ex, label) for ex, label in train if ex[best_feat]]
    return Split(best_feat, id3(lo, rest), id3(hi, rest))


def tree_eval(t: DecisionTree, ex: Assignment) -> int:
    while isinstance(t, Split):
        t = t.on_true if ex[t.feature] else t.on_false
    return t.value


def tree_to_cubes(t: DecisionTree) -> Tuple[Set[Cube], Set[Cube]]:
    """Path cubes of the 1-leaves and of the 0-leaves."""
    is_p: Set[Cube] = set()
    is_n: Set[Cube] = set()
    stack: List[Tuple[DecisionTree, FrozenSet[int]]] = [(t, frozenset())]
    while stack:
        node, cube = stack.pop()
        if isinstance(node, Leaf):
            (is_p if node.value else is_n).add(cube)
        else:
            stack.append((node.on_false, cube | {-node.feature}))
            stack.append((node.on_true, cube | {node.feature}))
    return is_p, is_n


def subsume_fixpoint(cubes: Set[Cube]) -> Set[Cube]:
    """Minimize a disjunction of cubes by (self-)subsumption to a fixed point."""
    current: Set[Cube] = set(cubes)
    changed = True
    while changed:
        changed = False
        # subsumption: drop any cube that is a superset of another
        for c1 in sorted(current, key=lambda c: (len(c), sorted(c))):
            for c2 in list(current):
                if c1 is not c2 and c2 > c1:
                    current.discard(c2)
                    changed = True
        # self-subsuming resolution: c1 = A + {l}, c2 >= A + {-l}  =>  drop -l from c2
        done = False
        for c1 in sorted(current, key=lambda c: (len(c), sorted(c))):
            for l in sorted(c1):
                a = c1 - {l}
                for c2 in sorted(current, key=lambda c: (len(c), sorted(c))):
                    if c2 is c1:
                        continue
                    if -l in c2 and a <= c2 - {-l}:
                        current.discard(c2)
                        current.add(c2 - {-l})
                        changed = True
                        done = True
                        break
                if done:
                    break
            if done:
                break
    return current


def cube_to_ref(table: AigTable, cube: Cube) -> Ref:
    out = TRUE
    for l in sorted(cube, key=abs):
        r = table.var_ref(abs(l))
        out = table.mk_and(out, r if l > 0 else neg(r))
    return out


def cubes_to_formula(table: AigTable, is_p: Set[Cube], is_n: Set[Cube]) -> Ref:
    """Smaller side wins: the positive DNF only on strict inequality."""
    def disjunction(cubes: Set[Cube]) -> Ref:
        out = FALSE
        for c in sorted(cubes, key=lambda c: (len(c), sorted(c, key=abs))):
            out = table.mk_or(out, cube_to_ref(table, c))
        return out

    if len(is_p) < len(is_n):
        return disjunction(is_p)
    return neg(disjunction(is_n))


def learn_one(table: AigTable, batch: SampleBatch, y: int) -> Ref:
    train = project_training_set(batch, y)
    tree = id3(train, batch.x_vars)
    is_p, is_n = tree_to_cubes(tree)
    return cubes_to_formula(table, subsume_fixpoint(is_p), subsume_fixpoint(is_n))


def _fits(table: AigTable, formula: Ref, batch: SampleBatch, y: int) -> bool:
    return all(table.evaluate(formula, s.tau) == s.mu[y] for s in batch.samples)


def learn_strategies(table: AigTable, batch: SampleBatch, store: StrategyStore,
                     accumulate: bool) -> Tuple[Dict[int, Ref], int]:
    """Learn (or keep) a strategy per Y variable of the batch.

    Returns the strategy map for the batch's Y block and the number of
    stored strategies that were kept because they still fit the data.
    """
    if not batch.samples:
        raise ValueError("cannot learn from an empty batch")
    out: Dict[int, Ref] = {}
    kept = 0
    for y in batch.y_vars:
        if accumulate and y in store.formulas and _fits(table, store.formulas[y], batch, y):
            out[y] = store.formulas[y]
            kept += 1
            continue
        psi = learn_one(table, batch, y)
        store.formulas[y] = psi
        out[y] = psi
    return out, kept
