"""Canonical And-Inverter-Graph formula engine.

Formulas are DAGs of binary AND gates with complemented edges.  A node
reference is a plain ``int``: ``node_index * 2 + complement_bit``.  Node 0 is
the constant true, so ``TRUE == 0`` and ``FALSE == 1``.  The table is
hash-consed: building the same structure twice returns the same reference,
and commuted AND operands dedup through a canonical child order.
"""

from __future__ import annotations

from typing import Dict, Iterable, Iterator, List, Mapping, Set, Tuple

Ref = int

TRUE: Ref = 0
FALSE: Ref = 1

_CONST = 0
_VAR = 1
_AND = 2


class UnassignedVariable(Exception):
    """A variable reachable from the evaluated root has no value."""

    def __init__(self, var_id: int):
        super().__init__(f"variable {var_id} is unassigned")
        self.var_id = var_id


def neg(r: Ref) -> Ref:
    """Complement a reference (flip the sign bit)."""
    return r ^ 1


def is_negated(r: Ref) -> bool:
    return bool(r & 1)


def index_of(r: Ref) -> int:
    return r >> 1


class AigTable:
    """Append-only node table with structural hashing.

    Nodes are tuples: ``(_CONST,)``, ``(_VAR, var_id)`` or ``(_AND, a, b)``
    with ``a <= b`` references into this table.  Variable ids are the node
    indices of their VAR nodes, so they are always positive integers.
    """

    def __init__(self) -> None:
        self._nodes: List[tuple] = [(_CONST,)]
        self._unique: Dict[tuple, int] = {}
        self._var_by_name: Dict[str, int] = {}
        self._name_by_var: Dict[int, str] = {}
        self._fresh_counter = 0

    def __len__(self) -> int:
        return len(self._nodes)

    # -- construction ------------------------------------------------------

    def mk_var(self, name: str) -> Ref:
        """Return the unique non-complemented reference for variable ``name``."""
        idx = self._var_by_name.get(name)
        if idx is None:
            idx = len(self._nodes)
            self._nodes.append((_VAR, idx))
            self._var_by_name[name] = idx
            self._name_by_var[idx] = name
        return idx << 1

    def fresh_var(self, base: str) -> Ref:
        """Create a variable guaranteed not to exist yet (used for duplicates)."""
        while True:
            self._fresh_counter += 1
            name = f"{base}~{self._fresh_counter}"
            if name not in self._var_by_name:
                return self.mk_var(name)

    def var_ref(self, var_id: int) -> Ref:
        return var_id << 1

    def name_of(self, var_id: int) -> str:
        return self._name_by_var[var_id]

    def is_var(self, var_id: int) -> bool:
        return var_id in self._name_by_var

    def mk_and(self, a: Ref, b: Ref) -> Ref:
        """Conjunction with level-1 simplification and hash-consing."""
        if a == b:
            return a
        if a == neg(b):
            return FALSE
        if a == TRUE:
            return b
        if b == TRUE:
            return a
        if a == FALSE or b == FALSE:
            return FALSE
        if a > b:
            a, b = b, a
        key = (_AND, a, b)
        idx = self._unique.get(key)
        if idx is None:
            idx = len(self._nodes)
            self._nodes.append(key)
            self._unique[key] = idx
        return idx << 1

    def mk_or(self, a: Ref, b: Ref) -> Ref:
        return neg(self.mk_and(neg(a), neg(b)))

    def mk_implies(self, a: Ref, b: Ref) -> Ref:
        return self.mk_or(neg(a), b)

    def mk_ite(self, c: Ref, t: Ref, e: Ref) -> Ref:
        return self.mk_or(self.mk_and(c, t), self.mk_and(neg(c), e))

    def mk_xor(self, a: Ref, b: Ref) -> Ref:
        return self.mk_or(self.mk_and(a, neg(b)), self.mk_and(neg(a), b))

    def mk_equiv(self, a: Ref, b: Ref) -> Ref:
        return neg(self.mk_xor(a, b))

    def mk_and_many(self, refs: Iterable[Ref]) -> Ref:
        out = TRUE
        for r in refs:
            out = self.mk_and(out, r)
        return out

    def mk_or_many(self, refs: Iterable[Ref]) -> Ref:
        out = FALSE
        for r in refs:
            out = self.mk_or(out, r)
        return out

    # -- traversal ---------------------------------------------------------

    def _postorder(self, root: Ref) -> Iterator[int]:
        """Yield node indices reachable from ``root``, children first."""
        seen: Set[int] = set()
        stack: List[Tuple[int, bool]] = [(root >> 1, False)]
        while stack:
            idx, expanded = stack.pop()
            if expanded:
                yield idx
                continue
            if idx in seen:
                continue
            seen.add(idx)
            stack.append((idx, True))
            node = self._nodes[idx]
            if node[0] == _AND:
                stack.append((node[1] >> 1, False))
                stack.append((node[2] >> 1, False))

    def collect_vars(self, root: Ref) -> Set[int]:
        """Variable ids reachable from ``root``."""
        out: Set[int] = set()
        for idx in self._postorder(root):
            if self._nodes[idx][0] == _VAR:
                out.add(idx)
        return out

    def evaluate(self, root: Ref, tau: Mapping[int, int]) -> int:
        """Boolean value of ``root`` under the (total on vars) assignment."""
        val: Dict[int, int] = {0: 1}
        for idx in self._postorder(root):
            node = self._nodes[idx]
            if node[0] == _VAR:
                if idx not in tau:
                    raise UnassignedVariable(idx)
                val[idx] = 1 if tau[idx] else 0
            elif node[0] == _AND:
                a, b = node[1], node[2]
                va = val[a >> 1] ^ (a & 1)
                vb = val[b >> 1] ^ (b & 1)
                val[idx] = va & vb
        return val[root >> 1] ^ (root & 1)

    def substitute(self, root: Ref, sigma: Mapping[int, Ref]) -> Ref:
        """Simultaneously replace variables by formulas.

        Images are not re-substituted; the memo is local to this call since
        it is only valid for this particular sigma.
        """
        if not sigma:
            return root
        memo: Dict[int, Ref] = {0: TRUE}
        for idx in self._postorder(root):
            node = self._nodes[idx]
            if node[0] == _VAR:
                memo[idx] = sigma.get(idx, idx << 1)
            elif node[0] == _AND:
                a, b = node[1], node[2]
                na = memo[a >> 1] ^ (a & 1)
                nb = memo[b >> 1] ^ (b & 1)
                if na == a and nb == b:
                    memo[idx] = idx << 1
                else:
                    memo[idx] = self.mk_and(na, nb)
        return memo[root >> 1] ^ (root & 1)

    def node(self, idx: int) -> tuple:
        return self._nodes[idx]

    def dump(self, root: Ref) -> str:
        """Human-readable indented rendering of the DAG (debug aid)."""
        lines: List[str] = []

        def rec(r: Ref, depth: int) -> None:
            pre = "  " * depth + ("-" if r & 1 else "")
            node = self._nodes[r >> 1]
            if node[0] == _CONST:
                lines.append(pre + "true")
            elif node[0] == _VAR:
                lines.append(pre + self._name_by_var[r >> 1])
            else:
                lines.append(pre + "and")
                rec(node[1], depth + 1)
                rec(node[2], depth + 1)

        rec(root, 0)
        return "\n".join(lines)
