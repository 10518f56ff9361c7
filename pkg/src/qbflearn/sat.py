"""Tseitin CNF encoding of AIG conjunctions and a deterministic CDCL oracle.

Each distinct sub-AIG maps to one encoding variable; every AND gate
contributes the three standard clauses.  The backend solver is a small
conflict-driven clause-learning solver with two watched literals per clause
and a decayed activity heuristic.  All tie-breaks are fixed (lowest variable
first, decide-to-false polarity), so identical instances always yield
identical models; projected variables unconstrained by the instance default
to 0.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence

from .aig import FALSE, TRUE, AigTable, Ref
from .prefix import Assignment


class ResourceLimit(Exception):
    """Configured time or conflict budget exceeded."""


@dataclass
class CnfInstance:
    """CNF over positive integer variables plus the AIG-to-CNF maps."""

    clauses: List[List[int]] = field(default_factory=list)
    num_vars: int = 0
    node_to_cnf: Dict[int, int] = field(default_factory=dict)  # AIG node idx -> CNF var
    trivially_false: bool = False

    def to_dimacs(self) -> str:
        lines = [f"p cnf {self.num_vars} {len(self.clauses)}"]
        for cl in self.clauses:
            lines.append(" ".join(map(str, cl)) + " 0")
        return "\n".join(lines) + "\n"


def encode(table: AigTable, conjuncts: Sequence[Ref]) -> CnfInstance:
    """Encode the conjunction of the given roots, sharing sub-AIGs."""
    inst = CnfInstance()

    def cnf_var(idx: int) -> int:
        v = inst.node_to_cnf.get(idx)
        if v is None:
            inst.num_vars += 1
            v = inst.num_vars
            inst.node_to_cnf[idx] = v
        return v

    def cnf_lit(r: Ref) -> int:
        v = cnf_var(r >> 1)
        return -v if r & 1 else v

    encoded: set = set()
    for root in conjuncts:
        if root == TRUE:
            continue
        if root == FALSE:
            inst.trivially_false = True
            inst.clauses.append([])
            continue
        for idx in table._postorder(root):
            if idx in encoded:
                continue
            encoded.add(idx)
            node = table.node(idx)
            if node[0] == 2:  # AND gate: g <-> a & b
                g = cnf_var(idx)
                a = cnf_lit(node[1])
                b = cnf_lit(node[2])
                inst.clauses.append([-g, a])
                inst.clauses.append([-g, b])
                inst.clauses.append([g, -a, -b])
        inst.clauses.append([cnf_lit(root)])
    return inst


class _Cdcl:
    """Minimal deterministic CDCL with two watched literals and 1-UIP learning."""

    UNASSIGNED = -1

    def __init__(self, num_vars: int, clauses: List[List[int]]):
        self.n = num_vars
        self.clauses: List[List[int]] = []
        self.watches: Dict[int, List[int]] = {}
        self.value: List[int] = [self.UNASSIGNED] * (num_vars + 1)
        self.level: List[int] = [0] * (num_vars + 1)
        self.reason: List[Optional[int]] = [None] * (num_vars + 1)
        self.trail: List[int] = []
        self.trail_lim: List[int] = []
        self.qhead = 0
        self.activity: List[float] = [0.0] * (num_vars + 1)
        self.act_inc = 1.0
        self.units: List[int] = []
        self.ok = True
        for cl in clauses:
            self._add_clause(cl)

    def _add_clause(self, lits: List[int]) -> None:
        if not lits:
            self.ok = False
            return
        if len(lits) == 1:
            self.units.append(lits[0])
            return
        idx = len(self.clauses)
        self.clauses.append(list(lits))
        for lit in lits[:2]:
            self.watches.setdefault(lit, []).append(idx)

    def _lit_value(self, lit: int) -> int:
        v = self.value[abs(lit)]
        if v == self.UNASSIGNED:
            return self.UNASSIGNED
        return v if lit > 0 else 1 - v

    def _enqueue(self, lit: int, reason: Optional[int]) -> bool:
        var = abs(lit)
        val = 1 if lit > 0 else 0
        if self.value[var] != self.UNASSIGNED:
            return self.value[var] == val
        self.value[var] = val
        self.level[var] = len(self.trail_lim)
        self.reason[var] = reason
        self.trail.append(lit)
        return True

    def _propagate(self) -> Optional[int]:
        """Run unit propagation; return a conflicting clause index or None."""
        while self.qhead < len(self.trail):
            lit = self.trail[self.qhead]
            self.qhead += 1
            falsified = -lit
            watch_list = self.watches.get(falsified, [])
            i = 0
            while i < len(watch_list):
                ci = watch_list[i]
                cl = self.clauses[ci]
                if cl[0] == falsified:
                    cl[0], cl[1] = cl[1], cl[0]
                # cl[1] is the falsified watch now
                if self._lit_value(cl[0]) == 1:
                    i += 1
                    continue
                moved = False
                for k in range(2, len(cl)):
                    if self._lit_value(cl[k]) != 0:
                        cl[1], cl[k] = cl[k], cl[1]
                        watch_list[i] = watch_list[-1]
                        watch_list.pop()
                        self.watches.setdefault(cl[1], []).append(ci)
                        moved = True
                        break
                if moved:
                    continue
                # clause is unit or conflicting under cl[0]
                if self._lit_value(cl[0]) == 0:
                    return ci
                self._enqueue(cl[0], ci)
                i += 1
        return None

    def _analyze(self, confl: int) -> tuple[List[int], int]:
        learnt = [0]
        seen = [False] * (self.n + 1)
        counter = 0
        lit = None
        cur_level = len(self.trail_lim)
        trail_idx = len(self.trail) - 1
        cl = self.clauses[confl]
        while True:
            for q in cl:
                if lit is not None and q == lit:
                    continue  # the literal this reason clause propagated
                var = abs(q)
                if not seen[var] and self.level[var] > 0:
                    seen[var] = True
                    self._bump(var)
                    if self.level[var] == cur_level:
                        counter += 1
                    else:
                        learnt.append(q)
            while not seen[abs(self.trail[trail_idx])]:
                trail_idx -= 1
            lit = self.trail[trail_idx]
            trail_idx -= 1
            var = abs(lit)
            seen[var] = False
            counter -= 1
            if counter == 0:
                learnt[0] = -lit
                break
            cl = self.clauses[self.reason[var]]  # type: ignore[index]
        if len(learnt) == 1:
            back = 0
        else:
            # second highest decision level in the clause
            back = max(self.level[abs(q)] for q in learnt[1:])
            mi = max(range(1, len(learnt)), key=lambda i: self.level[abs(learnt[i])])
            learnt[1], learnt[mi] = learnt[mi], learnt[1]
        return learnt, back

    def _bump(self, var: int) -> None:
        self.activity[var] += self.act_inc
        if self.activity[var] > 1e100:
            for v in range(1, self.n + 1):
                self.activity[v] *= 1e-100
            self.act_inc *= 1e-100

    def _backtrack(self, level: int) -> None:
        while len(self.trail_lim) > level:
            lim = self.trail_lim.pop()
            for lit in self.trail[lim:]:
                self.value[abs(lit)] = self.UNASSIGNED
                self.reason[abs(lit)] = None
            del self.trail[lim:]
        self.qhead = min(self.qhead, len(self.trail))

    def _decide(self) -> Optional[int]:
        best = None
        best_act = -1.0
        for v in range(1, self.n + 1):
            if self.value[v] == self.UNASSIGNED:
                a = self.activity[v]
                if a > best_act:
                    best_act = a
                    best = v
        if best is None:
            return None
        return -best  # fixed polarity: decide to false

    def solve(self, deadline: Optional[float] = None,
              conflict_limit: Optional[int] = None) -> Optional[List[int]]:
        """Return a total model as value list indexed by variable, or None."""
        if not self.ok:
            return None
        for u in self.units:
            if not self._enqueue(u, None):
                return None
        conflicts = 0
        while True:
            confl = self._propagate()
            if confl is not None:
                conflicts += 1
                if conflict_limit is not None and conflicts > conflict_limit:
                    raise ResourceLimit("SAT conflict budget exceeded")
                if deadline is not None and conflicts % 64 == 0:
                    if time.monotonic() > deadline:
                        raise ResourceLimit("SAT time budget exceeded")
                if not self.trail_lim:
                    return None
                learnt, back = self._analyze(confl)
                self._backtrack(back)
                self.act_inc /= 0.95
                if len(learnt) == 1:
                    if not self._enqueue(learnt[0], None):
                        return None
                else:
                    idx = len(self.clauses)
                    self.clauses.append(learnt)
                    self.watches.setdefault(learnt[0], []).append(idx)
                    self.watches.setdefault(learnt[1], []).append(idx)
                    self._enqueue(learnt[0], idx)
                continue
            lit = self._decide()
            if lit is None:
                return list(self.value)
            if deadline is not None and time.monotonic() > deadline:
                raise ResourceLimit("SAT time budget exceeded")
            self.trail_lim.append(len(self.trail))
            self._enqueue(lit, None)


def sat_solve(instance: CnfInstance, project: Iterable[int],
              deadline: Optional[float] = None,
              conflict_limit: Optional[int] = None) -> Optional[Assignment]:
    """Solve the instance; on SAT return the model restricted to ``project``.

    Projected variables are AIG variable ids; ones the instance does not
    constrain (or mention) default deterministically to 0.  Returns None on
    UNSAT.
    """
    if instance.trivially_false:
        return None
    solver = _Cdcl(instance.num_vars, instance.clauses)
    model = solver.solve(deadline=deadline, conflict_limit=conflict_limit)
    if model is None:
        return None
    out: Assignment = {}
    for var_id in project:
        cv = instance.node_to_cnf.get(var_id)
        if cv is None or model[cv] == _Cdcl.UNASSIGNED:
            out[var_id] = 0
        else:
            out[var_id] = model[cv]
    return out
