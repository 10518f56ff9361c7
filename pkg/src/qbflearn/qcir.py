"""Parser and printer for the QCIR-G14 circuit format.

Accepted subset: optional ``#QCIR-G14`` header and ``#`` comments,
``forall(...)`` / ``exists(...)`` prefix lines, ``output(lit)``, and gate
definitions ``g = and(...)`` / ``or(...)`` / ``xor(l1,l2)`` / ``ite(c,t,e)``.
``and``/``or`` take arbitrary arity (empty ``and()`` is true, empty ``or()``
false).  Keywords are case-insensitive, ``-`` negates, gates may be defined
in any order as long as the definitions are acyclic.  Adjacent blocks with
the same quantifier are merged.  Formulas must be closed.
"""

from __future__ import annotations

import re
from typing import Dict, List, Optional, Tuple

from .aig import FALSE, TRUE, AigTable, Ref, neg
from .prefix import Game, Prefix, Quantifier, make_prefix


class QcirParseError(Exception):
    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"line {line}, col {column}: {message}")
        self.line = line
        self.column = column


class QcirSyntaxError(QcirParseError):
    pass


class UndefinedGate(QcirParseError):
    pass


class RedefinedName(QcirParseError):
    pass


class FreeVariable(QcirParseError):
    pass


class CyclicGate(QcirParseError):
    pass


_IDENT = r"[A-Za-z0-9_~'.\$]+"
_PREFIX_RE = re.compile(rf"(forall|exists)\s*\(\s*({_IDENT}(?:\s*,\s*{_IDENT})*)\s*\)\s*$", re.I)
_OUTPUT_RE = re.compile(rf"output\s*\(\s*(-?)\s*({_IDENT})\s*\)\s*$", re.I)
_GATE_RE = re.compile(
    rf"({_IDENT})\s*=\s*(and|or|xor|ite)\s*\(\s*((?:-?\s*{_IDENT}(?:\s*,\s*-?\s*{_IDENT})*)?)\s*\)\s*$",
    re.I,
)
_LIT_RE = re.compile(rf"(-?)\s*({_IDENT})$")


def parse_qcir(text: str, table: Optional[AigTable] = None) -> Tuple[Game, AigTable]:
    """Parse QCIR text into a closed :class:`Game` over an AIG table."""
    if table is None:
        table = AigTable()

    blocks: List[Tuple[Quantifier, List[str]]] = []
    quantified: Dict[str, int] = {}  # name -> var id
    gate_defs: Dict[str, Tuple[str, List[Tuple[bool, str]], int]] = {}  # op, args, line
    gate_order: List[str] = []
    output_lit: Optional[Tuple[bool, str, int]] = None
    saw_gate_or_output = False

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        m = _PREFIX_RE.match(line)
        if m:
            if saw_gate_or_output:
                raise QcirSyntaxError("prefix line after output/gate section", lineno)
            q = Quantifier.FORALL if m.group(1).lower() == "forall" else Quantifier.EXISTS
            names = [s.strip() for s in m.group(2).split(",")]
            for name in names:
                if name in quantified:
                    raise RedefinedName(f"variable '{name}' bound twice", lineno)
                quantified[name] = table.mk_var(name) >> 1
            blocks.append((q, names))
            continue
        m = _OUTPUT_RE.match(line)
        if m:
            if output_lit is not None:
                raise QcirSyntaxError("duplicate output line", lineno)
            output_lit = (m.group(1) == "-", m.group(2), lineno)
            saw_gate_or_output = True
            continue
        m = _GATE_RE.match(line)
        if m:
            saw_gate_or_output = True
            name, op, argtext = m.group(1), m.group(2).lower(), m.group(3)
            if name in quantified:
                raise RedefinedName(f"gate '{name}' shadows a variable", lineno)
            if name in gate_defs:
                raise RedefinedName(f"gate '{name}' defined twice", lineno)
            args: List[Tuple[bool, str]] = []
            if argtext.strip():
                for piece in argtext.split(","):
                    lm = _LIT_RE.match(piece.strip())
                    if not lm:
                        raise QcirSyntaxError(f"bad literal '{piece.strip()}'", lineno)
                    args.append((lm.group(1) == "-", lm.group(2)))
            if op == "xor" and len(args) != 2:
                raise QcirSyntaxError("xor takes exactly 2 arguments", lineno)
            if op == "ite" and len(args) != 3:
                raise QcirSyntaxError("ite takes exactly 3 arguments", lineno)
            gate_defs[name] = (op, args, lineno)
            gate_order.append(name)
            continue
        raise QcirSyntaxError(f"unrecognized line '{line}'", lineno)

    if output_lit is None:
        raise QcirSyntaxError("missing output(...) line", len(text.splitlines()) + 1)

    # Resolve gates, detecting cycles with an explicit DFS.
    resolved: Dict[str, Ref] = {}
    in_progress: set = set()

    def resolve_gate(name: str, use_line: int) -> Ref:
        if name in resolved:
            return resolved[name]
        if name in in_progress:
            raise CyclicGate(f"gate '{name}' depends on itself", gate_defs[name][2])
        in_progress.add(name)
        op, args, lineno = gate_defs[name]
        refs = [resolve_lit(negd, n, lineno) for negd, n in args]
        if op == "and":
            r = table.mk_and_many(refs)
        elif op == "or":
            r = table.mk_or_many(refs)
        elif op == "xor":
            r = table.mk_xor(refs[0], refs[1])
        else:
            r = table.mk_ite(refs[0], refs[1], refs[2])
        in_progress.discard(name)
        resolved[name] = r
        return r

    def resolve_lit(negd: bool, name: str, lineno: int) -> Ref:
        if name in quantified:
            r: Ref = quantified[name] << 1
        elif name in gate_defs:
            r = resolve_gate(name, lineno)
        else:
            raise FreeVariable(f"'{name}' is used but not quantified or defined", lineno)
        return neg(r) if negd else r

    out_negd, out_name, out_line = output_lit
    if out_name in quantified:
        root: Ref = quantified[out_name] << 1
    elif out_name in gate_defs:
        root = resolve_gate(out_name, out_line)
    else:
        raise UndefinedGate(f"output gate '{out_name}' is not defined", out_line)
    if out_negd:
        root = neg(root)

    var_blocks = [(q, [quantified[n] for n in names]) for q, names in blocks]
    prefix = make_prefix(var_blocks)
    game = Game(prefix, root)
    game.check_closed(table)
    return game, table


def print_qcir(table: AigTable, game: Game) -> str:
    """Emit QCIR-G14 text that reparses to an equivalent game."""
    var_names = {table.name_of(v) for blk in game.prefix.blocks for v in blk.variables}
    gate_prefix = "g"
    while any(re.fullmatch(rf"{gate_prefix}\d+", n) for n in var_names):
        gate_prefix += "g"

    lines = ["#QCIR-G14"]
    for blk in game.prefix.blocks:
        kw = "forall" if blk.quantifier is Quantifier.FORALL else "exists"
        names = ", ".join(table.name_of(v) for v in blk.variables)
        lines.append(f"{kw}({names})")

    gate_name: Dict[int, str] = {}
    gate_lines: List[str] = []
    counter = 0

    def lit_str(r: Ref) -> str:
        idx = r >> 1
        node = table.node(idx)
        if node[0] == 1:  # VAR
            base = table.name_of(idx)
        else:
            base = gate_name[idx]
        return ("-" if r & 1 else "") + base

    root = game.matrix
    if root == TRUE or root == FALSE:
        out = f"{gate_prefix}0"
        lines.append(f"output({'-' if root == FALSE else ''}{out})")
        lines.append(f"{out} = and()")
        return "\n".join(lines) + "\n"

    for idx in table._postorder(root):
        node = table.node(idx)
        if node[0] == 2:  # AND
            name = f"{gate_prefix}{counter}"
            counter += 1
            gate_name[idx] = name
            gate_lines.append(f"{name} = and({lit_str(node[1])}, {lit_str(node[2])})")

    lines.append(f"output({lit_str(root)})")
    lines.extend(gate_lines)
    return "\n".join(lines) + "\n"
