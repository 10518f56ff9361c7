"""Generators for benchmark formula families in QCIR text."""

from __future__ import annotations

FAMILY_NAMES = ("equality", "equality-neg")


def gen_family(name: str, n: int) -> str:
    """n-bit equality family and its negation.

    ``equality``:     forall X exists Y. AND_i (x_i <-> y_i)   (true)
    ``equality-neg``: exists X forall Y. OR_i  (x_i XOR y_i)   (false)
    """
    if n < 1:
        raise ValueError("family size must be >= 1")
    xs = [f"x{i}" for i in range(1, n + 1)]
    ys = [f"y{i}" for i in range(1, n + 1)]
    lines = ["#QCIR-G14"]
    if name == "equality":
        lines.append(f"forall({', '.join(xs)})")
        lines.append(f"exists({', '.join(ys)})")
    elif name == "equality-neg":
        lines.append(f"exists({', '.join(xs)})")
        lines.append(f"forall({', '.join(ys)})")
    else:
        raise ValueError(f"unknown family '{name}' (choose from {FAMILY_NAMES})")
    lines.append("output(out)")
    for i in range(1, n + 1):
        lines.append(f"d{i} = xor(x{i}, y{i})")
    if name == "equality":
        lines.append("out = and(" + ", ".join(f"-d{i}" for i in range(1, n + 1)) + ")")
    else:
        lines.append("out = or(" + ", ".join(f"d{i}" for i in range(1, n + 1)) + ")")
    return "\n".join(lines) + "\n"
