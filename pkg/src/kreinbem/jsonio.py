"""Deterministic JSON emission: fixed field order, 17-significant-digit floats."""

from __future__ import annotations

import math


def format_float(x: float) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if math.isnan(x) or math.isinf(x):
        raise ValueError("reports must not contain NaN or infinite values")
    if x == int(x) and abs(x) < 1e16:
        return f"{x:.1f}"
    return f"{x:.17g}"


def format_complex(z: complex) -> str:
    """Canonical a+bi / a-bi literal with no spaces."""
    re, im = format_float(float(z.real)), format_float(abs(float(z.imag)))
    sign = "-" if z.imag < 0 else "+"
    return f"{re}{sign}{im}i"


def parse_complex(text: str) -> complex:
    """Parse the a+bi / a-bi literal (also bare reals and bare imaginaries)."""
    s = text.strip().replace(" ", "")
    if not s:
        raise ValueError("empty complex literal")
    if s.endswith("i"):
        body = s[:-1]
        # split at the last +/- that is not part of an exponent
        for pos in range(len(body) - 1, 0, -1):
            if body[pos] in "+-" and body[pos - 1] not in "eE":
                return complex(float(body[:pos]), float(body[pos:]))
        # pure imaginary
        if body in ("", "+"):
            return 1j
        if body == "-":
            return -1j
        return complex(0.0, float(body))
    return complex(float(s), 0.0)


def canonical_dumps(doc) -> str:
    """Serialize with insertion-ordered keys and 17-digit floats."""
    return _emit(doc)


def _emit(node) -> str:
    if node is None:
        return "null"
    if isinstance(node, bool):
        return "true" if node else "false"
    if isinstance(node, str):
        return '"' + node.replace("\\", "\\\\").replace('"', '\\"') + '"'
    if isinstance(node, int):
        return str(node)
    if isinstance(node, complex):
        return _emit(format_complex(node))
    if isinstance(node, float):
        return format_float(node)
    if isinstance(node, dict):
        items = ", ".join(f"{_emit(str(k))}: {_emit(v)}" for k, v in node.items())
        return "{" + items + "}"
    if isinstance(node, (list, tuple)):
        return "[" + ", ".join(_emit(v) for v in node) + "]"
    # numpy scalars
    if hasattr(node, "item"):
        return _emit(node.item())
    raise TypeError(f"cannot serialize {type(node)!r}")
