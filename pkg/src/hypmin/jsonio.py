"""Deterministic JSON output with 17-significant-digit floats.

Python's default float repr is shortest-roundtrip; the file formats
here pin 17 significant digits instead so outputs are byte-identical
across platforms and trivially round-trip-exact.
"""

import json
import math


def format_float(v: float) -> str:
    if not math.isfinite(v):
        raise ValueError(f"cannot serialize non-finite float {v}")
    return format(v, ".17g")


def dumps(obj, indent: int | None = None) -> str:
    return "".join(_emit(obj, indent, 0))


def _emit(obj, indent, depth):
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        yield json.dumps(obj)
    elif isinstance(obj, float):
        yield format_float(obj)
    elif isinstance(obj, dict):
        yield from _emit_items(
            ((json.dumps(str(k)) + (": " if indent else ":")) for k in obj),
            obj.values(), "{}", indent, depth,
        )
    elif isinstance(obj, (list, tuple)):
        yield from _emit_items(("" for _ in obj), obj, "[]", indent, depth)
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


def _emit_items(prefixes, values, braces, indent, depth):
    items = list(zip(prefixes, values))
    if not items:
        yield braces
        return
    yield braces[0]
    pad = "\n" + " " * (indent * (depth + 1)) if indent else ""
    sep = "," + (pad if indent else "")
    for i, (prefix, value) in enumerate(items):
        if i:
            yield sep
        elif indent:
            yield pad
        yield prefix
        yield from _emit(value, indent, depth + 1)
    if indent:
        yield "\n" + " " * (indent * depth)
    yield braces[1]
