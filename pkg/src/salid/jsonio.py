"""Deterministic JSON writer with fixed-precision reals.

The stdlib encoder always uses ``repr`` for floats. Model files instead pin
every real to 17 significant digits so that ``dump(load(dump(x)))`` is
byte-identical to ``dump(x)`` regardless of how the value was produced.
"""

from __future__ import annotations

import json
import math
from typing import Any

import numpy as np


def _real(x: float) -> str:
    if not math.isfinite(x):
        raise ValueError(f"non-finite real {x!r} cannot be serialized")
    s = format(x, ".17g")
    if "e" not in s and "." not in s:
        # keep reals distinguishable from integers on reload
        s += ".0"
    return s


def _encode(obj: Any, out: list[str]) -> None:
    if obj is None or isinstance(obj, (bool, np.bool_)):
        out.append(json.dumps(bool(obj) if obj is not None else None))
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        out.append(_real(float(obj)))
    elif isinstance(obj, str):
        out.append(json.dumps(obj, ensure_ascii=False))
    elif isinstance(obj, dict):
        out.append("{")
        for i, (key, value) in enumerate(obj.items()):
            if i:
                out.append(", ")
            out.append(json.dumps(str(key), ensure_ascii=False))
            out.append(": ")
            _encode(value, out)
        out.append("}")
    elif isinstance(obj, (list, tuple, np.ndarray)):
        out.append("[")
        for i, value in enumerate(obj):
            if i:
                out.append(", ")
            _encode(value, out)
        out.append("]")
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj: Any) -> str:
    out: list[str] = []
    _encode(obj, out)
    out.append("\n")
    return "".join(out)


def loads(text: str) -> Any:
    return json.loads(text)
