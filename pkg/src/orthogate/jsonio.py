"""Deterministic JSON output with 17-significant-digit reals."""

from __future__ import annotations

import json
import math

import numpy as np


def _float(x: float) -> str:
    if not math.isfinite(x):
        raise ValueError(f"cannot serialize non-finite number {x!r}")
    if x == 0.0:
        return "0.0"
    s = format(x, ".17g")
    if "e" not in s and "." not in s:
        s += ".0"
    return s


def complex_pair(z) -> list[float]:
    z = complex(z)
    return [z.real + 0.0, z.imag + 0.0]


def complex_vector(v) -> list[list[float]]:
    return [complex_pair(z) for z in np.asarray(v).ravel()]


def complex_matrix(M) -> list[list[list[float]]]:
    return [complex_vector(row) for row in np.asarray(M)]


def real_list(v) -> list:
    a = np.asarray(v, dtype=float)
    return (a + 0.0).tolist()


def dumps(obj, indent: int = 2) -> str:
    """Serialize ``obj`` with insertion-ordered keys and %.17g floats."""
    out: list[str] = []
    _emit(obj, out, 0, indent)
    return "".join(out)


def _emit(obj, out, level, indent):
    pad = "\n" + " " * (indent * (level + 1))
    end = "\n" + " " * (indent * level)
    if isinstance(obj, (bool, np.bool_)):
        out.append("true" if obj else "false")
    elif obj is None:
        out.append("null")
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        out.append(_float(float(obj)))
    elif isinstance(obj, str):
        out.append(json.dumps(obj, ensure_ascii=False))
    elif isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{")
        for i, (k, v) in enumerate(obj.items()):
            out.append(("," if i else "") + pad + json.dumps(str(k)) + ": ")
            _emit(v, out, level + 1, indent)
        out.append(end + "}")
    elif isinstance(obj, (list, tuple, np.ndarray)):
        items = list(obj)
        if not items:
            out.append("[]")
            return
        if all(isinstance(x, (int, float, np.number, bool)) for x in items):
            # numeric leaves stay on one line to keep matrices readable
            out.append("[")
            for i, x in enumerate(items):
                if i:
                    out.append(", ")
                _emit(x, out, level + 1, indent)
            out.append("]")
            return
        out.append("[")
        for i, v in enumerate(items):
            out.append(("," if i else "") + pad)
            _emit(v, out, level + 1, indent)
        out.append(end + "]")
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")
