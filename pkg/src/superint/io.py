"""Deterministic number formatting and JSON output."""

from __future__ import annotations

import json
import math
from fractions import Fraction


def fmt(x) -> str:
    """17 significant digits; integers and non-finite values spelled out."""
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return f"{x:.17g}"


def _norm(o):
    if isinstance(o, bool) or o is None or isinstance(o, str):
        return o
    if isinstance(o, int):
        return o
    if isinstance(o, float):
        return float(fmt(o)) if math.isfinite(o) else fmt(o)
    if isinstance(o, dict):
        return {str(k): _norm(v) for k, v in o.items()}
    if isinstance(o, (list, tuple)):
        return [_norm(v) for v in o]
    if hasattr(o, "item"):
        return _norm(o.item())
    if isinstance(o, Fraction):
        return str(o)
    if hasattr(o, "to_text"):
        return o.to_text()
    raise TypeError(f"cannot serialize {type(o).__name__}")


def dumps(obj) -> str:
    return json.dumps(_norm(obj), indent=2, sort_keys=True) + "\n"
