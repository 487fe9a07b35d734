"""Deterministic JSON output for run reports."""

from __future__ import annotations

import json
import math

import numpy as np

__all__ = ["to_jsonable", "dumps", "loads"]


def to_jsonable(obj):
    """Plain Python containers with finite floats; numpy values converted.

    Negative zero becomes zero and non-finite floats become strings, so the
    output is strict JSON and does not depend on the sign of rounding noise.
    """
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if not math.isfinite(x):
            return "nan" if math.isnan(x) else ("inf" if x > 0 else "-inf")
        return 0.0 if x == 0.0 else x
    if obj is None or isinstance(obj, str):
        return obj
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj) -> str:
    # float repr is the shortest string that round-trips exactly
    return json.dumps(to_jsonable(obj), indent=2, sort_keys=True, allow_nan=False) + "\n"


def loads(text: str):
    return json.loads(text)
