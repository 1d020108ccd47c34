"""Canonical JSON for reports.

Output is sorted by key with a fixed indent, so a report is byte-stable for
fixed inputs and seed.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

import numpy as np

from .clifford import Multivector
from .coeff import Coefficient
from .operators import NormalForm, OperatorExpr, normalize

SCHEMA = 1


def normal_form_json(nf: NormalForm) -> dict:
    return {
        "m": str(nf.dim),
        "text": str(nf),
        "terms": [[k, e, q, p, str(c)] for (k, e, q, p), c in nf.terms],
    }


def to_jsonable(obj: Any) -> Any:
    """Convert engine objects (and containers of them) to JSON-ready values."""
    if obj is None or isinstance(obj, (bool, int, str)):
        return obj
    if isinstance(obj, float):
        return float(f"{obj:.12e}")
    if isinstance(obj, (np.floating, np.integer)):
        return to_jsonable(obj.item())
    if isinstance(obj, (Coefficient, Fraction)):
        return str(obj)
    if isinstance(obj, NormalForm):
        return normal_form_json(obj)
    if isinstance(obj, OperatorExpr):
        return normal_form_json(normalize(obj))
    if isinstance(obj, Multivector):
        return obj.to_dict(tol=1e-15)
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if hasattr(obj, "to_json"):
        return to_jsonable(obj.to_json())
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def canonical_json(obj: Any) -> str:
    return json.dumps(to_jsonable(obj), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def report(command: str, inputs: dict, results: Any, checks: list[dict], exit_status: int) -> dict:
    return {
        "schema": SCHEMA,
        "command": command,
        "inputs": inputs,
        "results": results,
        "checks": checks,
        "exit_status": exit_status,
    }
