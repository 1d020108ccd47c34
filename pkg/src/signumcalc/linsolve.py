"""Gauss-Jordan elimination over Q(m).

Used by the constraint solver and by the decomposition of radial operators
into cartesian words.  Pivot columns are taken in the caller's variable order,
so free variables are always the later ones.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Mapping, Sequence

from .coeff import ZERO, Coefficient
from .errors import Inconsistent

Row = dict  # variable -> Coefficient


@dataclass(frozen=True)
class Solution:
    """Affine solution space ``pivot = rhs - sum(coef * free)``."""

    variables: tuple
    pivots: tuple  # ((var, rhs, ((free_var, coef), ...)), ...)
    free: tuple

    def particular(self) -> dict:
        """The solution with every free variable set to zero."""
        return {v: rhs for v, rhs, _ in self.pivots}

    @property
    def rank(self) -> int:
        return len(self.pivots)


def solve(
    equations: Sequence[tuple[Mapping[Hashable, Coefficient], Coefficient]],
    variables: Sequence[Hashable],
) -> Solution:
    """Solve ``sum(row[v] * v) = rhs`` for every ``(row, rhs)``.

    Raises :class:`Inconsistent` when a row reduces to ``0 = nonzero``.
    """
    order = {v: i for i, v in enumerate(variables)}
    rows: list[tuple[dict, Coefficient]] = []
    for row, rhs in equations:
        r = {v: c for v, c in row.items() if c}
        for v in r:
            if v not in order:
                raise KeyError(f"unknown variable {v!r}")
        rows.append((r, rhs))

    pivot_rows: list[tuple[Hashable, dict, Coefficient]] = []
    for col in variables:
        idx = next((i for i, (r, _) in enumerate(rows) if col in r), None)
        if idx is None:
            continue
        r, rhs = rows.pop(idx)
        inv = r[col].inverse()
        r = {v: c * inv for v, c in r.items()}
        rhs = rhs * inv
        rows = [_eliminate(o, orhs, col, r, rhs) for o, orhs in rows]
        pivot_rows = [
            (pv, *_eliminate(pr, prhs, col, r, rhs)) for pv, pr, prhs in pivot_rows
        ]
        pivot_rows.append((col, r, rhs))

    for r, rhs in rows:
        if not r and rhs:
            raise Inconsistent(f"inconsistent equation 0 = {rhs}")

    pivset = {pv for pv, _, _ in pivot_rows}
    free = tuple(v for v in variables if v not in pivset)
    pivots = []
    for pv, r, rhs in sorted(pivot_rows, key=lambda t: order[t[0]]):
        deps = tuple((v, r[v]) for v in sorted((v for v in r if v != pv), key=order.get))
        pivots.append((pv, rhs, deps))
    return Solution(tuple(variables), tuple(pivots), free)


def _eliminate(row: dict, rhs: Coefficient, col, prow: dict, prhs: Coefficient):
    f = row.get(col)
    if f is None:
        return row, rhs
    out = dict(row)
    for v, c in prow.items():
        nv = out.get(v, ZERO) - f * c
        if nv:
            out[v] = nv
        else:
            out.pop(v, None)
    return out, rhs - f * prhs
