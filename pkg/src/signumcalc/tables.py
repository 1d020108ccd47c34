"""The tables of signum-pairs and cross-pairs, recomputed from the algebra.

A row ``(P, P')`` of the signum table claims ``P' = w P (-w)``; a row of the
cross table claims ``Q' = w Q w``.  Each printed cell also gets its reverse
pair checked, and its bracket: round brackets mark pairs whose action is
unique, square brackets pairs that act through equivalence classes.

* Signum table: round iff the first operator is a polynomial-coefficient
  operator (a combination of words in E, Gamma, x and the Dirac operator).
* Cross table: round iff the first operator has no ``1/r`` and no ``dr``.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from . import clifford as cl
from .coeff import SYM, Dimension
from .operators import cartesian_decomposition, cross_partner, normalize, signum_partner
from .parser import parse_operator

# (label, P, claimed partner, printed bracket, reverse bracket or None when the
# row is printed across both columns)
SIGNUM_ROWS = (
    ("x", "x", "x", "(", None),
    ("r^2", "r^2", "r^2", "(", None),
    ("E", "E", "E", "(", None),
    ("Gamma", "Gamma", "-dw*w", "(", "("),
    ("Gamma^2", "Gamma^2", "Gamma^2 - 2*(m-1)*Gamma + (m-1)^2", "(", "("),
    ("Dirac", "Dirac", "D", "(", "["),
    ("w*dr", "w*dr", "w*dr", "[", None),
    ("rinv*dw", "rinv*dw", "-rinv*dw + (m-1)*rinv*w", "[", "["),
    ("dw^2", "dw^2", "dw^2", "(", None),
    ("LapStar", "LapStar", "ZStar", "(", "("),
    # Z written out through its decomposition so the row is not a tautology
    ("Lap", "Lap", "dr^2 + (m-1)*rinv*dr + rinv^2*ZStar", "(", "["),
    ("dr^2", "dr^2", "dr^2", "[", None),
    ("xinv", "xinv", "xinv", "[", None),
    ("rinv*dr", "rinv*dr", "rinv*dr", "[", None),
    ("rinv^2", "rinv^2", "rinv^2", "[", None),
)

CROSS_ROWS = (
    # printed as (w, w); computation and the surrounding text give -w
    ("w", "w", "-w", "(", None, "printed cell reads (w, w)"),
    ("r", "r", "-r", "(", "(", ""),
    ("dr", "dr", "-dr", "[", "[", ""),
    ("dw", "dw", "w*dw*w", "(", "(", ""),
    ("rinv", "rinv", "-rinv", "[", "[", ""),
    ("rinv*dw*w", "rinv*dw*w", "-rinv*w*dw", "[", "[", ""),
)


@dataclass
class PairRow:
    table: str
    label: str
    operator: str
    claimed: str
    computed: str
    partner_ok: bool
    reverse_ok: bool
    bracket: str
    bracket_ok: bool
    reverse_bracket: str | None = None
    method: str = "symbolic"
    note: str = ""

    @property
    def passed(self) -> bool:
        return self.partner_ok and self.reverse_ok and self.bracket_ok

    def to_json(self) -> dict:
        out = {
            "table": self.table,
            "label": self.label,
            "operator": self.operator,
            "claimed": self.claimed,
            "computed": self.computed,
            "partner_ok": self.partner_ok,
            "reverse_ok": self.reverse_ok,
            "bracket": self.bracket,
            "bracket_ok": self.bracket_ok,
            "method": self.method,
            "pass": self.passed,
        }
        if self.reverse_bracket is not None:
            out["reverse_bracket"] = self.reverse_bracket
        if self.note:
            out["note"] = self.note
        return out


@dataclass
class TableReport:
    signum: list[PairRow]
    cross: list[PairRow]
    seconds: float = 0.0
    extra: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.signum + self.cross)

    def to_json(self) -> dict:
        return {
            "signum_pairs": [r.to_json() for r in self.signum],
            "cross_pairs": [r.to_json() for r in self.cross],
            "counts": {"signum": len(self.signum), "cross": len(self.cross)},
            "pass": self.passed,
        }


def signum_bracket(p) -> str:
    return "(" if cartesian_decomposition(normalize(p)) is not None else "["


def cross_bracket(q) -> str:
    nf = normalize(q)
    return "(" if all(k >= 0 and p == 0 for (k, _e, _q, p) in nf.keys()) else "["


def _signum_row(label, src, claimed_src, bracket, rev_bracket, dim) -> PairRow:
    p = parse_operator(src, dim)
    claimed = parse_operator(claimed_src, dim)
    computed = signum_partner(p)
    partner_ok = computed == normalize(claimed)
    reverse_ok = signum_partner(claimed) == normalize(p)
    b_ok = signum_bracket(p) == bracket
    if rev_bracket is not None:
        b_ok = b_ok and signum_bracket(claimed) == rev_bracket
    return PairRow("signum", label, src, claimed_src, str(computed), partner_ok, reverse_ok, bracket, b_ok, rev_bracket)


def _cross_row(label, src, claimed_src, bracket, rev_bracket, note, dim) -> PairRow:
    q = parse_operator(src, dim)
    claimed = parse_operator(claimed_src, dim)
    computed = cross_partner(q)
    partner_ok = computed == normalize(claimed)
    reverse_ok = cross_partner(claimed) == normalize(q)
    b_ok = cross_bracket(q) == bracket
    if rev_bracket is not None:
        b_ok = b_ok and cross_bracket(claimed) == rev_bracket
    return PairRow("cross", label, src, claimed_src, str(computed), partner_ok, reverse_ok, bracket, b_ok, rev_bracket, note=note)


def dj_row(dims=(2, 3), seed: int = 0, samples: int = 6, tol: float = 1e-10) -> PairRow:
    """``(d/dx_j, d_j)``: the partner formula is checked pointwise on fields."""
    rng = np.random.default_rng(seed)
    ok = True
    worst = 0.0
    for m in dims:
        pts = cl.sample_points(m, samples, rng)
        fields = cl.standard_fields(m, rng)[:5]
        for j in range(1, m + 1):
            rep = cl.identity_check(
                cl.field_side(lambda f, j=j: cl.d_j(f, j)),
                cl.field_side(lambda f, j=j: cl.d_j_partner(f, j)),
                fields,
                pts,
                tol,
                f"d_{j}",
            )
            ok = ok and rep.passed
            worst = max(worst, rep.max_rel_dev)
    return PairRow(
        "signum",
        "d/dx_j",
        "d/dx_j",
        "d_j",
        "w d/dx_j (-w)",
        ok,
        ok,
        "(",
        True,
        "[",
        method="numeric",
        note=f"pointwise at m in {list(dims)}, max relative deviation {worst:.2e}",
    )


def verify_pair_tables(dim: Dimension = SYM, seed: int = 0) -> TableReport:
    start = time.perf_counter()
    signum = [_signum_row(*row, dim) for row in SIGNUM_ROWS]
    signum.append(dj_row(seed=seed))
    cross = [_cross_row(*row, dim) for row in CROSS_ROWS]
    return TableReport(signum, cross, time.perf_counter() - start)
