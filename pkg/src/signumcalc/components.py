"""Cartesian derivatives of regular signumdistributions through ``d_j``.

Results leave the radial catalog: they carry the component ``w_j = x_j / r``
and the basis vector ``e_j``.  A :class:`ComponentExpr` is a sum of
``c * r^k * B`` with ``B`` one of :data:`BASIS`.

Supported input is the sub-catalog ``r^a`` and ``r^a w`` with integer
``a >= 0``; for these the closed forms are

* ``d/dx_j r^a = a r^(a-1) w_j``,
* ``d/dx_j (r^a w) = r^(a-1) (e_j + (a - 1) w_j w)``,
* ``d_j r^a = r^(a-1) (-w e_j + (a - 1) w_j)``,
* ``d_j (r^a w) = a r^(a-1) w_j w``.

The cartesian derivative of a signumdistribution is the class
``[w d_j (-w) U]``; for regular input it is pinned by homogeneity, since an
origin term ``w delta`` has degree ``-m`` and the result has degree ``a - 1``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .clifford import Multivector
from .coeff import ZERO, Coefficient, Dimension
from .distributions import DistExpr, World, _coef_term
from .errors import UnsupportedForDj

BASIS = ("1", "w", "e_j", "w*e_j", "w_j", "w_j*w")


def _body(k: int, basis: str, j) -> str:
    parts = []
    if k:
        base = "r" if k > 0 else "rinv"
        parts.append(base if abs(k) == 1 else f"{base}^{abs(k)}")
    if basis != "1":
        parts.append(basis.replace("_j", f"_{j}"))
    return "*".join(parts)


@dataclass(frozen=True)
class ComponentExpr:
    """``sum c * r^k * B``; ``j`` is an integer index or the symbol ``"j"``."""

    world: World
    dim: Dimension
    j: int | str
    terms: tuple[tuple[tuple[int, str], Coefficient], ...]

    @classmethod
    def build(cls, world: World, dim: Dimension, j, terms: dict) -> "ComponentExpr":
        clean = {key: dim.coerce(Coefficient.coerce(c)) for key, c in terms.items()}
        ordered = sorted(((k, c) for k, c in clean.items() if c), key=lambda kc: (-kc[0][0], BASIS.index(kc[0][1])))
        return cls(world, dim, j, tuple(ordered))

    def is_zero(self) -> bool:
        return not self.terms

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        out = ""
        for (k, basis), c in self.terms:
            piece = _coef_term(c, _body(k, basis, self.j))
            if not out:
                out = piece
            elif piece.startswith("-"):
                out += " - " + piece[1:]
            else:
                out += " + " + piece
        return out

    def to_json(self) -> dict:
        return {
            "world": self.world.value,
            "j": self.j,
            "expr": str(self),
            "terms": [{"k": k, "basis": b, "coef": str(c)} for (k, b), c in self.terms],
        }

    def evaluate(self, p) -> Multivector:
        """Pointwise value at ``p`` (concrete dimension and integer ``j``)."""
        p = np.asarray(p, dtype=float)
        m = len(p)
        if self.dim.value is None:
            dim = Dimension(m)
        else:
            dim = self.dim
        j = int(self.j)
        r = float(np.linalg.norm(p))
        w = Multivector.vector(p / r)
        ej = Multivector.basis(m, j)
        wj = p[j - 1] / r
        values = {
            "1": Multivector.scalar(m, 1.0),
            "w": w,
            "w_j": Multivector.scalar(m, wj),
            "w_j*w": w * wj,
            "e_j": ej,
            "w*e_j": w * ej,
        }
        out = Multivector(m)
        for (k, basis), c in self.terms:
            out = out + values[basis] * (float(dim.coerce(c).to_fraction()) * r**k)
        return out


@dataclass(frozen=True)
class ComponentClass:
    """Equivalence class result; ``exact`` records that no free constants remain."""

    expr: ComponentExpr
    notes: tuple[str, ...] = ()

    @property
    def exact(self) -> bool:
        return True

    def __str__(self) -> str:
        return f"[{self.expr}]"

    def to_json(self) -> dict:
        return {"class": str(self), "representative": self.expr.to_json(), "free_atoms": [], "notes": list(self.notes)}


def _check_index(j, dim: Dimension):
    if isinstance(j, str):
        if j != "j":
            raise UnsupportedForDj(f"index must be an integer or 'j', got {j!r}")
        return j
    if isinstance(j, bool) or not isinstance(j, int) or j < 1:
        raise UnsupportedForDj(f"index j = {j!r} out of range")
    if dim.value is not None and j > dim.value:
        raise UnsupportedForDj(f"index j = {j} out of range 1..{dim.value}")
    return j


def _supported_terms(u: DistExpr):
    if u.origin:
        raise UnsupportedForDj("origin terms are outside the d_j sub-catalog")
    if u.has_atoms():
        raise UnsupportedForDj("free constants are outside the d_j sub-catalog")
    for (k, e), c in u.regular.items():
        if k < 0:
            raise UnsupportedForDj(f"r^{k} is outside the d_j sub-catalog (needs a >= 0)")
        yield k, e, c


def _add(acc: dict, key, c) -> None:
    acc[key] = acc.get(key, ZERO) + c


def cartesian_derivative(j, u: DistExpr) -> ComponentClass:
    """``d/dx_j`` of a regular signumdistribution as the class ``[w d_j (-w) U]``."""
    if u.world is not World.SIGNUM:
        raise UnsupportedForDj("cartesian_derivative acts on signumdistributions")
    j = _check_index(j, u.dim)
    acc: dict = {}
    for a, e, c in _supported_terms(u):
        if e == 0:
            if a:
                _add(acc, (a - 1, "w_j"), c * a)
        else:
            _add(acc, (a - 1, "e_j"), c)
            if a != 1:
                _add(acc, (a - 1, "w_j*w"), c * (a - 1))
    expr = ComponentExpr.build(World.SIGNUM, u.dim, j, acc)
    return ComponentClass(expr, ("pinned by homogeneity: no origin term of matching degree",))


def dj_apply(j, u: DistExpr) -> ComponentExpr:
    """``d_j U = w d/dx_j (-w U)`` for a regular signumdistribution ``U``."""
    if u.world is not World.SIGNUM:
        raise UnsupportedForDj("d_j acts on signumdistributions")
    j = _check_index(j, u.dim)
    acc: dict = {}
    for a, e, c in _supported_terms(u):
        if e == 0:
            _add(acc, (a - 1, "w*e_j"), -c)
            if a != 1:
                _add(acc, (a - 1, "w_j"), c * (a - 1))
        elif a:
            _add(acc, (a - 1, "w_j*w"), c * a)
    return ComponentExpr.build(World.SIGNUM, u.dim, j, acc)
