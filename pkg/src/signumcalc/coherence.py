"""Symbolic versus concrete dimension.

A result computed with symbolic ``m`` and then specialized at ``m0`` must
serialize to exactly the same canonical JSON as the same computation run in
dimension ``m0`` from the start.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from . import distributions as dc
from .coeff import SYM, Dimension
from .distributions import World
from .errors import SignumCalcError
from .operators import cross_partner, eval_at_dimension, macros, normalize, signum_partner
from .serialize import canonical_json

COHERENCE_DIMS = (2, 3, 4, 5)
OPERATOR_NAMES = ("x", "xinv", "E", "Gamma", "Dirac", "D", "Lap", "LapStar", "Z", "ZStar", "r", "rinv", "w", "dr", "dw")
APPLY_NAMES = ("x", "E", "Gamma", "Dirac", "D", "Lap", "LapStar", "Z", "ZStar", "w", "dr", "dw", "r")


@dataclass(frozen=True)
class CoherenceResult:
    id: str
    m: int
    status: str  # "equal", "both-raise", "symbolic-only-raise", "mismatch"
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.status != "mismatch"

    def to_json(self) -> dict:
        out = {"id": self.id, "m": self.m, "status": self.status, "pass": self.passed}
        if self.detail:
            out["detail"] = self.detail
        return out


def _specialize(obj, m0: int):
    if hasattr(obj, "specialize"):
        return obj.specialize(m0)
    return eval_at_dimension(obj, m0)


def _outcome(fn: Callable, dim: Dimension):
    try:
        return fn(dim), None
    except SignumCalcError as exc:
        return None, type(exc).__name__


def compare(id_: str, fn: Callable[[Dimension], object], m0: int) -> CoherenceResult:
    """Run ``fn`` symbolically and at ``m0``; compare the serialized results."""
    sym, sym_err = _outcome(fn, SYM)
    conc, conc_err = _outcome(fn, Dimension(m0))
    if sym_err is not None:
        # a symbolic failure may be an m-dependent domain condition; the
        # concrete run is then free to succeed, but must not contradict it
        if conc_err is not None:
            return CoherenceResult(id_, m0, "both-raise", sym_err)
        return CoherenceResult(id_, m0, "symbolic-only-raise", sym_err)
    if conc_err is not None:
        return CoherenceResult(id_, m0, "mismatch", f"concrete raised {conc_err}")
    a = canonical_json(_specialize(sym, m0))
    b = canonical_json(conc)
    if a == b:
        return CoherenceResult(id_, m0, "equal")
    return CoherenceResult(id_, m0, "mismatch", "serialized results differ")


def _catalog(world: World):
    return [(str(t), t.regular, t.origin) for t in dc.iter_catalog(SYM, world, kmin=-1, kmax=3)]


def _rebuild(world: World, regular, origin, dim: Dimension) -> dc.DistExpr:
    src = dc.DistExpr(world, SYM, dict(regular), dict(origin))
    return src if dim.value is None else src.specialize(dim.value)


def cases() -> list[tuple[str, Callable[[Dimension], object]]]:
    out: list[tuple[str, Callable]] = []
    for name in OPERATOR_NAMES:
        out.append((f"normalize {name}", lambda d, n=name: normalize(macros(d)[n])))
        out.append((f"signum partner {name}", lambda d, n=name: signum_partner(macros(d)[n])))
        out.append((f"cross partner {name}", lambda d, n=name: cross_partner(macros(d)[n])))
    for world in (World.DIST, World.SIGNUM):
        for text, reg, org in _catalog(world):
            for name in APPLY_NAMES:
                out.append(
                    (
                        f"apply {name} to {world.value} {text}",
                        lambda d, n=name, w=world, rg=reg, og=org: dc.apply_operator(
                            macros(d)[n], _rebuild(w, rg, og, d), dc.AtomFactory()
                        ),
                    )
                )
    for text, reg, org in _catalog(World.DIST):
        out.append((f"dirac parts {text}", lambda d, rg=reg, og=org: dc.dirac_parts(_rebuild(World.DIST, rg, og, d), dc.AtomFactory())))
        out.append((f"laplace parts {text}", lambda d, rg=reg, og=org: dc.laplace_parts(_rebuild(World.DIST, rg, og, d), dc.AtomFactory())))
    return out


def coherence_suite(dims=COHERENCE_DIMS) -> list[CoherenceResult]:
    return [compare(id_, fn, m0) for m0 in dims for id_, fn in cases()]
