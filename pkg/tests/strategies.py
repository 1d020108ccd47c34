"""Hypothesis strategies for operators and catalog expressions."""

from __future__ import annotations

from fractions import Fraction

from hypothesis import strategies as st

from signumcalc import SYM, Dimension, World
from signumcalc.distributions import DistExpr, Lin
from signumcalc.operators import OperatorExpr, macros

GENERATORS = ("r", "rinv", "w", "dr", "dw")
DIMS = st.sampled_from([SYM, Dimension(2), Dimension(3), Dimension(4), Dimension(5)])
small_fraction = st.builds(Fraction, st.integers(-4, 4), st.integers(1, 3))
nonzero_fraction = small_fraction.filter(bool)


@st.composite
def words(draw, max_len: int = 4, names=GENERATORS):
    return tuple(draw(st.lists(st.sampled_from(names), min_size=1, max_size=max_len)))


def word_expr(word, dim) -> OperatorExpr:
    g = macros(dim)
    out = g[word[0]]
    for name in word[1:]:
        out = out * g[name]
    return out


@st.composite
def operators(draw, dim=None, max_terms: int = 3, max_len: int = 4, names=GENERATORS):
    dim = dim if dim is not None else draw(DIMS)
    out = None
    for _ in range(draw(st.integers(1, max_terms))):
        term = word_expr(draw(words(max_len, names)), dim) * draw(nonzero_fraction)
        out = term if out is None else out + term
    return out


@st.composite
def catalog_exprs(draw, world=None, dim=None, kmin: int = 0, kmax: int = 4, origin: bool = True):
    """Random sums ``c r^k w^e`` plus optional origin terms in the proper world."""
    world = world if world is not None else draw(st.sampled_from(list(World)))
    dim = dim if dim is not None else draw(DIMS)
    reg = {}
    for _ in range(draw(st.integers(1, 3))):
        key = (draw(st.integers(kmin, kmax)), draw(st.integers(0, 1)))
        reg[key] = draw(nonzero_fraction)
    org = {}
    if origin:
        for n in draw(st.lists(st.integers(0, 2), max_size=2, unique=True)):
            org[(world.proper_omega, n)] = Lin.const(draw(nonzero_fraction))
    return DistExpr(world, dim, reg, org)
