from __future__ import annotations

import pytest

from signumcalc import SYM, Dimension, cross_partner, equals, normalize, parse_operator, signum_partner
from signumcalc.errors import DimensionMismatch
from signumcalc.operators import cartesian_decomposition, eval_at_dimension, macros, op, redexes, rewrite_once


def nf(text, dim=SYM):
    return normalize(parse_operator(text, dim))


@pytest.mark.parametrize(
    "lhs, rhs",
    [
        ("dr*r - r*dr", "1"),
        ("w*w", "-1"),
        ("r*rinv", "1"),
        ("rinv*r", "1"),
        ("x*xinv", "1"),
        ("xinv*x", "1"),
        ("dw*w", "-(m-1) - w*dw"),
        ("E*x - x*E", "x"),
        ("Gamma*x - x*Gamma", "-2*r*dw + (m-1)*x"),
    ],
)
def test_commutation_rules(lhs, rhs):
    assert nf(lhs) == nf(rhs)


def test_normal_form_text():
    assert str(nf("Lap")) == "-rinv^2*dw^2 + rinv^2*w*dw + (m - 1)*rinv*dr + dr^2"
    assert str(nf("LapStar")) == "-dw^2 + w*dw"
    assert str(nf("ZStar")) == "-(m - 1) - dw^2 - w*dw"


def test_dirac_squares_to_minus_laplacian():
    assert equals(parse_operator("Dirac*Dirac"), parse_operator("-Lap"))
    assert equals(parse_operator("D*D"), parse_operator("-Z"))


def test_partners_of_named_operators():
    assert signum_partner(parse_operator("Dirac")) == nf("D")
    assert signum_partner(parse_operator("Lap")) == nf("Z")
    assert signum_partner(parse_operator("LapStar")) == nf("ZStar")
    assert cross_partner(parse_operator("w")) == nf("-w")
    assert cross_partner(parse_operator("r")) == nf("-r")


def test_concrete_dimension_uses_its_value_in_rules():
    assert str(nf("dw*w", Dimension(3))) == "-2 - w*dw"
    assert eval_at_dimension(nf("dw*w"), 3) == nf("dw*w", Dimension(3))
    with pytest.raises(DimensionMismatch):
        eval_at_dimension(nf("w", Dimension(3)), 4)


def test_mixing_dimensions_is_rejected():
    with pytest.raises(DimensionMismatch):
        op("r", Dimension(3)) * op("r", Dimension(4))


def test_cartesian_decomposition():
    assert cartesian_decomposition(nf("Lap")) is not None
    assert cartesian_decomposition(nf("E")) is not None
    assert cartesian_decomposition(nf("dr")) is None
    assert cartesian_decomposition(nf("rinv")) is None


def test_single_rewrite_step_is_local():
    g = macros()
    word = (g["dr"] * g["r"]).terms[0][1]
    assert redexes(word) == [0]
    out = rewrite_once(word, 0)
    # d_r r = 1 + r d_r
    assert sorted((str(c), tuple(str(g) for g in w)) for c, w in out) == [("1", ()), ("1", ("r", "dr"))]
    with pytest.raises(ValueError):
        rewrite_once(out[1][1] if out[1][1] else out[0][1], 0)


def test_negative_power_rejected():
    with pytest.raises(ValueError):
        op("r") ** -1
