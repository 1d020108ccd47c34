from __future__ import annotations

import pytest

from signumcalc import SYM, Dimension, World, normalize, parse_distribution, parse_operator
from signumcalc.errors import DivisionRuleMissing, ParseError, WorldError


@pytest.mark.parametrize(
    "text, column",
    [
        ("w**", 3),
        ("(r", 3),
        ("dr^-1", 3),
        ("foo", 1),
        ("r^", 3),
    ],
)
def test_operator_parse_errors_carry_columns(text, column):
    with pytest.raises(ParseError) as info:
        parse_operator(text)
    assert info.value.column == column


def test_unicode_aliases():
    assert normalize(parse_operator("∂_r ω")) == normalize(parse_operator("dr*w"))
    assert normalize(parse_operator("Δ^*")) == normalize(parse_operator("LapStar"))
    assert normalize(parse_operator("Γ")) == normalize(parse_operator("Gamma"))
    assert parse_distribution("∂δ", World.DIST) == parse_distribution("ddelta", World.DIST)
    assert parse_distribution("Δδ", World.DIST) == parse_distribution("lapdelta", World.DIST)


def test_juxtaposition_binds_like_product():
    assert normalize(parse_operator("w dr")) == normalize(parse_operator("w*dr"))


@pytest.mark.parametrize(
    "text, printed",
    [
        ("x^3", "x^3"),
        ("1/x", "-rinv*w"),
        ("r^-2", "rinv^2"),
        ("(m-1)/r", "(m - 1)*rinv"),
        ("c1*delta", "delta*c1"),
    ],
)
def test_distribution_printing(text, printed):
    assert str(parse_distribution(text, World.DIST)) == printed


@pytest.mark.parametrize("text", ["delta^2", "r*delta", "2/0"])
def test_distribution_parse_errors(text):
    with pytest.raises(ParseError):
        parse_distribution(text, World.DIST)


def test_origin_term_in_wrong_world():
    with pytest.raises(WorldError):
        parse_distribution("ddelta", World.SIGNUM)
    assert str(parse_distribution("w*ddelta", World.SIGNUM)) == "w*ddelta"


def test_regularity_depends_on_dimension():
    assert str(parse_distribution("rinv^2", World.DIST, Dimension(3))) == "rinv^2"
    t = parse_distribution("r^2", World.DIST, SYM)
    assert str(t.specialize(4)) == "r^2"


def test_origin_order_cap():
    from signumcalc.distributions import DistExpr, MAX_ORDER

    with pytest.raises(DivisionRuleMissing):
        DistExpr.delta(MAX_ORDER + 1)
