from __future__ import annotations

import numpy as np
import pytest

from signumcalc import Dimension, World, parse_distribution
from signumcalc import clifford as cl
from signumcalc.clifford import Field
from signumcalc.components import cartesian_derivative, dj_apply
from signumcalc.errors import UnsupportedForDj


def S(text, dim=Dimension(3)):
    return parse_distribution(text, World.SIGNUM, dim)


def test_cartesian_derivative_of_omega():
    got = cartesian_derivative("j", S("w"))
    assert str(got) == "[rinv*e_j - rinv*w_j*w]"


def test_d_j_of_one():
    assert str(dj_apply("j", S("1"))) == "-rinv*w*e_j - rinv*w_j"


@pytest.mark.parametrize("src, field", [("r^2", lambda m: Field.r_power(m, 2)), ("r^3*w", lambda m: Field.r_power(m, 3) * Field.omega(m)), ("w", Field.omega)])
def test_closed_forms_match_pointwise_derivatives(src, field):
    m = 3
    f = field(m)
    rng = np.random.default_rng(0)
    for j in range(1, m + 1):
        cd = cartesian_derivative(j, S(src))
        dj = dj_apply(j, S(src))
        for p in cl.sample_points(m, 5, rng):
            assert cd.expr.evaluate(p).allclose(f.partial(j)(p), 1e-12)
            assert dj.evaluate(p).allclose(cl.d_j(f, j)(p), 1e-12)


@pytest.mark.parametrize("src", ["rinv", "w*delta", "r + w*delta"])
def test_outside_the_sub_catalog(src):
    with pytest.raises(UnsupportedForDj):
        cartesian_derivative(1, S(src))


def test_index_checks():
    with pytest.raises(UnsupportedForDj):
        cartesian_derivative(4, S("w"))
    with pytest.raises(UnsupportedForDj):
        cartesian_derivative(0, S("w"))
    with pytest.raises(UnsupportedForDj):
        dj_apply("k", S("w"))
    with pytest.raises(UnsupportedForDj):
        dj_apply(1, parse_distribution("w", World.DIST, Dimension(3)))
