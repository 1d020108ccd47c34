from __future__ import annotations

import math

import numpy as np
import pytest

from signumcalc import Dimension, World, parse_distribution
from signumcalc import distributions as dc
from signumcalc import oracle as orc
from signumcalc.clifford import Field, Multivector
from signumcalc.errors import DimensionError, DomainError, NonIntegrable


def test_sphere_area():
    assert orc.sphere_area(2) == pytest.approx(2 * math.pi, abs=1e-14)
    assert orc.sphere_area(3) == pytest.approx(4 * math.pi, abs=1e-14)
    assert orc.sphere_area(4) == pytest.approx(2 * math.pi**2, abs=1e-13)


@pytest.mark.parametrize("m", [2, 3, 4])
def test_sphere_weights_sum_to_the_area(m):
    _nodes, w = orc.sphere_grid(m)
    assert w.sum() == pytest.approx(orc.sphere_area(m), abs=1e-12)


@pytest.mark.parametrize("m", [2, 3, 4])
def test_sphere_grid_integrates_polynomials_exactly(m):
    nodes, w = orc.sphere_grid(m)
    # mean of w_1^2 over the sphere is 1/m, of w_1^4 is 3/(m(m+2))
    assert (w @ nodes[:, 0] ** 2) / orc.sphere_area(m) == pytest.approx(1 / m, abs=1e-12)
    assert (w @ nodes[:, 0] ** 4) / orc.sphere_area(m) == pytest.approx(3 / (m * (m + 2)), abs=1e-12)
    assert abs(w @ nodes[:, 0] ** 3) < 1e-12


def test_radial_grid_rejects_non_integrable_weights():
    with pytest.raises(NonIntegrable):
        orc.radial_grid(1.0, -1.0)


def test_gaussian_mean_is_its_profile():
    g = orc.gaussian(3)
    for r in (0.0, 0.5, 1.7):
        assert orc.spherical_mean(g, r).scalar_part == pytest.approx(math.exp(-r * r), abs=1e-10)


def test_bump_is_compactly_supported():
    phi = orc.bump(3, R=0.8)
    assert phi.at([0.0, 0.0, 0.9]).norm() == 0.0
    assert phi.at([0.0, 0.0, 0.0]).scalar_part == pytest.approx(1.0)
    with pytest.raises(ValueError):
        orc.bump(3, k=2)


def test_test_function_partials_match_finite_differences():
    rng = np.random.default_rng(5)
    phi = orc.bump_family(3, 1, rng)[0]
    p = np.array([0.2, -0.1, 0.3])
    h = 1e-5
    for j in (1, 2, 3):
        e = np.zeros(3)
        e[j - 1] = h
        fd = (phi.at(p + e) - phi.at(p - e)) / (2 * h)
        assert phi.partial(j).at(p).allclose(fd, 1e-6)


def test_delta_pairings():
    m = 3
    phi = orc.gaussian(m, 1.0, Field.const(1.0, m) + Field.coord(m, 1))
    dim = Dimension(m)
    delta = parse_distribution("delta", World.DIST, dim)
    assert orc.pair(delta, phi).allclose(phi.at(np.zeros(m)), 1e-14)
    assert orc.pair(dc.vee(delta), phi).allclose(-phi.at(np.zeros(m)), 1e-14)
    # <d_j delta, phi> = -d_j phi(0): the Clifford aggregate gives -sum e_j d_j phi(0)
    dd = parse_distribution("ddelta", World.DIST, dim)
    expected = -(Multivector.basis(m, 1) * 1.0)
    assert orc.pair(dd, phi).allclose(expected, 1e-12)


def test_pairing_needs_concrete_exact_input():
    phi = orc.gaussian(3)
    with pytest.raises(DimensionError):
        orc.pair(parse_distribution("r", World.DIST), phi)
    with pytest.raises(DomainError):
        orc.pair(dc.divide_by_x(parse_distribution("x", World.DIST, Dimension(3))), phi)
    with pytest.raises(NonIntegrable):
        orc.pair(parse_distribution("rinv^3", World.DIST, Dimension(3)).scale(1), phi)


def test_two_integrators_agree_on_r():
    rng = np.random.default_rng(0)
    phi = orc.bump_family(3, 1, rng)[0]
    r = parse_distribution("r", World.DIST, Dimension(3))
    a, b = orc.pair(r, phi), orc.integrate_regular_cartesian(r, phi)
    assert (a - b).norm() <= 1e-5 * a.norm()


def test_even_distributions_vanish_on_odd_test_functions():
    m = 3
    odd = orc.gaussian(m, 1.0, Field.coord(m, 1))
    for src in ("r", "r^2", "1", "delta", "lapdelta"):
        t = parse_distribution(src, World.DIST, Dimension(m))
        assert orc.pair(t, odd).norm() < 1e-12


def test_euler_adjoint_on_x_cubed():
    rng = np.random.default_rng(2)
    phis = orc.bump_family(3, 3, rng)
    x3 = parse_distribution("x^3", World.DIST, Dimension(3))
    for c in orc.adjoint_check("E", x3, phis, 1e-6):
        assert c.passed, c.to_json()


def test_laplace_adjoint_on_r():
    rng = np.random.default_rng(4)
    phis = orc.bump_family(3, 5, rng)
    r = parse_distribution("r", World.DIST, Dimension(3))
    for c in orc.adjoint_check("Lap", r, phis, 1e-6):
        assert c.passed, c.to_json()


def test_second_mean_derivative_with_vanishing_laplacian():
    m = 3
    # x_1 x_2 is harmonic and odd in each variable: the mean stays 0
    phi = orc.gaussian(m, 1.0, Field.coord(m, 1) * Field.coord(m, 2))
    (c,) = orc.delta_radial_coefficient_check([phi])
    assert c.passed and abs(c.lhs) < 1e-8


def test_radial_coefficient_consistency_factor():
    from signumcalc.coeff import Coefficient

    m = Coefficient.m()
    assert (m * (m + 1) / 2) / m == (m + 1) / 2


def test_check_report_fields():
    c = orc.Check("demo", 1.0, 1.0 + 1e-9, 1e-8)
    out = c.to_json()
    assert out["pass"] and set(out) >= {"id", "lhs", "rhs", "abs_dev", "rel_dev", "tolerance"}
