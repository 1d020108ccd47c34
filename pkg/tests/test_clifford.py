from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from signumcalc import clifford as cl
from signumcalc.clifford import Field, Multivector, dot_and_wedge, geometric_product
from signumcalc.errors import DimensionError, DimensionMismatch, GradeError, OriginSingular


def test_basis_vectors_square_to_minus_one():
    for m in (1, 2, 3, 4):
        for j in range(1, m + 1):
            e = Multivector.basis(m, j)
            assert (e * e).allclose(Multivector.scalar(m, -1.0))


def test_basis_vectors_anticommute():
    e1, e2 = Multivector.basis(3, 1), Multivector.basis(3, 2)
    assert (e1 * e2 + e2 * e1).allclose(Multivector(3))
    assert (e1 * e2).allclose(Multivector.blade(3, 1, 2))


def test_pseudoscalar_square_in_three_dimensions():
    e123 = Multivector.blade(3, 1, 2, 3)
    # (e1 e2 e3)^2 = +1 for e_j^2 = -1 in three dimensions
    assert (e123 * e123).allclose(Multivector.scalar(3, 1.0))


def test_vector_square_is_minus_norm_squared():
    x = Multivector.vector([1.0, 2.0, -2.0])
    assert (x * x).allclose(Multivector.scalar(3, -9.0))


def test_dot_and_wedge_split():
    x = Multivector.vector([1.0, 0.0, 0.0])
    y = Multivector.vector([1.0, 1.0, 0.0])
    dot, wedge = dot_and_wedge(x, y)
    assert dot == pytest.approx(-1.0)
    assert wedge.allclose(Multivector.blade(3, 1, 2))
    with pytest.raises(GradeError):
        dot_and_wedge(Multivector.blade(3, 1, 2), y)


def test_dimension_errors():
    with pytest.raises(DimensionMismatch):
        geometric_product(Multivector.basis(2, 1), Multivector.basis(3, 1))
    with pytest.raises(DimensionError):
        Multivector(0)


vectors = st.lists(st.floats(-3, 3), min_size=3, max_size=3)
mvs = st.lists(st.floats(-2, 2), min_size=8, max_size=8).map(lambda v: Multivector(3, np.array(v)))


@settings(max_examples=200, deadline=None)
@given(mvs, mvs, mvs)
def test_geometric_product_is_associative_and_distributive(a, b, c):
    assert ((a * b) * c).allclose(a * (b * c), 1e-9)
    assert (a * (b + c)).allclose(a * b + a * c, 1e-9)


@settings(max_examples=200, deadline=None)
@given(vectors, vectors)
def test_vector_product_symmetric_part_is_the_dot_product(u, v):
    x, y = Multivector.vector(u), Multivector.vector(v)
    sym = (x * y + y * x) / 2.0
    assert sym.allclose(Multivector.scalar(3, -float(np.dot(u, v))), 1e-9)


# fields ---------------------------------------------------------------------------


def test_field_partials_match_finite_differences():
    rng = np.random.default_rng(3)
    f = cl.random_polynomial_field(3, rng) * Field.r_power(3, 1)
    p = np.array([0.4, -0.7, 0.9])
    for j in (1, 2, 3):
        assert f.partial(j)(p).allclose(cl.fd_partial(f, j, p), 1e-6)


def test_omega_squares_to_minus_one_pointwise():
    w = Field.omega(3)
    assert (w * w)(np.array([0.3, 0.2, -1.1])).allclose(Multivector.scalar(3, -1.0), 1e-12)


def test_dirac_squared_is_minus_laplacian():
    rng = np.random.default_rng(0)
    fields = cl.standard_fields(3, rng)
    rep = cl.identity_check(
        cl.field_side(lambda f: cl.dirac(cl.dirac(f))),
        cl.field_side(lambda f: -cl.laplace(f)),
        fields,
        cl.sample_points(3, 8, rng),
        1e-10,
    )
    assert rep.passed, rep


def test_euler_on_homogeneous_field():
    x3 = Field.x(3) * Field.x(3) * Field.x(3)
    p = np.array([0.5, 0.1, -0.3])
    assert cl.euler(x3)(p).allclose(x3(p) * 3.0, 1e-12)


def test_pointwise_operator_excludes_the_origin():
    with pytest.raises(OriginSingular):
        cl.pointwise_operator("Lap", Field.x(3), [0.0, 0.0, 0.0])
    with pytest.raises(KeyError):
        cl.pointwise_operator("nope", Field.x(3), [1.0, 0.0, 0.0])
    with pytest.raises(DimensionError):
        cl.pointwise_operator("d", Field.x(3), [1.0, 0.0, 0.0])


def test_spherical_chart_dirac_matches_cartesian():
    rng = np.random.default_rng(1)
    for m in (2, 3):
        for f in cl.standard_fields(m, rng)[:4]:
            for p in cl.sample_points(m, 4, rng):
                assert cl.spherical_signum_dirac_at(f, p).allclose(cl.signum_dirac(f)(p), 1e-8)
