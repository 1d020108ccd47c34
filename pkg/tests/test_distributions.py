from __future__ import annotations

import pytest

from signumcalc import SYM, Coefficient, Dimension, World, parse_distribution, parse_operator
from signumcalc import distributions as dc
from signumcalc.distributions import EquivClass, as_expr, class_equal
from signumcalc.errors import NonIntegrable, WorldError

m = Coefficient.m()


def D(text, dim=SYM):
    return parse_distribution(text, World.DIST, dim)


def S(text, dim=SYM):
    return parse_distribution(text, World.SIGNUM, dim)


def same(got, text, world=World.DIST, exact=True):
    e = as_expr(got)
    assert e == parse_distribution(text, world, e.dim), f"{e} != {text}"
    if exact and isinstance(got, EquivClass):
        assert got.is_exact()


# world correspondence -----------------------------------------------------


def test_vee_and_wedge():
    same(dc.vee(D("delta")), "w*delta", World.SIGNUM)
    same(dc.vee(D("x")), "-r", World.SIGNUM)
    same(dc.wedge(S("w*delta")), "delta")
    same(dc.wedge(S("x")), "r")
    with pytest.raises(WorldError):
        dc.vee(S("w"))
    with pytest.raises(WorldError):
        dc.wedge(D("w"))


def test_products_by_omega_and_r():
    same(dc.mul_omega(S("w")), "-1")
    same(dc.mul_r(D("delta")), "0", World.SIGNUM)
    same(dc.mul_r(D("ddelta")), "-m*w*delta", World.SIGNUM)
    t = D("x^3 + r + delta")
    assert as_expr(dc.mul_r(as_expr(dc.mul_r(t)))) == as_expr(dc.mul_r2(t))


# derivatives ------------------------------------------------------------------


def test_radial_derivative_of_delta_is_unique():
    got = dc.radial_derivative(D("delta"))
    same(got, "-w*ddelta", World.SIGNUM)


def test_radial_derivative_of_x_has_one_free_constant():
    got = dc.radial_derivative(D("x"))
    assert len(got.free_atoms) == 1
    c = got.free_atoms[0].name
    same(dc.mul_omega(got.expr), f"-1 - {c}*delta", exact=False)


def test_radial_derivative_of_r_is_unique():
    same(dc.radial_derivative(D("r")), "1", World.SIGNUM)


def test_angular_derivative():
    same(dc.angular_derivative(D("delta")), "0", World.SIGNUM)
    same(dc.angular_derivative(D("x")), "-(m-1)*r", World.SIGNUM)
    same(dc.angular_derivative(D("r^2")), "0", World.SIGNUM)


def test_exact_operator_actions():
    same(dc.euler_apply(D("delta")), "-m*delta")
    same(dc.gamma_apply(D("delta")), "0")
    same(dc.laplace_apply(D("x^3")), "-2*(m+2)*x")
    same(dc.laplace_beltrami_apply(D("x^3")), "-(m-1)*x^3")
    same(dc.laplace_apply(D("r")), "(m-1)*rinv")


def test_dirac_on_a_signumdistribution_is_a_class():
    got = dc.dirac_apply(S("x"))
    assert isinstance(got, EquivClass) and len(got.free_atoms) == 1
    assert got.representative == S("-m")


def test_gamma_of_omega_t():
    # Gamma(w T) = (m - 1) w T - d_w T
    t = D("r^2 + x^3 + r*w")
    lhs = as_expr(dc.gamma_apply(dc.mul_omega(t)))
    rhs = as_expr(dc.mul_omega(t)).scale(m - 1) - as_expr(dc.angular_derivative(t))
    assert lhs == rhs


# divisions ------------------------------------------------------------------------


def test_divisions():
    same(dc.divide_by_x(D("delta")), "1/m*ddelta")
    same(dc.divide_by_r(D("delta")), "1/m*w*ddelta", World.SIGNUM)
    same(dc.divide_by_r(D("r^2")), "r", World.SIGNUM)
    same(dc.divide_by_r(dc.radial_derivative(D("delta")).expr), "-1/2*lapdelta")
    q = dc.divide_by_x(D("x"))
    assert len(q.free_atoms) == 1 and q.representative == D("1")


def test_free_atoms_are_annihilated_by_the_multiplier():
    q = dc.divide_by_x(D("r^2*w"))
    assert q.free_atoms
    atoms_only = q.expr - q.representative
    assert as_expr(dc.mul_x(atoms_only)).is_zero()


def test_atoms_are_unique_per_production_site():
    f = dc.AtomFactory()
    a = dc.divide_by_x(D("x"), f)
    b = dc.divide_by_x(D("x"), f)
    assert set(a.free_atoms).isdisjoint(b.free_atoms)
    assert class_equal(a, b)


def test_class_equality_ignores_atom_names_but_not_representatives():
    a = dc.divide_by_x(D("x"))
    c = dc.divide_by_x(D("2*x"))
    assert not class_equal(a, c)


def test_signum_operator_application():
    same(dc.signum_op_apply(parse_operator("D"), S("r")), "m*w", World.SIGNUM)
    same(dc.signum_op_apply(parse_operator("E"), S("w*delta")), "-m*w*delta", World.SIGNUM)


def test_non_integrable_results_are_reported():
    with pytest.raises(NonIntegrable):
        dc.check_regular(as_expr(dc.apply_operator(parse_operator("Lap", Dimension(2)), D("w", Dimension(2)))))


# decompositions ----------------------------------------------------------------


def _names(decomp):
    return [a.name for p in decomp.parts for a in p.free_atoms]


def test_laplace_parts_of_x_cubed():
    dec = dc.laplace_parts(D("x^3"))
    assert dec.total == D("-2*(m+2)*x")
    reps = [p.representative for p in dec.parts]
    assert reps == [D("-6*x"), D("-3*x"), D("(m-1)*x")]
    rep = dc.entanglement_check(dec.parts, dec.total, dec.system, dec.weights)
    assert rep["matches"]
    assert len(dec.system.equation_strings()) == 2


def test_laplace_parts_of_r():
    dec = dc.laplace_parts(D("r"))
    assert [p.representative for p in dec.parts] == [D("0"), D("rinv"), D("0")]
    assert len(dec.system.equation_strings()) == 1


def test_laplace_parts_of_delta_are_unique():
    dec = dc.laplace_parts(D("delta"))
    assert [as_expr(p) for p in dec.parts] == [D("(m+1)/2*lapdelta"), D("-1/2*lapdelta"), D("0")]
    assert dec.system.equation_strings() == []


def test_dirac_parts_of_x():
    dec = dc.dirac_parts(D("x"))
    assert dec.total == D("-m")
    assert [p.representative for p in dec.parts] == [D("-1"), D("-(m-1)")]
    c1, c2 = _names(dec)
    assert dec.system.equation_strings() == [f"{c1} + {c2} = 0"]


def test_specialized_decomposition_matches_concrete_run():
    from signumcalc.serialize import canonical_json

    for m0 in (2, 3, 4, 5):
        sym = dc.laplace_parts(D("x^3"), dc.AtomFactory()).specialize(m0)
        conc = dc.laplace_parts(D("x^3", Dimension(m0)), dc.AtomFactory())
        assert canonical_json(sym) == canonical_json(conc)
