"""Property-based checks of the rewriting system and the calculus."""

from __future__ import annotations

import random

import pytest
from hypothesis import HealthCheck, assume, given, settings
from hypothesis import strategies as st

from signumcalc import SYM, World, cross_partner, normalize, signum_partner
from signumcalc import distributions as dc
from signumcalc.distributions import as_expr
from signumcalc.errors import DomainError
from signumcalc.operators import macros, normalize_by_rewriting
from signumcalc.parser import parse_distribution, parse_operator

from strategies import DIMS, catalog_exprs, operators, small_fraction

FAST = settings(max_examples=200, deadline=None, suppress_health_check=[HealthCheck.too_slow])


@settings(max_examples=500, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(operators(max_len=5), st.integers(0, 2**32 - 1))
def test_rewriting_in_random_order_reaches_the_normal_form(e, seed):
    assert normalize_by_rewriting(e, random.Random(seed)) == normalize(e)


@FAST
@given(st.data())
def test_normal_form_is_idempotent_and_prints_back(data):
    dim = data.draw(DIMS)
    nf = normalize(data.draw(operators(dim)))
    assert normalize(nf.to_expr()) == nf
    assert normalize(parse_operator(str(nf), dim)) == nf


@FAST
@given(st.data())
def test_composition_is_associative(data):
    dim = data.draw(DIMS)
    a, b, c = (data.draw(operators(dim, max_terms=2, max_len=3)) for _ in range(3))
    assert normalize((a * b) * c) == normalize(a * (b * c))


@FAST
@given(st.data())
def test_partners_are_involutive_homomorphisms(data):
    dim = data.draw(DIMS)
    p = data.draw(operators(dim, max_terms=2, max_len=3))
    q = data.draw(operators(dim, max_terms=2, max_len=3))
    assert signum_partner(signum_partner(p)) == normalize(p)
    assert cross_partner(cross_partner(p)) == normalize(p)
    assert signum_partner(p * q) == normalize(signum_partner(p).to_expr() * signum_partner(q).to_expr())
    assert signum_partner(p + q) == normalize(signum_partner(p).to_expr() + signum_partner(q).to_expr())


EXACT_OPS = ("x", "E", "Gamma", "Dirac", "LapStar", "Lap")


@FAST
@given(st.data())
def test_exact_operators_act_linearly(data):
    dim = data.draw(DIMS)
    world = data.draw(st.sampled_from(list(World)))
    name = data.draw(st.sampled_from(EXACT_OPS))
    s = data.draw(catalog_exprs(world, dim))
    t = data.draw(catalog_exprs(world, dim))
    a, b = data.draw(small_fraction), data.draw(small_fraction)
    p = macros(dim)[name]
    if world is World.SIGNUM:
        p = signum_partner(p).to_expr()
    try:
        lhs = as_expr(dc.apply_operator(p, s.scale(a) + t.scale(b)))
        rhs = as_expr(dc.apply_operator(p, s)).scale(a) + as_expr(dc.apply_operator(p, t)).scale(b)
    except DomainError:
        assume(False)
    assert lhs == rhs


@FAST
@given(catalog_exprs(World.DIST))
def test_vee_then_wedge_is_identity(t):
    assert dc.wedge(dc.vee(t)) == t


@FAST
@given(catalog_exprs(World.SIGNUM))
def test_wedge_then_vee_is_identity(u):
    assert dc.vee(dc.wedge(u)) == u


@FAST
@given(catalog_exprs())
def test_omega_twice_is_minus_identity(t):
    once = as_expr(dc.mul_omega(t))
    assert once.world is not t.world
    assert as_expr(dc.mul_omega(once)) == -t


@FAST
@given(catalog_exprs(World.DIST, kmin=0))
def test_division_by_x_multiplies_back(t):
    try:
        q = dc.divide_by_x(t)
    except DomainError:
        assume(False)
    assert as_expr(dc.mul_x(q.expr)) == t


@FAST
@given(catalog_exprs(kmin=0, origin=False))
def test_division_by_r_multiplies_back(t):
    try:
        q = dc.divide_by_r(t)
    except DomainError:
        assume(False)
    assert as_expr(dc.mul_r(q.expr)) == t


@FAST
@given(catalog_exprs(), st.sampled_from(["r", "w", "dr", "dw"]))
def test_single_step_operators_flip_the_world(t, name):
    try:
        out = as_expr(dc.apply_operator(macros(t.dim)[name], t))
    except DomainError:
        assume(False)
    assert out.world is not t.world


@FAST
@given(catalog_exprs(World.DIST), st.sampled_from(["E", "Gamma", "Lap", "LapStar", "Dirac*Dirac"]))
def test_even_operators_preserve_the_world(t, src):
    try:
        out = as_expr(dc.apply_operator(parse_operator(src, t.dim), t))
    except DomainError:
        assume(False)
    assert out.world is t.world


@FAST
@given(catalog_exprs())
def test_omega_flips_every_term_parity(t):
    flipped = as_expr(dc.mul_omega(t))
    assert {(p + 1) % 2 for p in t.term_parities()} == flipped.term_parities()


@FAST
@given(catalog_exprs())
def test_distribution_text_round_trips(t):
    text = str(t)
    again = parse_distribution(text, t.world, t.dim)
    assert again == t
    assert str(again) == text


@FAST
@given(catalog_exprs(dim=SYM), st.sampled_from([2, 3, 4, 5]))
def test_specialization_commutes_with_the_omega_flip(t, m0):
    assert as_expr(dc.mul_omega(t)).specialize(m0) == as_expr(dc.mul_omega(t.specialize(m0)))


@pytest.mark.parametrize("m0", [2, 3, 4, 5])
@FAST
@given(e=operators(dim=SYM, max_terms=2, max_len=3))
def test_partner_commutes_with_specialization(e, m0):
    from signumcalc.operators import eval_at_dimension

    concrete = eval_at_dimension(e, m0)
    assert eval_at_dimension(signum_partner(e), m0) == signum_partner(concrete)
