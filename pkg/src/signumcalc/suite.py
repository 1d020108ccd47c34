"""Numeric verification suites at a concrete dimension.

``identity_suite`` compares operator identities pointwise on Clifford-valued
fields; ``quadrature_suite`` pairs symbolic results with test functions.
Both return lists of JSON-ready check records with an explicit ``pass`` flag.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from . import clifford as cl
from . import distributions as dc
from . import oracle as orc
from .clifford import Field, Multivector, field_side, identity_check
from .coeff import Dimension
from .distributions import World
from .errors import DimensionError
from .parser import parse_distribution

IDENTITY_TOL = 1e-8
NUMERIC_DIMS = (2, 3, 4)
CHART_DIMS = (2, 3)


def _sum_ej_dj(f: Field) -> Field:
    out = Field(f.m)
    for j in range(1, f.m + 1):
        out = out + Multivector.basis(f.m, j) * cl.d_j(f, j)
    return out


def _dirac_via_dj(f: Field) -> Field:
    """``sum e_j d_j + (m - 1) x / r^2``."""
    m = f.m
    return _sum_ej_dj(f) + Field.r_power(m, -2) * Field.x(m) * f.scale(m - 1)


def _signum_dirac_via_dj(f: Field) -> Field:
    """``-sum e_j d_j + 2 x E / r^2``."""
    m = f.m
    return -_sum_ej_dj(f) + Field.r_power(m, -2) * Field.x(m) * cl.euler(f).scale(2.0)


def _spherical_dirac(f: Field, p: np.ndarray) -> Multivector:
    return cl.spherical_radial_dirac_at(f, p) + cl.spherical_angular_dirac_at(f, p)


def identity_suite(m: int, seed: int = 0, samples: int = 24, tol: float = IDENTITY_TOL) -> list[dict]:
    """Pointwise operator identities on random points and fields (``m`` in 2..4; charts need m <= 3)."""
    if m not in NUMERIC_DIMS:
        raise DimensionError(f"numeric identities run at m in {NUMERIC_DIMS}, got {m}")
    rng = np.random.default_rng(seed)
    pts = cl.sample_points(m, samples, rng)
    fields = cl.standard_fields(m, rng)
    s = field_side
    checks = [
        identity_check(s(cl.laplace_beltrami), s(cl.sum_l_squared), fields, pts, tol, "LapStar = sum L_jk^2"),
        identity_check(s(cl.laplace_beltrami_gamma), s(cl.sum_l_squared), fields, pts, tol, "(m-2)Gamma - Gamma^2 = sum L_jk^2"),
        identity_check(s(lambda f: cl.dirac(cl.dirac(f))), s(lambda f: -cl.laplace(f)), fields, pts, tol, "d^2 = -Lap"),
        identity_check(s(lambda f: cl.signum_dirac(cl.signum_dirac(f))), s(lambda f: -cl.z_op(f)), fields, pts, tol, "D^2 = -Z"),
        identity_check(s(cl.z_op), s(cl.z_decomposed), fields, pts, tol, "Z = d_r^2 + (m-1)(1/r)d_r + (1/r^2)Z*"),
        identity_check(s(cl.dirac), s(_dirac_via_dj), fields, pts, tol, "d = sum e_j d_j + (m-1) x / r^2"),
        identity_check(s(cl.signum_dirac), s(_signum_dirac_via_dj), fields, pts, tol, "D = -sum e_j d_j + 2 x E / r^2"),
        identity_check(
            s(lambda f: cl.radial_dirac(f) + cl.angular_dirac(f)), s(cl.dirac), fields, pts, tol, "w d_r + (1/r) d_w = d"
        ),
    ]
    for j in range(1, m + 1):
        checks.append(
            identity_check(
                s(lambda f, j=j: cl.d_j(f, j)), s(lambda f, j=j: cl.d_j_partner(f, j)), fields, pts, tol, f"d_{j} = w d/dx_{j} (-w)"
            )
        )
    if m in CHART_DIMS:
        checks.append(identity_check(_spherical_dirac, s(cl.dirac), fields, pts, tol, "spherical chart Dirac = sum e_j d/dx_j"))
        checks.append(
            identity_check(
                lambda f, p: cl.spherical_signum_dirac_at(f, p), s(cl.signum_dirac), fields, pts, tol, "spherical chart D = cartesian D"
            )
        )
    return [dict(c.to_json(), m=m) for c in checks]


# ---------------------------------------------------------------------------
# quadrature
# ---------------------------------------------------------------------------

ADJOINT_CASES = (
    ("Lap", "r"),
    ("Lap", "x^3"),
    ("Lap", "r^3"),
    ("Lap", "delta"),
    ("Lap", "ddelta"),
    ("E", "x^3"),
    ("E", "r^2"),
    ("E", "ddelta"),
    ("Dirac", "r"),
    ("Dirac", "x^3"),
    ("Dirac", "lapdelta"),
    ("Gamma", "x^3"),
    ("Gamma", "x"),
)


def quadrature_suite(m: int = 3, seed: int = 0, bumps: int = 5) -> list[dict]:
    """Spherical means, delta calculus and adjoint pairings at concrete ``m``."""
    if m not in NUMERIC_DIMS:
        raise DimensionError(f"quadrature runs at m in {NUMERIC_DIMS}, got {m}")
    rng = np.random.default_rng(seed)
    dim = Dimension(m)
    out: list[orc.Check] = []
    g = orc.gaussian(m)
    for r in (0.0, 0.25, 0.7, 1.3, 2.1):
        out.append(orc.Check(f"Sigma0[exp(-r^2)]({r})", orc.spherical_mean(g, r).scalar_part, float(np.exp(-r * r)), 1e-10, False))
    phis = orc.bump_family(m, bumps, rng)
    x1 = Field.coord(m, 1)
    modulated = orc.gaussian(m, 0.8, Field.const(1.0, m) + x1 + (x1 * Field.coord(m, min(2, m))).scale(0.5), "gauss*poly")
    for phi in [modulated] + phis:
        out.append(orc.Check(f"Sigma0(0) = phi(0):{phi.label}", orc.spherical_mean(phi, 0.0).scalar_part, phi.at(np.zeros(m)).scalar_part, 1e-10, False))
        for order in (1, 3):
            h = 1e-2 * min(phi.radius, 1.0)
            out.append(orc.Check(f"Sigma0^({order})(0) = 0:{phi.label}", orc.mean_derivative(phi, order, h), 0.0, 1e-6, False))
    out += orc.delta_radial_coefficient_check([g, modulated] + phis[:2])
    # two independent integrators on a regular term
    r = parse_distribution("r", World.DIST, dim)
    a, b = orc.pair(r, phis[0]), orc.integrate_regular_cartesian(r, phis[0])
    out.append(orc.MVCheck(f"<r, phi> radial grid vs cartesian grid:{phis[0].label}", a, b, 1e-5, True, {}))
    # exact delta rules
    delta = parse_distribution("delta", World.DIST, dim)
    phi = phis[0]
    out.append(orc.MVCheck("<delta, phi> = phi(0)", orc.pair(delta, phi), phi.at(np.zeros(m)), 1e-12, True, {}))
    out.append(orc.MVCheck("<vee(delta), w phi> = -phi(0)", orc.pair(dc.vee(delta), phi), -phi.at(np.zeros(m)), 1e-12, True, {}))
    # symbolic delta rules against exact origin pairings
    lap = parse_distribution("lapdelta", World.DIST, dim)
    d2 = dc.radial_derivative(dc.radial_derivative(delta))
    out += _pair_equal("d_r^2 delta = (m+1)/2 Lap delta", d2, lap.scale(Fraction(m + 1, 2)), phis)
    d1 = dc.divide_by_r(dc.radial_derivative(delta))
    out += _pair_equal("(1/r) d_r delta = -1/2 Lap delta", d1, lap.scale(Fraction(-1, 2)), phis)
    # adjoint pairings
    for op, src in ADJOINT_CASES:
        t = parse_distribution(src, World.DIST, dim)
        out += orc.adjoint_check(op, t, phis, 1e-6)
    x3 = Field.x(m) * Field.x(m) * Field.x(m)
    for f in (Field.r_power(m, 2) * x1, Field.omega(m) * Field.r_power(m, 3), x3):
        for j in range(1, m + 1):
            out += orc.dj_adjoint_check(f, phis, j, 1e-5)
    return [dict(c.to_json(), m=m) for c in out]


def _pair_equal(name: str, a, b, phis) -> list[orc.Check]:
    a = a.expr if isinstance(a, dc.EquivClass) else a
    b = b.expr if isinstance(b, dc.EquivClass) else b
    return [orc.MVCheck(f"{name}:{phi.label}", orc.pair(a, phi), orc.pair(b, phi), 1e-12, True, {}) for phi in phis]


def full_suite(m: int, seed: int = 0, tol: float = IDENTITY_TOL) -> list[dict]:
    return identity_suite(m, seed, tol=tol) + quadrature_suite(m, seed)
