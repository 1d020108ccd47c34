"""Composite actions of two single-step operators, checked as class equalities.

Each check composes the single-step actions (multiplication by ``r`` and
``w``, the radial and angular derivatives) and compares with the operator they
should reproduce.  Relation ``equal`` requires equal classes, ``contains``
asks the left class to contain the right side and ``within`` asks the left
class to lie inside the right one.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable

from . import distributions as dc
from .coeff import SYM, Dimension
from .errors import DomainError
from .distributions import AtomFactory, DistExpr, World, as_expr, class_equal


def class_contains(big, small) -> bool:
    """``small`` lies in ``big``: representatives differ along free directions of ``big`` only."""
    eb, es = as_expr(big), as_expr(small)
    if eb.world != es.world or eb.dim != es.dim:
        return False
    dirs = dc.EquivClass(eb).free_directions()
    if not dc.EquivClass(es).free_directions() <= dirs:
        return False
    diff = eb.representative() - es.representative()
    return not diff.regular and all(key in dirs for key in diff.origin)


def _f() -> AtomFactory:
    return AtomFactory()


def _ddr(t):
    return dc.radial_derivative(t, _f())


def _lhs_rr(t):
    return dc.mul_r(dc.mul_r(t))


def _lhs_rw(t):
    return dc.mul_r(dc.mul_omega(t))


def _lhs_r_dr(t):
    return dc.mul_r(_ddr(t))


def _lhs_r_dw(t):
    return dc.mul_r(dc.angular_derivative(t))


def _lhs_ww(t):
    return dc.mul_omega(dc.mul_omega(t))


def _lhs_w_dr(t):
    return dc.mul_omega(_ddr(t))


def _lhs_w_dw(t):
    return dc.mul_omega(dc.angular_derivative(t))


def _lhs_dr_dr(t):
    return dc.radial_derivative(_ddr(t), _f())


def _rhs_dr2_template(t):
    return dc.laplace_parts(t).parts[0]


def _lhs_dr_dw(t):
    return dc.radial_derivative(dc.angular_derivative(t), _f())


def _rhs_inv_x_e_gamma(t):
    return dc.divide_by_x(-dc.euler_apply(dc.gamma_apply(t)), _f())


def _lhs_dw_dw(t):
    return dc.angular_derivative(dc.angular_derivative(t))


def _rhs_dw2(t):
    """``d_w^2 = Gamma^2 - (m - 1) Gamma`` applied exactly."""
    g = dc.gamma_apply(t)
    return dc.gamma_apply(g) - g.scale(t.dim.m - 1)


@dataclass(frozen=True)
class CompositeCheck:
    id: str
    statement: str
    lhs: Callable
    rhs: Callable
    relation: str = "equal"


COMPOSITE_SUITE: tuple[CompositeCheck, ...] = (
    CompositeCheck("r-r", "r(r T) = r^2 T", _lhs_rr, dc.mul_r2),
    CompositeCheck("r-w", "r(w T) = x T", _lhs_rw, dc.mul_x),
    CompositeCheck("r-dr", "r[d_r T] contains E T", _lhs_r_dr, dc.euler_apply, "contains"),
    CompositeCheck("r-dw", "r(d_w T) = x Gamma T", _lhs_r_dw, lambda t: dc.mul_x(dc.gamma_apply(t))),
    CompositeCheck("w-w", "w(w T) = -T", _lhs_ww, lambda t: -t),
    CompositeCheck("w-dr", "w[d_r T] = [(w d_r) T]", _lhs_w_dr, lambda t: dc.radial_dirac(t, _f())),
    CompositeCheck("w-dw", "w(d_w T) = -Gamma T", _lhs_w_dw, lambda t: -dc.gamma_apply(t)),
    CompositeCheck("dr-dr", "d_r[d_r T] lies in the second radial derivative template class", _lhs_dr_dr, _rhs_dr2_template, "within"),
    CompositeCheck("dr-dw", "d_r(d_w T) = [-(1/x) E Gamma T]", _lhs_dr_dw, _rhs_inv_x_e_gamma),
    CompositeCheck("dw-dw", "d_w(d_w T) = d_w^2 T", _lhs_dw_dw, _rhs_dw2),
)


@dataclass(frozen=True)
class CompositeResult:
    id: str
    statement: str
    input: str
    lhs: str
    rhs: str
    status: str  # pass, fail or skip (input outside the operator's domain)
    reason: str = ""

    @property
    def passed(self) -> bool:
        return self.status != "fail"

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "statement": self.statement,
            "input": self.input,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "status": self.status,
            "pass": self.passed,
        } | ({"reason": self.reason} if self.reason else {})


def run_check(check: CompositeCheck, t: DistExpr) -> CompositeResult:
    try:
        lhs, rhs = check.lhs(t), check.rhs(t)
    except DomainError as exc:
        return CompositeResult(check.id, check.statement, str(t), "", "", "skip", str(exc))
    if check.relation == "contains":
        ok = class_contains(lhs, rhs)
    elif check.relation == "within":
        ok = class_contains(rhs, lhs)
    else:
        ok = class_equal(lhs, rhs)
    status = "pass" if ok else "fail"
    return CompositeResult(check.id, check.statement, str(t), str(as_expr(lhs)), str(as_expr(rhs)), status)


def composite_suite(dim: Dimension = SYM, catalog: Iterable[DistExpr] | None = None) -> list[CompositeResult]:
    """Every composite check on every catalog distribution."""
    items = list(catalog) if catalog is not None else list(dc.iter_catalog(dim, World.DIST))
    return [run_check(c, t) for c in COMPOSITE_SUITE for t in items]


# ---------------------------------------------------------------------------
# operator identities in the radial algebra
# ---------------------------------------------------------------------------

STRUCTURAL_IDENTITIES: tuple[tuple[str, str, str], ...] = (
    ("d^2 = -Lap", "Dirac*Dirac", "-Lap"),
    ("D^2 = -Z", "D*D", "-Z"),
    ("Lap = dr^2 + (m-1)(1/r)dr + (1/r^2)Lap*", "Lap", "dr^2 + (m-1)*rinv*dr + rinv^2*LapStar"),
    ("rad rad = -dr^2", "(w*dr)*(w*dr)", "-dr^2"),
    ("rad ang = -(1/r^2)w dw + (1/r)w dw dr", "(w*dr)*(rinv*dw)", "-rinv^2*w*dw + rinv*w*dw*dr"),
    ("ang rad = -(m-1)(1/r)dr - (1/r)dr w dw", "(rinv*dw)*(w*dr)", "-(m-1)*rinv*dr - rinv*dr*w*dw"),
    ("ang ang = (1/r^2)dw^2", "(rinv*dw)*(rinv*dw)", "rinv^2*dw^2"),
    ("Lap* = (m-2)Gamma - Gamma^2", "LapStar", "(m-2)*Gamma - Gamma^2"),
    ("dw^2 = Gamma^2 - (m-1)Gamma", "dw^2", "Gamma^2 - (m-1)*Gamma"),
    ("Z* = -Gamma^2 + m Gamma - (m-1)", "ZStar", "-Gamma^2 + m*Gamma - (m-1)"),
    ("Z = dr^2 + (m-1)(1/r)dr + (1/r^2)Z*", "Z", "dr^2 + (m-1)*rinv*dr + rinv^2*ZStar"),
    ("d = rad + ang", "Dirac", "w*dr + rinv*dw"),
    ("Gamma = -w dw", "Gamma", "-w*dw"),
)


def structural_suite(dim: Dimension = SYM) -> list[dict]:
    """Exact normal-form equality of each identity."""
    from .operators import normalize
    from .parser import parse_operator

    out = []
    for name, lhs, rhs in STRUCTURAL_IDENTITIES:
        a, b = normalize(parse_operator(lhs, dim)), normalize(parse_operator(rhs, dim))
        diff = a - b
        out.append({"id": name, "lhs": str(a), "rhs": str(b), "difference": str(diff), "pass": diff.is_zero()})
    return out


# ---------------------------------------------------------------------------
# worked examples and delta rules
# ---------------------------------------------------------------------------


def _expect(id_: str, got, text: str, world: World, dim: Dimension, exact: bool = True) -> dict:
    """Compare ``got`` with the parsed ``text``: exact equality, or class equality when ``exact`` is off."""
    from .parser import parse_distribution

    want = parse_distribution(text, world, dim)
    g = as_expr(got)
    ok = (g == want) if exact else class_equal(g, want)
    return {"id": id_, "got": str(g), "expected": str(want), "pass": bool(ok)}


def _system_check(id_: str, decomp, expected: list[dict], dim: Dimension) -> dict:
    """``expected`` lists equations as ``{atom name: coefficient text}``."""
    from .distributions import ConstraintSystem, Lin, _same_space
    from .parser import parse_distribution

    atoms = {a.name: a for p in decomp.parts for a in as_expr(p).atoms()}
    eqs = []
    for row in expected:
        lin = Lin()
        for name, coef in row.items():
            c = parse_distribution(coef, World.DIST, dim).regular.get((0, 0))
            lin = lin + Lin.atom(atoms[name], c)
        eqs.append(lin)
    ok = _same_space(decomp.system, ConstraintSystem(tuple(eqs)))
    return {"id": id_, "got": decomp.system.equation_strings(), "pass": bool(ok)}


def worked_examples(dim: Dimension = SYM) -> list[dict]:
    from .parser import parse_distribution

    D = World.DIST
    x = parse_distribution("x", D, dim)
    x3 = parse_distribution("x^3", D, dim)
    r = parse_distribution("r", D, dim)
    out = [
        _expect("d(-x) = m", dc.dirac_apply(-x), "m", D, dim),
        _expect("E x = x", dc.euler_apply(x), "x", D, dim),
        _expect("Gamma x = (m-1) x", dc.gamma_apply(x), "(m-1)*x", D, dim),
    ]
    dp = dc.dirac_parts(x)
    out.append(_expect("w d_r x = -1 + c1 delta", dp.parts[0], "-1 + c1*delta", D, dim, False))
    out.append(_expect("(1/r) d_w x = 1 - m + c2 delta", dp.parts[1], "1 - m + c2*delta", D, dim, False))
    out.append(_system_check("x: c1 + c2 = 0", dp, [{"c1": "1", "c2": "1"}], dim))
    out.append(_expect("Lap x^3 = -2(m+2) x", dc.laplace_apply(x3), "-2*(m+2)*x", D, dim))
    out.append(_expect("Lap* x^3 = -(m-1) x^3", dc.laplace_beltrami_apply(x3), "-(m-1)*x^3", D, dim))
    lp = dc.laplace_parts(x3)
    out.append(_expect("x^3: d_r^2 part", lp.parts[0], "-6*x + c2*delta - c1*ddelta", D, dim, False))
    out.append(_expect("x^3: (1/r) d_r part", lp.parts[1], "-3*x + c3*delta + 1/m*c1*ddelta", D, dim, False))
    out.append(_expect("x^3: (1/r^2) Lap* part", lp.parts[2], "(m-1)*x + c4*delta + c5*ddelta", D, dim, False))
    out.append(
        _system_check(
            "x^3: c2 + (m-1)c3 + c4 = 0, -(1/m)c1 + c5 = 0",
            lp,
            [{"c2": "1", "c3": "m-1", "c4": "1"}, {"c1": "-1/m", "c5": "1"}],
            dim,
        )
    )
    out.append(_expect("Lap r = (m-1)/r", dc.laplace_apply(r), "(m-1)*rinv", D, dim))
    rp = dc.laplace_parts(r)
    out.append(_expect("r: d_r^2 part", rp.parts[0], "c2*delta", D, dim, False))
    out.append(_expect("r: (1/r) d_r part", rp.parts[1], "rinv + c3*delta", D, dim, False))
    out.append(_system_check("r: c2 + (m-1)c3 = 0", rp, [{"c2": "1", "c3": "m-1"}], dim))
    return out


def delta_rules(dim: Dimension = SYM) -> list[dict]:
    from .parser import parse_distribution, parse_operator

    D, S = World.DIST, World.SIGNUM
    delta = parse_distribution("delta", D, dim)
    dd = parse_distribution("ddelta", D, dim)
    f = AtomFactory
    dr_delta = dc.radial_derivative(delta, f())
    out = [
        _expect("Gamma delta = 0", dc.gamma_apply(delta), "0", D, dim),
        _expect("d_w delta = 0", dc.angular_derivative(delta), "0", S, dim),
        _expect("r delta = 0", dc.mul_r(delta), "0", S, dim),
        _expect("r d delta = -m w delta", dc.mul_r(dd), "-m*w*delta", S, dim),
        _expect("d_r delta = -w d delta", dr_delta, "-w*ddelta", S, dim),
        _expect("(1/x) delta = (1/m) d delta", dc.divide_by_x(delta, f()), "1/m*ddelta", D, dim),
        _expect("d_r^2 delta = (m+1)/2 Lap delta", dc.radial_derivative(dr_delta, f()), "(m+1)/2*lapdelta", D, dim),
        _expect("(1/r) d_r delta = -1/2 Lap delta", dc.divide_by_r(dr_delta, f()), "-1/2*lapdelta", D, dim),
        _expect("D r = m w", dc.apply_operator(parse_operator("D", dim), parse_distribution("r", D, dim), f()), "m*w", D, dim),
    ]
    # the partner route through the Dirac operator on x = r^v gives a class containing m w
    partner = dc.wedge(dc.dirac_apply(dc.vee(parse_distribution("r", D, dim)), f()))
    want = parse_distribution("m*w", D, dim)
    out.append({"id": "[D r] by the partner route contains m w", "got": str(partner), "expected": str(want), "pass": class_contains(partner, want)})
    lhs = as_expr(dc.divide_by_r(delta, f()))
    rhs = as_expr(dr_delta).scale(-dim.coerce(dc.Coefficient.coerce(1)) / dim.m)
    out.insert(6, {"id": "(1/r) delta = -(1/m) d_r delta", "got": str(lhs), "expected": str(rhs), "pass": lhs == rhs})
    return out
