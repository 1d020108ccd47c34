"""Numerical pairings of catalog (signum)distributions with test functions.

Integrals over a ball use a product rule: Gauss-Jacobi in the radius, whose
weight ``r^(k + m - 1)`` absorbs both the regular term ``r^k`` and the volume
Jacobian, times a spherical rule built by slicing ``S^(m-1)`` into
``t * e_1 + sqrt(1 - t^2) * S^(m-2)`` with Gauss-Jacobi nodes in ``t``.
Origin terms are paired exactly from derivatives of the test function at 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np
from scipy.special import roots_jacobi, roots_legendre

from .clifford import Field, Multivector, _tables
from .distributions import DistExpr, EquivClass, World
from .errors import DimensionError, DomainError, NonIntegrable

# ---------------------------------------------------------------------------
# grids
# ---------------------------------------------------------------------------


def sphere_area(m: int) -> float:
    """``a_m = 2 pi^(m/2) / Gamma(m/2)``."""
    if m < 2:
        raise DimensionError("sphere_area needs m >= 2")
    return 2.0 * math.pi ** (m / 2) / math.gamma(m / 2)


@lru_cache(maxsize=None)
def sphere_grid(m: int, order: int = 16) -> tuple[np.ndarray, np.ndarray]:
    """Nodes (n, m) and weights on ``S^(m-1)``; exact for polynomials of degree < ``order``."""
    if m < 2:
        raise DimensionError("sphere grids need m >= 2")
    if m == 2:
        n = order + 1
        th = 2.0 * math.pi * np.arange(n) / n
        nodes = np.stack([np.cos(th), np.sin(th)], axis=1)
        return nodes, np.full(n, 2.0 * math.pi / n)
    a = (m - 3) / 2.0
    nt = order // 2 + 1
    t, wt = roots_jacobi(nt, a, a) if a else roots_legendre(nt)
    sub_nodes, sub_w = sphere_grid(m - 1, order)
    s = np.sqrt(1.0 - t**2)
    nodes = np.concatenate(
        [np.column_stack([np.full(len(sub_w), ti), si * sub_nodes]) for ti, si in zip(t, s)]
    )
    weights = np.concatenate([wi * sub_w for wi in wt])
    return nodes, weights


def radial_grid(R: float, beta: float, n: int = 24) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights for ``int_0^R r^beta g(r) dr`` (``beta > -1``)."""
    if beta <= -1:
        raise NonIntegrable(f"radial weight r^{beta} is not integrable at the origin")
    u, w = roots_jacobi(n, 0.0, beta) if beta else roots_legendre(n)
    r = 0.5 * R * (1.0 + u)
    return r, w * (0.5 * R) ** (beta + 1)


@dataclass(frozen=True)
class QuadratureGrid:
    """Radial x spherical product rule on the ball of radius ``R``."""

    m: int
    R: float
    radial_order: int = 24
    sphere_order: int = 16

    def sphere(self):
        return sphere_grid(self.m, self.sphere_order)

    def integrate(self, g: Callable[[np.ndarray], np.ndarray], shift: int = 0) -> np.ndarray:
        """``int_{|x|<R} r^shift g(x) dx`` for vectorized ``g``: (N, m) -> (N, 2^m)."""
        r, wr = radial_grid(self.R, shift + self.m - 1, self.radial_order)
        nodes, ws = self.sphere()
        pts = (r[:, None, None] * nodes[None, :, :]).reshape(-1, self.m)
        w = (wr[:, None] * ws[None, :]).reshape(-1)
        vals = g(pts)
        return np.tensordot(w, vals, axes=(0, 0))


def cartesian_integral(g: Callable[[np.ndarray], np.ndarray], m: int, R: float, n: int = 40) -> np.ndarray:
    """Tensor Gauss-Legendre over the cube ``[-R, R]^m``, split into the 2^m orthants."""
    u, w = roots_legendre(n)
    half = 0.5 * R * (u + 1.0)
    wh = 0.5 * R * w
    total = None
    for signs in np.ndindex(*(2,) * m):
        axes = [half * (1 if s else -1) for s in signs]
        mesh = np.meshgrid(*axes, indexing="ij")
        pts = np.stack([a.reshape(-1) for a in mesh], axis=1)
        wmesh = np.meshgrid(*([wh] * m), indexing="ij")
        wts = np.prod(np.stack([a.reshape(-1) for a in wmesh], axis=1), axis=1)
        part = np.tensordot(wts, g(pts), axes=(0, 0))
        total = part if total is None else total + part
    return total


# ---------------------------------------------------------------------------
# vectorized field evaluation
# ---------------------------------------------------------------------------


def eval_field(f: Field, pts: np.ndarray) -> np.ndarray:
    """Evaluate a field at many points: (N, m) -> (N, 2^m)."""
    r = np.linalg.norm(pts, axis=1)
    out = np.zeros((len(pts), 1 << f.m))
    for (alpha, s), c in f.terms.items():
        mono = np.prod(pts ** np.asarray(alpha), axis=1)
        if s:
            mono = mono * r**s
        out += mono[:, None] * c[None, :]
    return out


def mv_product_many(a: np.ndarray, b: np.ndarray, m: int) -> np.ndarray:
    """Pointwise geometric product of (N, 2^m) arrays."""
    sign, index = _tables(m)
    out = np.zeros_like(b, dtype=float)
    n = 1 << m
    for i in range(n):
        ai = a[:, i]
        if not np.any(ai):
            continue
        for j in range(n):
            out[:, index[i, j]] += sign[i, j] * ai * b[:, j]
    return out


def omega_many(pts: np.ndarray) -> np.ndarray:
    m = pts.shape[1]
    r = np.linalg.norm(pts, axis=1)
    out = np.zeros((len(pts), 1 << m))
    for j in range(m):
        out[:, 1 << j] = pts[:, j] / r
    return out


# ---------------------------------------------------------------------------
# test functions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TestFunction:
    """``envelope * poly`` with ``poly`` a polynomial field.

    The envelope is either the Gaussian ``exp(-a r^2)`` or, for bumps, already
    multiplied into ``poly`` as ``(1 - r^2/R^2)^k`` with support ``|x| < R``.
    Partials stay in the same family, so derivatives of every order are exact.
    """

    __test__ = False  # not a pytest class

    m: int
    poly: Field
    gauss_a: float | None = None
    support: float | None = None
    label: str = ""

    @property
    def radius(self) -> float:
        """Integration radius: the support, or where the Gaussian is below 1e-30."""
        if self.support is not None:
            return self.support
        return math.sqrt(70.0 / self.gauss_a)

    def partial(self, j: int) -> "TestFunction":
        p = self.poly.partial(j)
        if self.gauss_a is not None:
            p = p - (Field.coord(self.m, j) * self.poly).scale(2.0 * self.gauss_a)
        return TestFunction(self.m, p, self.gauss_a, self.support, f"d{j}({self.label})")

    def laplacian(self) -> "TestFunction":
        out = None
        for j in range(1, self.m + 1):
            t = self.partial(j).partial(j)
            out = t if out is None else out + t
        return out

    def dirac(self) -> "TestFunction":
        out = None
        for j in range(1, self.m + 1):
            t = self.partial(j).left(Multivector.basis(self.m, j))
            out = t if out is None else out + t
        return out

    def euler(self) -> "TestFunction":
        out = None
        for j in range(1, self.m + 1):
            t = self.partial(j).mul_field(Field.coord(self.m, j))
            out = t if out is None else out + t
        return out

    def angular_momentum(self, j: int, k: int) -> "TestFunction":
        return self.partial(k).mul_field(Field.coord(self.m, j)) - self.partial(j).mul_field(Field.coord(self.m, k))

    def left(self, mv: Multivector) -> "TestFunction":
        return TestFunction(self.m, mv * self.poly, self.gauss_a, self.support, self.label)

    def mul_field(self, f: Field) -> "TestFunction":
        return TestFunction(self.m, f * self.poly, self.gauss_a, self.support, self.label)

    def scale(self, s: float) -> "TestFunction":
        return TestFunction(self.m, self.poly.scale(s), self.gauss_a, self.support, self.label)

    def __add__(self, other: "TestFunction") -> "TestFunction":
        return TestFunction(self.m, self.poly + other.poly, self.gauss_a, self.support, self.label)

    def __sub__(self, other: "TestFunction") -> "TestFunction":
        return self + other.scale(-1.0)

    def __call__(self, pts: np.ndarray) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        vals = eval_field(self.poly, pts)
        r2 = np.sum(pts**2, axis=1)
        if self.gauss_a is not None:
            vals = vals * np.exp(-self.gauss_a * r2)[:, None]
        if self.support is not None:
            vals = vals * (r2 < self.support**2)[:, None]
        return vals

    def at(self, p: Sequence[float]) -> Multivector:
        return Multivector(self.m, self(np.asarray(p, dtype=float)[None, :])[0])


def bump(m: int, R: float = 1.0, k: int = 4, poly: Field | None = None, label: str = "") -> TestFunction:
    """``(1 - r^2/R^2)^k * poly`` supported in ``|x| < R`` (``k >= 4``)."""
    if k < 4:
        raise ValueError("bump exponent must be at least 4")
    q = Field.const(1.0, m) - Field.r_power(m, 2).scale(1.0 / R**2)
    env = Field.const(1.0, m)
    for _ in range(k):
        env = env * q
    poly = poly if poly is not None else Field.const(1.0, m)
    return TestFunction(m, env * poly, None, R, label or f"bump(R={R}, k={k})")


def gaussian(m: int, a: float = 1.0, poly: Field | None = None, label: str = "") -> TestFunction:
    poly = poly if poly is not None else Field.const(1.0, m)
    return TestFunction(m, poly, a, None, label or f"gauss(a={a})")


def bump_family(m: int, count: int, rng: np.random.Generator) -> list[TestFunction]:
    """Bumps with varied radius, exponent and a random quadratic modulation."""
    out = []
    for i in range(count):
        R = float(rng.uniform(0.8, 2.0))
        k = int(rng.integers(4, 7))
        poly = Field.const(1.0, m)
        for j in range(1, m + 1):
            poly = poly + Field.coord(m, j).scale(float(rng.normal()) * 0.5)
        poly = poly + (Field.coord(m, 1) * Field.coord(m, min(2, m))).scale(float(rng.normal()) * 0.3)
        out.append(bump(m, R, k, poly, f"bump#{i}(R={R:.3f}, k={k})"))
    return out


# ---------------------------------------------------------------------------
# pairings
# ---------------------------------------------------------------------------


def _omega_power_left(vals: np.ndarray, pts: np.ndarray, e: int) -> np.ndarray:
    if not e:
        return vals
    return mv_product_many(omega_many(pts), vals, pts.shape[1])


def _concrete(t) -> tuple[DistExpr, int]:
    if isinstance(t, EquivClass):
        if not t.is_exact():
            raise DomainError("pairing a class depends on its free constants; pair the representative")
        t = t.expr
    if t.has_atoms():
        raise DomainError("pairing depends on free constants")
    if t.dim.value is None:
        raise DimensionError("numeric pairing needs a concrete dimension")
    return t, t.dim.value


def origin_derivative(phi: TestFunction, n: int) -> Multivector:
    """``(d^n phi)(0)`` with the Clifford-Dirac operator applied from the left.

    Origin terms are stored as ``d^n delta``; ``lapdelta`` is ``-d^2 delta``.
    """
    f = phi
    for _ in range(n):
        f = f.dirac()
    return f.at(np.zeros(phi.m))


def pair(t, phi: TestFunction, grid: QuadratureGrid | None = None) -> Multivector:
    """``<T, phi>`` for a distribution, ``<U, w phi>`` for a signumdistribution."""
    t, m = _concrete(t)
    if phi.m != m:
        raise DimensionError(f"test function lives in dimension {phi.m}, expression in {m}")
    grid = grid or QuadratureGrid(m, phi.radius)
    total = np.zeros(1 << m)
    for (k, e), c in t.regular.items():
        if k <= -m:
            raise NonIntegrable(f"r^{k} is not locally integrable for m = {m}")
        cf = float(c.to_fraction())
        if t.world is World.DIST:
            g = lambda pts, e=e: _omega_power_left(phi(pts), pts, e)
        else:
            # int U w phi with U = r^k w^e
            g = lambda pts, e=e: _omega_power_left(_omega_power_left(phi(pts), pts, 1), pts, e)
        total += cf * grid.integrate(g, shift=k)
    for (e, n), lin in t.origin.items():
        cf = float(lin.constant.to_fraction())
        val = origin_derivative(phi, n).v * (-1) ** n
        if t.world is World.SIGNUM:
            val = -val  # <w A, w phi> = -<A, phi>
        total += cf * val
    return Multivector(m, total)


def pair_field(f: Field, phi: TestFunction, world: World = World.DIST, grid: QuadratureGrid | None = None) -> Multivector:
    """``int f phi`` (or ``int f w phi`` for a signumdistribution) for a locally integrable field."""
    m = f.m
    grid = grid or QuadratureGrid(m, phi.radius)
    smin = min(sum(a) + s for (a, s) in f.terms) if f.terms else 0
    if smin <= -m:
        raise NonIntegrable("field is not locally integrable")
    shifted = Field(m, {(a, s - smin): c for (a, s), c in f.terms.items()})

    def g(pts):
        vals = phi(pts)
        if world is World.SIGNUM:
            vals = _omega_power_left(vals, pts, 1)
        return mv_product_many(eval_field(shifted, pts), vals, m)

    return Multivector(m, grid.integrate(g, shift=smin))


# ---------------------------------------------------------------------------
# spherical mean and delta checks
# ---------------------------------------------------------------------------


def spherical_mean(phi: TestFunction, r: float, order: int = 16) -> Multivector:
    """``(1/a_m) int_S phi(r w) dS``; exact at ``r = 0``."""
    if r == 0.0:
        return phi.at(np.zeros(phi.m))
    nodes, w = sphere_grid(phi.m, order)
    vals = phi(r * nodes)
    return Multivector(phi.m, np.tensordot(w, vals, axes=(0, 0)) / sphere_area(phi.m))


def mean_derivative(phi: TestFunction, order: int, h: float) -> float:
    """Fourth-order central difference of ``r -> Sigma0[phi](r)`` at 0 (scalar part)."""
    s = lambda r: spherical_mean(phi, abs(r)).scalar_part if r >= 0 else _mean_negative(phi, r)
    if order == 1:
        return (s(-2 * h) - 8 * s(-h) + 8 * s(h) - s(2 * h)) / (12 * h)
    if order == 2:
        return (-s(-2 * h) + 16 * s(-h) - 30 * s(0.0) + 16 * s(h) - s(2 * h)) / (12 * h * h)
    if order == 3:
        return (-s(-3 * h) + 8 * s(-2 * h) - 13 * s(-h) + 13 * s(h) - 8 * s(2 * h) + s(3 * h)) / (8 * h**3)
    raise ValueError("orders 1, 2 and 3 are supported")


def _mean_negative(phi: TestFunction, r: float) -> float:
    # the mean at negative radius samples phi(r w) on the reflected sphere
    nodes, w = sphere_grid(phi.m)
    vals = phi(r * nodes)
    return float(np.tensordot(w, vals, axes=(0, 0))[0] / sphere_area(phi.m))


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------


@dataclass
class Check:
    id: str
    lhs: float
    rhs: float
    tolerance: float
    relative: bool = True
    detail: dict = field(default_factory=dict)

    @property
    def abs_dev(self) -> float:
        return abs(self.lhs - self.rhs)

    @property
    def rel_dev(self) -> float:
        scale = max(abs(self.lhs), abs(self.rhs))
        return self.abs_dev / scale if scale > 0 else self.abs_dev

    @property
    def deviation(self) -> float:
        return self.rel_dev if self.relative else self.abs_dev

    @property
    def passed(self) -> bool:
        return self.deviation <= self.tolerance

    def to_json(self) -> dict:
        out = {
            "id": self.id,
            "lhs": _num(self.lhs),
            "rhs": _num(self.rhs),
            "abs_dev": _num(self.abs_dev),
            "rel_dev": _num(self.rel_dev),
            "tolerance": self.tolerance,
            "relative": self.relative,
            "pass": self.passed,
        }
        if self.detail:
            out["detail"] = self.detail
        return out


def _num(x: float) -> float:
    return float(f"{x:.12e}")


class MVCheck(Check):
    """Check on multivector values: deviation is the norm of the difference."""

    def __init__(self, id_, a: Multivector, b: Multivector, tol, relative, detail):
        super().__init__(id_, a.norm(), b.norm(), tol, relative, detail)
        self._diff = (a - b).norm()

    @property
    def abs_dev(self) -> float:
        return self._diff

    @property
    def rel_dev(self) -> float:
        scale = max(self.lhs, self.rhs)
        return self._diff / scale if scale > 0 else self._diff


def adjoint_check(op: str, t: DistExpr, phis: Sequence[TestFunction], tol: float = 1e-6, j: int = 1) -> list[Check]:
    """``<op T, phi>`` from the symbolic action against the integration-by-parts side.

    Supported: ``Lap`` (self-adjoint), ``E`` (adjoint ``-(m + E)``),
    ``Dirac`` (``-sum e_j <T, d_j phi>``) and ``Gamma`` (``sum e_j e_k <T, L_jk phi>``).
    """
    from . import distributions as dc

    t, m = _concrete(t)
    out = []
    for phi in phis:
        if op == "Lap":
            lhs = pair(dc.laplace_apply(t), phi)
            rhs = pair(t, phi.laplacian())
        elif op == "E":
            lhs = pair(dc.euler_apply(t), phi)
            rhs = -(pair(t, phi.euler()) + pair(t, phi) * float(m))
        elif op == "Dirac":
            lhs = pair(dc.dirac_apply(t), phi)
            rhs = Multivector(m)
            for jj in range(1, m + 1):
                rhs = rhs - Multivector.basis(m, jj) * pair(t, phi.partial(jj))
        elif op == "Gamma":
            lhs = pair(dc.gamma_apply(t), phi)
            rhs = Multivector(m)
            for a in range(1, m + 1):
                for b in range(a + 1, m + 1):
                    rhs = rhs + Multivector.blade(m, a, b) * pair(t, phi.angular_momentum(a, b))
        else:
            raise ValueError(f"unsupported adjoint operator {op!r}")
        out.append(MVCheck(f"adjoint:{op}:{t}:{phi.label}", lhs, rhs, tol, True, {}))
    return out


def dj_adjoint_check(f: Field, phis: Sequence[TestFunction], j: int, tol: float = 1e-5) -> list[Check]:
    """``<d/dx_j f, w phi> = -<f, w (d_j phi)>`` for a regular signumdistribution ``f``."""
    m = f.m
    out = []
    for phi in phis:
        lhs = pair_field(f.partial(j), phi, World.SIGNUM)
        # d_j phi = (1/r^2)(e_j x + x_j) phi + d_j phi, integrated against f w
        bivec = Field.r_power(m, -2) * (Multivector.basis(m, j) * Field.x(m) + Field.coord(m, j))
        term1 = _pair_signum_product(f, bivec, phi)
        term2 = pair_field(f, phi.partial(j), World.SIGNUM)
        rhs = -(term1 + term2)
        out.append(MVCheck(f"adjoint:d{j}:{phi.label}", lhs, rhs, tol, True, {}))
    return out


def _pair_signum_product(f: Field, left: Field, phi: TestFunction) -> Multivector:
    """``int f w (left * phi)``."""
    m = f.m
    grid = QuadratureGrid(m, phi.radius)
    fw = f * Field.omega(m) * left
    smin = min(sum(a) + s for (a, s) in fw.terms)
    shifted = Field(m, {(a, s - smin): c for (a, s), c in fw.terms.items()})

    def g(pts):
        return mv_product_many(eval_field(shifted, pts), phi(pts), m)

    return Multivector(m, grid.integrate(g, shift=smin))


def delta_radial_coefficient_check(phis: Sequence[TestFunction], tol: float = 1e-4, h_rel: float = 1e-2) -> list[Check]:
    """``(Sigma0[phi])''(0) = Lap phi(0) / m`` by quadrature and finite differences."""
    out = []
    for phi in phis:
        m = phi.m
        h = h_rel * min(phi.radius, 1.0)
        lhs = mean_derivative(phi, 2, h)
        rhs = phi.laplacian().at(np.zeros(m)).scalar_part / m
        rel = abs(rhs) > 1e-12
        out.append(Check(f"mean''(0):{phi.label}", lhs, rhs, tol, rel))
    return out


def integrate_regular_cartesian(t: DistExpr, phi: TestFunction, n: int = 48) -> Multivector:
    """``<T, phi>`` for a regular distribution by a tensor grid (independent integrator)."""
    t, m = _concrete(t)
    if t.origin:
        raise DomainError("the cartesian integrator handles regular terms only")
    R = phi.radius

    def g(pts):
        r = np.linalg.norm(pts, axis=1)
        acc = np.zeros((len(pts), 1 << m))
        vals = phi(pts)
        for (k, e), c in t.regular.items():
            v = _omega_power_left(vals, pts, e) if e else vals
            acc += float(c.to_fraction()) * (r**k)[:, None] * v
        return acc

    return Multivector(m, cartesian_integral(g, m, R, n))
