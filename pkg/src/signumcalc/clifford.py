"""Clifford algebra R_{0,m} and pointwise cartesian differential operators.

Multivectors are dense float arrays indexed by blade bitmask (bit j-1 set means
``e_j`` is a factor), with ``e_j^2 = -1``.  Fields are finite sums
``coef * x^alpha * r^s`` with multivector coefficients; that family is closed
under partial derivatives, products and multiplication by ``x`` and ``1/r``,
so every operator below acts exactly and is only evaluated at the end.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from .errors import DimensionError, DimensionMismatch, GradeError, OriginSingular

MAX_DIM = 8


# ---------------------------------------------------------------------------
# multivectors
# ---------------------------------------------------------------------------


def _reorder_sign(a: int, b: int) -> int:
    """Sign from sorting the concatenated blade ``e_a e_b`` into canonical order."""
    swaps = 0
    a >>= 1
    while a:
        swaps += bin(a & b).count("1")
        a >>= 1
    return -1 if swaps & 1 else 1


@lru_cache(maxsize=None)
def _tables(m: int) -> tuple[np.ndarray, np.ndarray]:
    n = 1 << m
    sign = np.empty((n, n))
    index = np.empty((n, n), dtype=np.intp)
    for a in range(n):
        for b in range(n):
            s = _reorder_sign(a, b)
            if bin(a & b).count("1") & 1:  # each shared e_j squares to -1
                s = -s
            sign[a, b] = s
            index[a, b] = a ^ b
    return sign, index


def _check_m(m: int) -> None:
    if isinstance(m, bool) or not isinstance(m, int) or not 1 <= m <= MAX_DIM:
        raise DimensionError(f"Clifford dimension must be an integer in [1, {MAX_DIM}], got {m!r}")


class Multivector:
    __slots__ = ("m", "v")

    def __init__(self, m: int, values=None) -> None:
        _check_m(m)
        self.m = m
        n = 1 << m
        if values is None:
            self.v = np.zeros(n)
        else:
            self.v = np.asarray(values, dtype=float)
            if self.v.shape != (n,):
                raise DimensionMismatch(f"expected {n} components, got {self.v.shape}")

    # constructors -------------------------------------------------------
    @classmethod
    def scalar(cls, m: int, s: float) -> "Multivector":
        out = cls(m)
        out.v[0] = s
        return out

    @classmethod
    def blade(cls, m: int, *indices: int, coef: float = 1.0) -> "Multivector":
        """``coef * e_i e_j ...`` for 1-based indices (in the given order)."""
        out = cls.scalar(m, coef)
        for j in indices:
            out = out * cls.basis(m, j)
        return out

    @classmethod
    def basis(cls, m: int, j: int) -> "Multivector":
        if not 1 <= j <= m:
            raise DimensionError(f"basis index {j} out of range 1..{m}")
        out = cls(m)
        out.v[1 << (j - 1)] = 1.0
        return out

    @classmethod
    def vector(cls, coords: Sequence[float]) -> "Multivector":
        m = len(coords)
        out = cls(m)
        for j, c in enumerate(coords):
            out.v[1 << j] = c
        return out

    # algebra ------------------------------------------------------------
    def _same(self, other: "Multivector") -> None:
        if self.m != other.m:
            raise DimensionMismatch(f"dimensions differ ({self.m} vs {other.m})")

    def __add__(self, other):
        if isinstance(other, (int, float)):
            other = Multivector.scalar(self.m, other)
        self._same(other)
        return Multivector(self.m, self.v + other.v)

    __radd__ = __add__

    def __neg__(self):
        return Multivector(self.m, -self.v)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, float, np.floating)):
            return Multivector(self.m, self.v * other)
        if not isinstance(other, Multivector):
            return NotImplemented
        return geometric_product(self, other)

    def __rmul__(self, other):
        return Multivector(self.m, self.v * other)

    def __truediv__(self, s: float):
        return Multivector(self.m, self.v / s)

    # inspection ---------------------------------------------------------
    def grade(self, k: int) -> "Multivector":
        out = Multivector(self.m)
        for b in range(1 << self.m):
            if bin(b).count("1") == k:
                out.v[b] = self.v[b]
        return out

    def grades(self, tol: float = 0.0) -> set[int]:
        return {bin(b).count("1") for b in range(1 << self.m) if abs(self.v[b]) > tol}

    @property
    def scalar_part(self) -> float:
        return float(self.v[0])

    def norm(self) -> float:
        return float(np.sqrt(np.dot(self.v, self.v)))

    def allclose(self, other: "Multivector", tol: float = 1e-12) -> bool:
        self._same(other)
        return bool(np.max(np.abs(self.v - other.v), initial=0.0) <= tol)

    def to_dict(self, tol: float = 0.0) -> dict[str, float]:
        out = {}
        for b in range(1 << self.m):
            if abs(self.v[b]) > tol:
                out[blade_name(b)] = float(self.v[b])
        return out

    def __repr__(self) -> str:
        terms = [f"{c:+.6g}*{name}" for name, c in self.to_dict().items()]
        return f"Multivector(m={self.m}: {' '.join(terms) or '0'})"


def blade_name(b: int) -> str:
    if b == 0:
        return "1"
    return "e" + "".join(str(j + 1) for j in range(MAX_DIM) if b >> j & 1)


def geometric_product(a: Multivector, b: Multivector) -> Multivector:
    if a.m != b.m:
        raise DimensionMismatch(f"dimensions differ ({a.m} vs {b.m})")
    sign, index = _tables(a.m)
    out = np.zeros(1 << a.m)
    np.add.at(out, index, sign * np.outer(a.v, b.v))
    return Multivector(a.m, out)


def dot_and_wedge(x: Multivector, y: Multivector) -> tuple[float, Multivector]:
    """``x y = x . y + x ^ y`` for 1-vectors; returns the scalar and bivector parts."""
    for v in (x, y):
        if not v.grades() <= {1}:
            raise GradeError("dot_and_wedge expects 1-vectors")
    p = geometric_product(x, y)
    return p.scalar_part, p.grade(2)


# ---------------------------------------------------------------------------
# fields
# ---------------------------------------------------------------------------

Key = tuple  # (alpha: tuple[int, ...], s: int)


class Field:
    """A finite sum ``coef * x^alpha * r^s`` with multivector coefficients."""

    __slots__ = ("m", "terms")

    def __init__(self, m: int, terms: Mapping[Key, np.ndarray] | None = None) -> None:
        _check_m(m)
        self.m = m
        self.terms: dict[Key, np.ndarray] = {}
        for key, c in (terms or {}).items():
            c = np.asarray(c, dtype=float)
            if np.any(c):
                self.terms[key] = c

    # constructors -------------------------------------------------------
    @classmethod
    def const(cls, mv: Multivector | float, m: int | None = None) -> "Field":
        if not isinstance(mv, Multivector):
            mv = Multivector.scalar(m, mv)
        return cls(mv.m, {((0,) * mv.m, 0): mv.v.copy()})

    @classmethod
    def coord(cls, m: int, j: int) -> "Field":
        alpha = tuple(1 if i == j - 1 else 0 for i in range(m))
        return cls(m, {(alpha, 0): Multivector.scalar(m, 1.0).v})

    @classmethod
    def monomial(cls, m: int, alpha: Sequence[int], s: int = 0, coef: Multivector | float = 1.0) -> "Field":
        if not isinstance(coef, Multivector):
            coef = Multivector.scalar(m, coef)
        return cls(m, {(tuple(alpha), s): coef.v.copy()})

    @classmethod
    def x(cls, m: int) -> "Field":
        """The vector variable ``x = sum e_j x_j``."""
        out = cls(m)
        for j in range(1, m + 1):
            out = out + cls.monomial(m, _unit(m, j), 0, Multivector.basis(m, j))
        return out

    @classmethod
    def r_power(cls, m: int, s: int) -> "Field":
        return cls.monomial(m, (0,) * m, s)

    @classmethod
    def omega(cls, m: int) -> "Field":
        return cls.r_power(m, -1) * cls.x(m)

    # algebra ------------------------------------------------------------
    def __add__(self, other: "Field") -> "Field":
        if self.m != other.m:
            raise DimensionMismatch("fields live in different dimensions")
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out[k] + c if k in out else c
        return Field(self.m, out)

    def __neg__(self) -> "Field":
        return Field(self.m, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other: "Field") -> "Field":
        return self + (-other)

    def scale(self, s: float) -> "Field":
        return Field(self.m, {k: c * s for k, c in self.terms.items()})

    def __mul__(self, other):
        """Geometric product of fields (or scaling by a number / multivector on the right)."""
        if isinstance(other, (int, float)):
            return self.scale(other)
        if isinstance(other, Multivector):
            other = Field.const(other)
        if self.m != other.m:
            raise DimensionMismatch("fields live in different dimensions")
        sign, index = _tables(self.m)
        out: dict[Key, np.ndarray] = {}
        for (a1, s1), c1 in self.terms.items():
            for (a2, s2), c2 in other.terms.items():
                key = (tuple(i + j for i, j in zip(a1, a2)), s1 + s2)
                prod = np.zeros(1 << self.m)
                np.add.at(prod, index, sign * np.outer(c1, c2))
                out[key] = out[key] + prod if key in out else prod
        return Field(self.m, out)

    def __rmul__(self, other):
        if isinstance(other, (int, float)):
            return self.scale(other)
        if isinstance(other, Multivector):
            return Field.const(other) * self
        return NotImplemented

    # calculus -----------------------------------------------------------
    def partial(self, j: int) -> "Field":
        """Exact ``d/dx_j`` (1-based)."""
        i = j - 1
        out: dict[Key, np.ndarray] = {}

        def put(key, c):
            out[key] = out[key] + c if key in out else c

        for (alpha, s), c in self.terms.items():
            if alpha[i]:
                a = list(alpha)
                a[i] -= 1
                put((tuple(a), s), c * alpha[i])
            if s:
                a = list(alpha)
                a[i] += 1
                put((tuple(a), s - 2), c * s)
        return Field(self.m, out)

    def __call__(self, p: Sequence[float]) -> Multivector:
        p = np.asarray(p, dtype=float)
        if p.shape != (self.m,):
            raise DimensionMismatch(f"point has {p.shape} coordinates, field lives in dimension {self.m}")
        r = float(np.linalg.norm(p))
        acc = np.zeros(1 << self.m)
        for (alpha, s), c in self.terms.items():
            if s and r == 0.0:
                raise OriginSingular("field with an r-power evaluated at the origin")
            acc += c * (np.prod(p ** np.asarray(alpha)) * r**s)
        return Multivector(self.m, acc)


def _unit(m: int, j: int) -> tuple[int, ...]:
    return tuple(1 if i == j - 1 else 0 for i in range(m))


def fd_partial(f: Callable[[np.ndarray], Multivector], j: int, p: Sequence[float], h: float | None = None) -> Multivector:
    """Central fourth-order finite difference; step ``|p| * 1e-5`` by default."""
    p = np.asarray(p, dtype=float)
    if h is None:
        h = max(float(np.linalg.norm(p)), 1.0) * 1e-5
    e = np.zeros_like(p)
    e[j - 1] = h
    return (f(p - 2 * e) - f(p + 2 * e) + (f(p + e) - f(p - e)) * 8.0) / (12.0 * h)


# ---------------------------------------------------------------------------
# cartesian operators on fields
# ---------------------------------------------------------------------------


def e(m: int, j: int) -> Multivector:
    return Multivector.basis(m, j)


def dirac(f: Field) -> Field:
    out = Field(f.m)
    for j in range(1, f.m + 1):
        out = out + e(f.m, j) * f.partial(j)
    return out


def euler(f: Field) -> Field:
    out = Field(f.m)
    for j in range(1, f.m + 1):
        out = out + Field.coord(f.m, j) * f.partial(j)
    return out


def angular_momentum(f: Field, j: int, k: int) -> Field:
    """``L_jk = x_j d_k - x_k d_j``."""
    return Field.coord(f.m, j) * f.partial(k) - Field.coord(f.m, k) * f.partial(j)


def gamma(f: Field) -> Field:
    """``Gamma = -sum_{j<k} e_j e_k L_jk`` (so that ``Gamma x = (m - 1) x``)."""
    out = Field(f.m)
    for j in range(1, f.m + 1):
        for k in range(j + 1, f.m + 1):
            out = out - Multivector.blade(f.m, j, k) * angular_momentum(f, j, k)
    return out


def laplace(f: Field) -> Field:
    out = Field(f.m)
    for j in range(1, f.m + 1):
        out = out + f.partial(j).partial(j)
    return out


def sum_l_squared(f: Field) -> Field:
    out = Field(f.m)
    for j in range(1, f.m + 1):
        for k in range(j + 1, f.m + 1):
            out = out + angular_momentum(angular_momentum(f, j, k), j, k)
    return out


def laplace_beltrami(f: Field) -> Field:
    """``Lap* = r^2 Lap - E^2 - (m - 2) E``."""
    m = f.m
    ef = euler(f)
    return Field.r_power(m, 2) * laplace(f) - euler(ef) - ef.scale(m - 2)


def laplace_beltrami_gamma(f: Field) -> Field:
    """``Lap* = (m - 2) Gamma - Gamma^2``."""
    g = gamma(f)
    return g.scale(f.m - 2) - gamma(g)


def mul_omega(f: Field) -> Field:
    return Field.omega(f.m) * f


def radial_dirac(f: Field) -> Field:
    """``w d_r f = -(1/x) E f``; here through ``d_r = (x_j / r) d_j``."""
    m = f.m
    dr = Field(m)
    for j in range(1, m + 1):
        dr = dr + Field.monomial(m, _unit(m, j), -1) * f.partial(j)
    return mul_omega(dr)


def inv_x(f: Field) -> Field:
    """``(1/x) f = -x f / r^2``."""
    return -(Field.r_power(f.m, -2) * Field.x(f.m) * f)


def angular_dirac(f: Field) -> Field:
    """``(1/r) d_w f = -(1/x) Gamma f``."""
    return -inv_x(gamma(f))


def signum_dirac(f: Field) -> Field:
    """``D = (1/r^2) x (2E + (m - 1)) - d``."""
    m = f.m
    inner = euler(f).scale(2.0) + f.scale(m - 1)
    return Field.r_power(m, -2) * Field.x(m) * inner - dirac(f)


def z_star(f: Field) -> Field:
    """``Z* = -Gamma^2 + m Gamma - (m - 1)``."""
    g = gamma(f)
    return -gamma(g) + g.scale(f.m) - f.scale(f.m - 1)


def z_op(f: Field) -> Field:
    """``Z = w Lap (-w)``, the signum partner of the Laplacian."""
    w = Field.omega(f.m)
    return -(w * laplace(w * f))


def z_decomposed(f: Field) -> Field:
    """``Z = (1/r^2)(E^2 + (m - 2) E + Z*)``."""
    m = f.m
    ef = euler(f)
    return Field.r_power(m, -2) * (euler(ef) + ef.scale(m - 2) + z_star(f))


def d_j(f: Field, j: int) -> Field:
    """``d_j = (1/r^2)(e_j x + x_j) + d/dx_j``."""
    m = f.m
    if not 1 <= j <= m:
        raise DimensionError(f"index j = {j} out of range 1..{m}")
    bivector = Field.r_power(m, -2) * (Multivector.basis(m, j) * Field.x(m) + Field.coord(m, j))
    return bivector * f + f.partial(j)


def d_j_partner(f: Field, j: int) -> Field:
    """``w d_j (-w) f`` computed by the product rule on fields."""
    w = Field.omega(f.m)
    return -(w * (w * f).partial(j))


# ---------------------------------------------------------------------------
# intrinsic sphere charts (m = 2, 3)
# ---------------------------------------------------------------------------


def _chart(p: np.ndarray):
    """Polar angles and the tangent frame at ``p`` with ``d omega`` per angle."""
    m = len(p)
    r = float(np.linalg.norm(p))
    if m == 2:
        th = math.atan2(p[1], p[0])
        e_th = np.array([-math.sin(th), math.cos(th)])
        return r, [(e_th, e_th, 1.0)]
    if m == 3:
        th = math.acos(max(-1.0, min(1.0, p[2] / r)))
        ph = math.atan2(p[1], p[0])
        e_th = np.array([math.cos(th) * math.cos(ph), math.cos(th) * math.sin(ph), -math.sin(th)])
        e_ph = np.array([-math.sin(ph), math.cos(ph), 0.0])
        s = math.sin(th)
        # d omega / d theta = e_theta;  d omega / d phi = sin(theta) e_phi
        return r, [(e_th, e_th, 1.0), (e_ph, s * e_ph, 1.0 / s)]
    raise DimensionError("intrinsic sphere charts are implemented for m = 2 and m = 3 only")


def spherical_angular_dirac_at(f: Field, p: Sequence[float]) -> Multivector:
    """``(1/r) d_w f`` at ``p`` from the polar chart ``d_w = e_th d_th (+ e_ph (1/sin th) d_ph)``."""
    p = np.asarray(p, dtype=float)
    m = f.m
    r, frame = _chart(p)
    grads = [f.partial(j)(p) for j in range(1, m + 1)]
    out = Multivector(m)
    for unit, domega, factor in frame:
        # d/d(angle) f(r omega) = r * sum_j (d omega_j / d angle) d_j f
        dang = Multivector(m)
        for j in range(m):
            dang = dang + grads[j] * (r * domega[j])
        out = out + Multivector.vector(unit) * dang * factor
    return out / r


def spherical_radial_dirac_at(f: Field, p: Sequence[float]) -> Multivector:
    """``w d_r f`` at ``p`` via the one-variable derivative along the ray (exact partials)."""
    p = np.asarray(p, dtype=float)
    r = float(np.linalg.norm(p))
    w = p / r
    dr = Multivector(f.m)
    for j in range(f.m):
        dr = dr + f.partial(j + 1)(p) * w[j]
    return Multivector.vector(w) * dr


def spherical_signum_dirac_at(f: Field, p: Sequence[float]) -> Multivector:
    """``D = w d_r - (1/r) d_w + (m - 1)(1/r) w`` with the chart route for ``d_w``."""
    p = np.asarray(p, dtype=float)
    r = float(np.linalg.norm(p))
    w = Multivector.vector(p / r)
    return (
        spherical_radial_dirac_at(f, p)
        - spherical_angular_dirac_at(f, p)
        + w * f(p) * ((f.m - 1) / r)
    )


# ---------------------------------------------------------------------------
# pointwise evaluation and identity checks
# ---------------------------------------------------------------------------

EXCLUSION_RADIUS = 1e-6

_FIELD_OPS: dict[str, Callable[..., Field]] = {
    "Dirac": dirac,
    "E": euler,
    "Gamma": gamma,
    "Lap": laplace,
    "LapStar": laplace_beltrami,
    "SumL2": sum_l_squared,
    "RadialDirac": radial_dirac,
    "AngularDirac": angular_dirac,
    "D": signum_dirac,
    "Z": z_op,
    "ZStar": z_star,
    "d": d_j,
}

OPERATOR_NAMES = tuple(_FIELD_OPS)


def apply_field_operator(name: str, f: Field, j: int | None = None) -> Field:
    if name not in _FIELD_OPS:
        raise KeyError(f"unknown pointwise operator {name!r}")
    if name == "d":
        if j is None:
            raise DimensionError("operator d needs an index j")
        return d_j(f, j)
    return _FIELD_OPS[name](f)


def pointwise_operator(
    name: str,
    f: Field,
    p: Sequence[float],
    j: int | None = None,
    exclusion: float = EXCLUSION_RADIUS,
) -> Multivector:
    """Evaluate the named cartesian operator applied to ``f`` at ``p``."""
    p = np.asarray(p, dtype=float)
    if float(np.linalg.norm(p)) < exclusion:
        raise OriginSingular(f"point {p.tolist()} lies inside the exclusion radius {exclusion}")
    return apply_field_operator(name, f, j)(p)


Side = Callable[[Field, np.ndarray], Multivector]


def field_side(fn: Callable[[Field], Field]) -> Side:
    """Lift a field operator to a pointwise evaluator (the field is built once per field)."""
    cache: dict[int, tuple[Field, Field]] = {}

    def side(f: Field, p: np.ndarray) -> Multivector:
        hit = cache.get(id(f))
        if hit is None or hit[0] is not f:
            hit = (f, fn(f))
            cache[id(f)] = hit
        return hit[1](p)

    return side


@dataclass(frozen=True)
class IdentityReport:
    name: str
    samples: int
    max_abs_dev: float
    scale: float
    max_rel_dev: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.max_rel_dev <= self.tolerance

    def to_json(self) -> dict:
        return {
            "id": self.name,
            "samples": self.samples,
            "max_abs_dev": self.max_abs_dev,
            "max_rel_dev": self.max_rel_dev,
            "tolerance": self.tolerance,
            "pass": self.passed,
        }


def identity_check(
    lhs: Side,
    rhs: Side,
    fields: Iterable[Field],
    points: Iterable[Sequence[float]],
    tol: float = 1e-8,
    name: str = "identity",
    exclusion: float = EXCLUSION_RADIUS,
) -> IdentityReport:
    """Compare two pointwise evaluators over every (field, point) pair.

    The relative deviation is the largest pointwise difference divided by the
    largest magnitude either side reaches on the sample set.
    """
    points = [np.asarray(p, dtype=float) for p in points]
    for p in points:
        if float(np.linalg.norm(p)) < exclusion:
            raise OriginSingular(f"sample point {p.tolist()} lies inside the exclusion radius")
    max_dev = 0.0
    scale = 0.0
    n = 0
    for f in fields:
        for p in points:
            a, b = lhs(f, p), rhs(f, p)
            max_dev = max(max_dev, (a - b).norm())
            scale = max(scale, a.norm(), b.norm())
            n += 1
    rel = max_dev / scale if scale > 0 else max_dev
    return IdentityReport(name, n, max_dev, scale, rel, tol)


# ---------------------------------------------------------------------------
# standard sample sets
# ---------------------------------------------------------------------------


def sample_points(m: int, count: int, rng: np.random.Generator, rmin: float = 0.3, rmax: float = 2.0) -> list[np.ndarray]:
    """Random points with radius in ``[rmin, rmax]``, kept away from chart poles."""
    out = []
    while len(out) < count:
        v = rng.normal(size=m)
        n = np.linalg.norm(v)
        if n < 1e-3:
            continue
        w = v / n
        if m == 3 and abs(w[2]) > 0.95:
            continue
        out.append(w * rng.uniform(rmin, rmax))
    return out


def random_polynomial_field(m: int, rng: np.random.Generator, degree: int = 3, terms: int = 4) -> Field:
    """Random multivector-valued polynomial."""
    f = Field(m)
    for _ in range(terms):
        alpha = [0] * m
        for _ in range(int(rng.integers(0, degree + 1))):
            alpha[int(rng.integers(0, m))] += 1
        coef = Multivector(m, rng.normal(size=1 << m))
        f = f + Field.monomial(m, alpha, 0, coef)
    return f


def standard_fields(m: int, rng: np.random.Generator) -> list[Field]:
    """Fixed polynomials, radial powers and random polynomials used by the checks."""
    x = Field.x(m)
    fields = [
        Field.coord(m, 1) * Field.coord(m, 2),
        x,
        x * x * x,
        Field.r_power(m, 2) * Field.coord(m, 1),
        Field.r_power(m, 3),
        Field.r_power(m, 1) * Field.omega(m),
        Field.omega(m),
    ]
    fields += [random_polynomial_field(m, rng) for _ in range(3)]
    return fields
