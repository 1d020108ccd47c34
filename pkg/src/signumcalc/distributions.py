"""Symbolic distributions and signumdistributions on a finite catalog.

A :class:`DistExpr` is a finite sum of

* regular terms ``c * r^k w^e`` (keyed ``(k, e)``), and
* origin terms ``L * w^e d^n delta`` (keyed ``(e, n)``), where ``d^n delta`` is
  the n-fold Clifford-Dirac derivative of delta and ``L`` is a linear form in
  the free constant atoms (a plain coefficient when no atom is involved).

Aggregates print in the familiar names: ``d^2 delta = -lapdelta`` and
``d^3 delta = -dlapdelta``.  A distribution carries origin terms with ``e = 0``,
a signumdistribution with ``e = 1``; ``vee``/``wedge`` are left
multiplication by ``w`` and ``-w``.

Rules for the origin aggregates follow from ``E d^n delta = -(m + n) d^n delta``
and the anticommutator ``x d + d x = -2E - m``:

* ``x d^n delta = a_n d^(n-1) delta`` with ``a_n = n`` (n even) and
  ``a_n = m + n - 1`` (n odd), so ``x delta = 0`` and ``x d delta = m delta``;
* ``Gamma d^n delta = (m - 1) d^n delta`` for odd n and ``0`` for even n.

Divisions by ``x`` (and ``r``, ``r^2``) return equivalence classes whose free
atoms span the kernel of the multiplier.  Atoms are suppressed for radial input
(rotation invariance) and for input supported at the origin only (homogeneity).
"""

from __future__ import annotations

import enum
import itertools
import re
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .coeff import ONE, ZERO, SYM, Coefficient, Dimension
from .errors import DivisionRuleMissing, Inconsistent, NonIntegrable, WorldError
from .linsolve import Solution, solve

MAX_ORDER = 6
"""Highest d^n delta the engine produces; the aggregate rules are closed-form in n."""

CATALOG_ORDER = 3
"""Highest origin order accepted from user input."""


class World(enum.Enum):
    DIST = "dist"
    SIGNUM = "signum"

    def flipped(self) -> "World":
        return World.SIGNUM if self is World.DIST else World.DIST

    @property
    def proper_omega(self) -> int:
        """The w-exponent an origin term must carry in this world."""
        return 0 if self is World.DIST else 1


# ---------------------------------------------------------------------------
# constants and linear forms
# ---------------------------------------------------------------------------


@dataclass(frozen=True, order=False)
class ConstantAtom:
    name: str
    kind: str = "scalar"  # "scalar" | "vector"
    source: str = field(default="", compare=False)

    def sort_key(self):
        m = re.match(r"([A-Za-z_]+)(\d*)$", self.name)
        if m:
            return (m.group(1), int(m.group(2) or 0), self.name)
        return (self.name, 0, self.name)

    def __str__(self) -> str:
        return self.name


class AtomFactory:
    """Hands out fresh atoms ``c1, c2, ...``; one factory per derivation."""

    def __init__(self, prefix: str = "c", start: int = 1) -> None:
        self.prefix = prefix
        self._counter = itertools.count(start)

    def fresh(self, kind: str, source: str) -> ConstantAtom:
        return ConstantAtom(f"{self.prefix}{next(self._counter)}", kind, source)


def _lin_sort(item):
    a = item[0]
    return (0, ()) if a is None else (1, a.sort_key())


class Lin:
    """Linear form ``c0 + sum(c_i * atom_i)`` with Q(m) coefficients."""

    __slots__ = ("_d", "_hash")

    def __init__(self, d: Mapping | None = None) -> None:
        self._d = {k: v for k, v in (d or {}).items() if v}
        self._hash = None

    @classmethod
    def const(cls, c) -> "Lin":
        return cls({None: Coefficient.coerce(c)})

    @classmethod
    def atom(cls, a: ConstantAtom, c=ONE) -> "Lin":
        return cls({a: Coefficient.coerce(c)})

    def items(self):
        return sorted(self._d.items(), key=_lin_sort)

    @property
    def constant(self) -> Coefficient:
        return self._d.get(None, ZERO)

    def atoms(self) -> set[ConstantAtom]:
        return {k for k in self._d if k is not None}

    def coefficient(self, a) -> Coefficient:
        return self._d.get(a, ZERO)

    def is_zero(self) -> bool:
        return not self._d

    def __bool__(self) -> bool:
        return bool(self._d)

    def __add__(self, other: "Lin") -> "Lin":
        out = dict(self._d)
        for k, v in other._d.items():
            out[k] = out.get(k, ZERO) + v
        return Lin(out)

    def __neg__(self) -> "Lin":
        return Lin({k: -v for k, v in self._d.items()})

    def __sub__(self, other: "Lin") -> "Lin":
        return self + (-other)

    def scale(self, c) -> "Lin":
        c = Coefficient.coerce(c)
        if not c:
            return Lin()
        return Lin({k: v * c for k, v in self._d.items()})

    def drop_atoms(self) -> "Lin":
        return Lin({None: self.constant})

    def map_coefficients(self, f) -> "Lin":
        return Lin({k: f(v) for k, v in self._d.items()})

    def __eq__(self, other) -> bool:
        return isinstance(other, Lin) and self._d == other._d

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._d.items()))
        return self._hash

    def __repr__(self) -> str:
        return f"Lin({self._d})"


# ---------------------------------------------------------------------------
# the expression type
# ---------------------------------------------------------------------------

_ORIGIN_NAMES = {
    0: "delta",
    1: "ddelta",
    2: "lapdelta",
    3: "dlapdelta",
    4: "lap2delta",
    5: "dlap2delta",
    6: "lap3delta",
}
ORIGIN_BY_NAME = {v: k for k, v in _ORIGIN_NAMES.items()}


def origin_sign(n: int) -> int:
    """``d^n delta = origin_sign(n) * <printed aggregate>``."""
    return -1 if (n // 2) % 2 else 1


def regular_monomial(k: int, e: int) -> tuple[int, str]:
    """Printed monomial for ``r^k w^e`` and the sign relating the two."""
    if e == 1 and k >= 1 and k % 2 == 1:
        sign = -1 if (k // 2) % 2 else 1
        return sign, "x" if k == 1 else f"x^{k}"
    parts = []
    if k:
        base = "r" if k > 0 else "rinv"
        parts.append(base if abs(k) == 1 else f"{base}^{abs(k)}")
    if e:
        parts.append("w")
    return 1, "*".join(parts)


def _coef_term(c: Coefficient, body: str) -> str:
    if not body:
        return str(c)
    if c.is_one():
        return body
    if (-c).is_one():
        return "-" + body
    return f"{c}*{body}"


class DistExpr:
    """A (signum)distribution from the catalog, possibly carrying free atoms."""

    __slots__ = ("world", "dim", "regular", "origin", "_hash")

    def __init__(
        self,
        world: World,
        dim: Dimension = SYM,
        regular: Mapping[tuple[int, int], Coefficient] | None = None,
        origin: Mapping[tuple[int, int], Lin] | None = None,
    ) -> None:
        self.world = world
        self.dim = dim
        self.regular = {k: dim.coerce(Coefficient.coerce(c)) for k, c in (regular or {}).items() if c}
        self.regular = {k: c for k, c in self.regular.items() if c}
        org = {}
        for key, lin in (origin or {}).items():
            if not isinstance(lin, Lin):
                lin = Lin.const(lin)
            if dim.value is not None:
                lin = lin.map_coefficients(dim.coerce)
            if lin:
                e, n = key
                if e != world.proper_omega:
                    raise WorldError(
                        f"origin term {'w*' if e else ''}{_ORIGIN_NAMES.get(n, n)} does not belong to a {world.value} expression"
                    )
                if n > MAX_ORDER:
                    raise DivisionRuleMissing(f"delta derivative of order {n} exceeds the catalog (max {MAX_ORDER})")
                org[key] = lin
        self.origin = org
        self._hash = None

    # constructors -------------------------------------------------------
    @classmethod
    def zero(cls, world: World, dim: Dimension = SYM) -> "DistExpr":
        return cls(world, dim)

    @classmethod
    def term(cls, world: World, k: int, e: int, c=ONE, dim: Dimension = SYM) -> "DistExpr":
        return cls(world, dim, {(k, e): Coefficient.coerce(c)})

    @classmethod
    def delta(cls, n: int = 0, world: World = World.DIST, c=ONE, dim: Dimension = SYM) -> "DistExpr":
        return cls(world, dim, origin={(world.proper_omega, n): Lin.const(c)})

    def _new(self, regular, origin, world: World | None = None) -> "DistExpr":
        return DistExpr(world or self.world, self.dim, regular, origin)

    # algebra ------------------------------------------------------------
    def __add__(self, other: "DistExpr") -> "DistExpr":
        if not isinstance(other, DistExpr):
            return NotImplemented
        _check_same(self, other)
        reg = dict(self.regular)
        for k, c in other.regular.items():
            reg[k] = reg.get(k, ZERO) + c
        org = dict(self.origin)
        for k, lin in other.origin.items():
            org[k] = org.get(k, Lin()) + lin
        return self._new(reg, org)

    def __neg__(self) -> "DistExpr":
        return self.scale(-1)

    def __sub__(self, other: "DistExpr") -> "DistExpr":
        return self + (-other)

    def scale(self, c) -> "DistExpr":
        c = self.dim.coerce(Coefficient.coerce(c))
        return self._new(
            {k: v * c for k, v in self.regular.items()},
            {k: lin.scale(c) for k, lin in self.origin.items()},
        )

    def __mul__(self, c):
        return self.scale(c)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, DistExpr):
            return NotImplemented
        return (
            self.world == other.world
            and self.dim == other.dim
            and self.regular == other.regular
            and self.origin == other.origin
        )

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(
                (self.world, self.dim, frozenset(self.regular.items()), frozenset(self.origin.items()))
            )
        return self._hash

    # inspection ---------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.regular and not self.origin

    def atoms(self) -> set[ConstantAtom]:
        out: set[ConstantAtom] = set()
        for lin in self.origin.values():
            out |= lin.atoms()
        return out

    def has_atoms(self) -> bool:
        return bool(self.atoms())

    def representative(self) -> "DistExpr":
        """The expression with every free atom set to zero."""
        return self._new(self.regular, {k: lin.drop_atoms() for k, lin in self.origin.items()})

    def regular_part(self) -> "DistExpr":
        return self._new(self.regular, {})

    def origin_part(self) -> "DistExpr":
        return self._new({}, self.origin)

    def is_origin_only(self) -> bool:
        return not self.regular

    def term_parities(self) -> set[int]:
        """Clifford parity of each term: w-exponent plus delta order, mod 2."""
        out = {e % 2 for (_, e) in self.regular}
        out |= {(e + n) % 2 for (e, n) in self.origin}
        return out

    def is_radial(self) -> bool:
        """Every term is rotation invariant (even parity)."""
        return self.term_parities() <= {0}

    @property
    def parity(self) -> set[int]:
        """``k + e`` for regular terms and the delta order for origin terms, mod 2."""
        out = {(k + e) % 2 for (k, e) in self.regular}
        out |= {n % 2 for (_, n) in self.origin}
        return out

    @property
    def mixed_parity(self) -> bool:
        return len(self.parity) > 1

    def specialize(self, m0: int) -> "DistExpr":
        dim = Dimension(m0)
        return DistExpr(
            self.world,
            dim,
            {k: c.specialize(m0) for k, c in self.regular.items()},
            {k: lin.map_coefficients(lambda c: c.specialize(m0)) for k, lin in self.origin.items()},
        )

    # printing -----------------------------------------------------------
    def terms_text(self) -> list[str]:
        parts = []
        for (k, e), c in sorted(self.regular.items()):
            sign, body = regular_monomial(k, e)
            parts.append(_coef_term(c * sign, body))
        for (e, n), lin in sorted(self.origin.items()):
            name = ("w*" if e else "") + _ORIGIN_NAMES[n]
            s = origin_sign(n)
            for atom, c in lin.items():
                body = name if atom is None else f"{name}*{atom.name}"
                parts.append(_coef_term(c * s, body))
        return parts

    def __str__(self) -> str:
        parts = self.terms_text()
        if not parts:
            return "0"
        out = parts[0]
        for p in parts[1:]:
            out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return out

    def __repr__(self) -> str:
        return f"DistExpr[{self.world.value}]({self})"

    def to_json(self) -> dict:
        atoms = sorted(self.atoms(), key=ConstantAtom.sort_key)
        return {
            "world": self.world.value,
            "m": str(self.dim),
            "text": str(self),
            "regular": [[k, e, str(c)] for (k, e), c in sorted(self.regular.items())],
            "origin": [
                [_ORIGIN_NAMES[n], e, [[a.name if a else None, str(c)] for a, c in lin.items()]]
                for (e, n), lin in sorted(self.origin.items())
            ],
            "atoms": [[a.name, a.kind] for a in atoms],
        }


def _check_same(a: DistExpr, b: DistExpr) -> None:
    if a.world != b.world:
        raise WorldError(f"cannot add a {a.world.value} and a {b.world.value} expression")
    if a.dim != b.dim:
        from .errors import DimensionMismatch

        raise DimensionMismatch(f"dimensions differ ({a.dim} vs {b.dim})")


# ---------------------------------------------------------------------------
# equivalence classes and constraint systems
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EquivClass:
    """A distribution determined up to the span of its free atoms."""

    expr: DistExpr
    notes: tuple[str, ...] = ()

    @property
    def world(self) -> World:
        return self.expr.world

    @property
    def dim(self) -> Dimension:
        return self.expr.dim

    @property
    def free_atoms(self) -> tuple[ConstantAtom, ...]:
        return tuple(sorted(self.expr.atoms(), key=ConstantAtom.sort_key))

    @property
    def representative(self) -> DistExpr:
        return self.expr.representative()

    def is_exact(self) -> bool:
        return not self.expr.has_atoms()

    def free_directions(self) -> set[tuple[int, int]]:
        """Origin keys along which the class is undetermined."""
        return {key for key, lin in self.expr.origin.items() if lin.atoms()}

    def __str__(self) -> str:
        return f"[{self.expr}]"

    def specialize(self, m0: int) -> "EquivClass":
        return EquivClass(self.expr.specialize(m0), self.notes)

    def to_json(self) -> dict:
        out = self.expr.to_json()
        out["class"] = True
        out["representative"] = str(self.representative)
        out["notes"] = list(self.notes)
        return out


Result = "DistExpr | EquivClass"


def as_expr(t) -> DistExpr:
    return t.expr if isinstance(t, EquivClass) else t


def _wrap(expr: DistExpr, always_class: bool, notes: Sequence[str] = ()):
    if always_class or expr.has_atoms():
        return EquivClass(expr, tuple(notes))
    return expr


def class_equal(a, b) -> bool:
    """Equality of classes: same free directions, representatives differing only there."""
    ea, eb = as_expr(a), as_expr(b)
    if ea.world != eb.world or ea.dim != eb.dim:
        return False
    ca, cb = EquivClass(ea), EquivClass(eb)
    dirs = ca.free_directions()
    if dirs != cb.free_directions():
        return False
    diff = ea.representative() - eb.representative()
    if diff.regular:
        return False
    return all(key in dirs for key in diff.origin)


@dataclass(frozen=True)
class ConstraintSystem:
    """Linear equations ``lin = 0`` over constant atoms."""

    equations: tuple[Lin, ...]

    def atoms(self) -> list[ConstantAtom]:
        out: set[ConstantAtom] = set()
        for eq in self.equations:
            out |= eq.atoms()
        return sorted(out, key=ConstantAtom.sort_key)

    def solve(self) -> Solution:
        atoms = self.atoms()
        eqs = [({a: eq.coefficient(a) for a in eq.atoms()}, -eq.constant) for eq in self.equations]
        return solve(eqs, atoms)

    def equation_strings(self) -> list[str]:
        return [lin_equation_string(eq) for eq in self.equations]

    def __str__(self) -> str:
        return "; ".join(self.equation_strings()) or "(none)"

    def specialize(self, m0: int) -> "ConstraintSystem":
        eqs = [eq.map_coefficients(lambda c: c.specialize(m0)) for eq in self.equations]
        return ConstraintSystem(tuple(e for e in eqs if e))

    def to_json(self) -> dict:
        sol = self.solve()
        return {
            "equations": self.equation_strings(),
            "rank": sol.rank,
            "free": [a.name for a in sol.free],
            "solved": [
                f"{v.name} = " + _solved_rhs(rhs, deps) for v, rhs, deps in sol.pivots
            ],
        }


def _solved_rhs(rhs: Coefficient, deps) -> str:
    lin = Lin({None: rhs, **{a: -c for a, c in deps}})
    return _lin_string(lin)


def _lin_string(lin: Lin) -> str:
    parts = []
    for a, c in lin.items():
        parts.append(_coef_term(c, "" if a is None else a.name))
    if not parts:
        return "0"
    out = parts[0]
    for p in parts[1:]:
        out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
    return out


def lin_equation_string(lin: Lin) -> str:
    """``lin = 0`` with a positive leading atom coefficient."""
    items = [(a, c) for a, c in lin.items() if a is not None]
    if items and items[0][1].num.LC < 0:
        lin = -lin
    rhs = -lin.constant
    body = _lin_string(Lin({a: c for a, c in lin.items() if a is not None}))
    return f"{body} = {rhs}"


def normalize_system(system: ConstraintSystem) -> ConstraintSystem:
    """Scale every equation to a unit leading atom coefficient."""
    out = []
    for eq in system.equations:
        items = [(a, c) for a, c in eq.items() if a is not None]
        if not items:
            out.append(eq)
            continue
        out.append(eq.scale(items[0][1].inverse()))
    return ConstraintSystem(tuple(out))


# ---------------------------------------------------------------------------
# termwise rules (valid in both worlds: x, E and Gamma commute with w)
# ---------------------------------------------------------------------------


def _a(n: int, dim: Dimension) -> Coefficient:
    """``x d^n delta = a_n d^(n-1) delta``."""
    if n % 2 == 0:
        return Coefficient(n)
    return dim.m + (n - 1)


def _map_terms(t: DistExpr, reg_rule, org_rule, world: World | None = None) -> DistExpr:
    reg: dict = {}
    org: dict = {}
    for key, c in t.regular.items():
        for nkey, f in reg_rule(*key):
            if f:
                reg[nkey] = reg.get(nkey, ZERO) + c * f
    for key, lin in t.origin.items():
        for kind, nkey, f in org_rule(*key):
            if not f:
                continue
            if kind == "reg":
                raise DivisionRuleMissing("origin term cannot map to a regular term")
            org[nkey] = org.get(nkey, Lin()) + lin.scale(f)
    return DistExpr(world or t.world, t.dim, reg, org)


def mul_x_raw(t: DistExpr) -> DistExpr:
    m = t.dim

    def reg(k, e):
        return [((k + 1, 1), ONE)] if e == 0 else [((k + 1, 0), -ONE)]

    def org(e, n):
        if n == 0:
            return []
        return [("org", (e, n - 1), _a(n, m))]

    return _map_terms(t, reg, org)


def euler_raw(t: DistExpr) -> DistExpr:
    m = t.dim.m
    return _map_terms(
        t,
        lambda k, e: [((k, e), Coefficient(k))],
        lambda e, n: [("org", (e, n), -(m + n))],
    )


def gamma_raw(t: DistExpr) -> DistExpr:
    m1 = t.dim.m - 1
    return _map_terms(
        t,
        lambda k, e: [((k, e), m1 if e else ZERO)],
        lambda e, n: [("org", (e, n), m1 if (e + n) % 2 else ZERO)],
    )


def omega_raw(t: DistExpr) -> DistExpr:
    """Left multiplication by w; flips the world."""
    return _map_terms(
        t,
        lambda k, e: [((k, 1), ONE)] if e == 0 else [((k, 0), -ONE)],
        lambda e, n: [("org", (1, n), ONE)] if e == 0 else [("org", (0, n), -ONE)],
        world=t.world.flipped(),
    )


def dirac_raw(t: DistExpr) -> DistExpr:
    """Clifford-Dirac operator on a distribution (exact on the catalog)."""
    if t.world is not World.DIST:
        raise WorldError("the exact Dirac rule acts on distributions")
    dim = t.dim
    for k, e in t.regular:
        if not dim.exceeds_minus_m(k - 1):
            raise NonIntegrable(
                f"derivative of r^{k}{'w' if e else ''} is not locally integrable for m = {dim}"
            )

    def reg(k, e):
        if e == 0:
            return [((k - 1, 1), Coefficient(k))]
        return [((k - 1, 0), -(dim.m + (k - 1)))]

    def org(e, n):
        return [("org", (e, n + 1), ONE)]

    return _map_terms(t, reg, org)


def _division_kind(t: DistExpr) -> str:
    """Kind of the kernel constant: scalar when the divided distribution is odd."""
    parities = (t if t.world is World.DIST else omega_raw(t)).term_parities()
    return "scalar" if parities == {1} else "vector"


def divide_x_raw(
    t: DistExpr,
    factory: AtomFactory | None,
    unique: bool,
    source: str = "division by x",
    kind: str | None = None,
) -> DistExpr:
    """Representative of ``(1/x) t`` plus, unless ``unique``, one kernel atom."""
    dim = t.dim

    def reg(k, e):
        return [((k - 1, 1), -ONE)] if e == 0 else [((k - 1, 0), ONE)]

    def org(e, n):
        if n + 1 > MAX_ORDER:
            raise DivisionRuleMissing(f"(1/x) d^{n} delta exceeds the catalog order {MAX_ORDER}")
        return [("org", (e, n + 1), _a(n + 1, dim).inverse())]

    out = _map_terms(t, reg, org)
    if not unique:
        factory = factory or AtomFactory()
        atom = factory.fresh(kind or _division_kind(t), source)
        out = out + DistExpr(t.world, dim, origin={(t.world.proper_omega, 0): Lin.atom(atom)})
    return out


def divide_r2_raw(
    t: DistExpr,
    factory: AtomFactory | None,
    atoms: Sequence[ConstantAtom] = (),
    source: str = "division by r^2",
) -> DistExpr:
    """Representative of ``(1/r^2) t`` plus the given kernel atoms on delta and d delta."""
    dim = t.dim

    def reg(k, e):
        return [((k - 2, e), ONE)]

    def org(e, n):
        if n + 2 > MAX_ORDER:
            raise DivisionRuleMissing(f"(1/r^2) d^{n} delta exceeds the catalog order {MAX_ORDER}")
        return [("org", (e, n + 2), -(_a(n + 2, dim) * _a(n + 1, dim)).inverse())]

    out = _map_terms(t, reg, org)
    e0 = t.world.proper_omega
    for n, atom in enumerate(atoms):
        out = out + DistExpr(t.world, dim, origin={(e0, n): Lin.atom(atom)})
    return out


def _uniqueness(divided: DistExpr) -> tuple[bool, str | None]:
    """Whether dividing ``divided`` by x leaves no kernel freedom.

    Rotation invariance pins the class when an even distribution is divided;
    homogeneity pins it when the divided expression lives at the origin.
    """
    if divided.is_origin_only():
        return True, "homogeneity rule (input supported at the origin)"
    if divided.world is World.DIST and divided.is_radial():
        return True, "radial-uniqueness rule (rotation invariance)"
    return False, None


# ---------------------------------------------------------------------------
# public operations
# ---------------------------------------------------------------------------


def vee(t) -> DistExpr:
    t = as_expr(t)
    if t.world is not World.DIST:
        raise WorldError("vee expects a distribution")
    return omega_raw(t)


def wedge(u) -> DistExpr:
    u = as_expr(u)
    if u.world is not World.SIGNUM:
        raise WorldError("wedge expects a signumdistribution")
    return -omega_raw(u)


def _carry(t, out: DistExpr):
    """Keep class-ness of the input when the output still carries atoms."""
    if isinstance(t, EquivClass):
        return _wrap(out, False, t.notes)
    return out


def mul_omega(t):
    """Multiplication by w (both worlds): vee on distributions, ``-wedge`` on signumdistributions."""
    return _carry(t, omega_raw(as_expr(t)))


def mul_x(t):
    """Multiplication by x; same world (x and w commute)."""
    return _carry(t, mul_x_raw(as_expr(t)))


def mul_r(t):
    """``r T = (-x T)^v`` on distributions and ``r U = x U^`` on signumdistributions."""
    e = as_expr(t)
    if e.world is World.DIST:
        out = omega_raw(-mul_x_raw(e))
    else:
        out = mul_x_raw(-omega_raw(e))
    return _carry(t, out)


def mul_r2(t):
    e = as_expr(t)
    return _carry(t, -mul_x_raw(mul_x_raw(e)))


def euler_apply(t):
    return _carry(t, euler_raw(as_expr(t)))


def gamma_apply(t):
    """Gamma; on signumdistributions through its partner ``(m - 1) - Gamma``."""
    return _carry(t, gamma_raw(as_expr(t)))


def divide_by_x(t, factory: AtomFactory | None = None, unique: bool | None = None) -> EquivClass:
    e = as_expr(t)
    notes = []
    if unique is None:
        unique, why = _uniqueness(e)
        if why:
            notes.append(why)
    out = divide_x_raw(e, factory, unique, "division by x")
    return EquivClass(out, tuple(notes))


def divide_by_r(t, factory: AtomFactory | None = None) -> EquivClass:
    """``[(1/r) T] = w [(1/x) T]`` and ``[(1/r) U] = [(1/x) w U]``; flips the world."""
    e = as_expr(t)
    inner = e if e.world is World.DIST else omega_raw(e)
    unique, why = _uniqueness(inner)
    out = divide_x_raw(inner, factory, unique, "division by r")
    if e.world is World.DIST:
        out = omega_raw(out)
    return EquivClass(out, (why,) if why else ())


def radial_derivative(t, factory: AtomFactory | None = None) -> EquivClass:
    """``[d_r T] = [(1/x) E T]^v`` and ``[d_r U] = [(1/x) E w U]``; flips the world."""
    e = as_expr(t)
    if e.world is World.DIST:
        inner = euler_raw(e)
        unique, why = _uniqueness(inner)
        out = omega_raw(divide_x_raw(inner, factory, unique, "radial derivative"))
    else:
        inner = euler_raw(omega_raw(e))
        unique, why = _uniqueness(inner)
        out = divide_x_raw(inner, factory, unique, "radial derivative")
    return EquivClass(out, (why,) if why else ())


def angular_derivative(t):
    """``d_w T = (Gamma T)^v`` and ``d_w U = (d_w w) U^ = ((1 - m) + Gamma) U^``; exact."""
    e = as_expr(t)
    if e.world is World.DIST:
        out = omega_raw(gamma_raw(e))
    else:
        a = wedge(e)
        out = gamma_raw(a) + a.scale(1 - e.dim.m)
    return _carry(t, out)


def radial_dirac(t, factory: AtomFactory | None = None) -> EquivClass:
    """``w d_r T = -[(1/x) E T]`` on distributions."""
    e = _need_dist(t)
    inner = euler_raw(e)
    unique, why = _uniqueness(inner)
    out = divide_x_raw(-inner, factory, unique, "radial Dirac")
    return EquivClass(out, (why,) if why else ())


def angular_dirac(t, factory: AtomFactory | None = None) -> EquivClass:
    """``(1/r) d_w T = -[(1/x) Gamma T]`` on distributions."""
    e = _need_dist(t)
    inner = gamma_raw(e)
    unique, why = _uniqueness(inner)
    out = divide_x_raw(-inner, factory, unique, "angular Dirac")
    return EquivClass(out, (why,) if why else ())


def _need_dist(t) -> DistExpr:
    e = as_expr(t)
    if e.world is not World.DIST:
        raise WorldError("operation expects a distribution")
    return e


def dirac_apply(t, factory: AtomFactory | None = None):
    """Exact on distributions; ``[(1/x)(x d) U]`` on signumdistributions."""
    e = as_expr(t)
    if e.world is World.DIST:
        return _carry(t, dirac_raw(e))
    # (x d) acts on U through its partner -E + Gamma - (m - 1)
    a = wedge(e)
    xd = omega_raw(-euler_raw(a) + gamma_raw(a) - a.scale(e.dim.m - 1))
    unique, why = _uniqueness(xd)
    out = divide_x_raw(xd, factory, unique, "Dirac on a signumdistribution")
    return EquivClass(out, (why,) if why else ())


def laplace_apply(t, factory: AtomFactory | None = None):
    """``Lap = -d^2`` on distributions; on signumdistributions through the partner Z."""
    e = as_expr(t)
    if e.world is World.DIST:
        return _carry(t, -dirac_raw(dirac_raw(e)))
    from .operators import op

    return signum_op_apply(op("Lap", e.dim), e, factory)


def laplace_beltrami_apply(t):
    """``Lap* = (m - 2) Gamma - Gamma^2``; exact in both worlds."""
    e = as_expr(t)
    g = gamma_raw(e)
    return _carry(t, g.scale(e.dim.m - 2) - gamma_raw(g))


# ---------------------------------------------------------------------------
# general operators
# ---------------------------------------------------------------------------

_LETTER_ACTION = {
    "E": euler_raw,
    "Gamma": gamma_raw,
    "x": mul_x_raw,
    "Dirac": dirac_raw,
}


def _apply_cartesian(decomp, t: DistExpr) -> DistExpr:
    out = DistExpr.zero(t.world, t.dim)
    for c, word in decomp:
        cur = t
        for letter in reversed(word):
            cur = _LETTER_ACTION[letter](cur)
        out = out + cur.scale(c)
    return out


def _world_flips(key) -> int:
    k, e, q, p = key
    return (abs(k) + e + q + p) % 2


def apply_operator(p, t, factory: AtomFactory | None = None):
    """Act with a radial-algebra operator on a catalog (signum)distribution.

    Polynomial-coefficient operators (words in E, Gamma, x and the Dirac
    operator) act exactly.  Anything else is applied monomial by monomial
    through the single-step definitions (multiplication by r and w, the radial
    and angular derivatives, division by r), which yields an equivalence class.
    """
    from .operators import cartesian_decomposition, normalize, signum_partner

    e = as_expr(t)
    nf = normalize(p)
    if nf.dim != e.dim:
        from .errors import DimensionMismatch

        raise DimensionMismatch(f"operator in dimension {nf.dim}, expression in {e.dim}")
    if nf.is_zero():
        return _carry(t, DistExpr.zero(e.world, e.dim))
    flips = {_world_flips(k) for k in nf.keys()}
    if len(flips) > 1:
        raise WorldError("operator mixes world-preserving and world-flipping monomials")

    if e.world is World.DIST:
        decomp = cartesian_decomposition(nf)
        if decomp is not None:
            return _carry(t, _apply_cartesian(decomp, e))
    else:
        partner = signum_partner(nf)
        decomp = cartesian_decomposition(partner)
        if decomp is not None:
            return _carry(t, omega_raw(_apply_cartesian(decomp, wedge(e))))

    factory = factory or AtomFactory()
    total = None
    for (k, eps, q, pp), c in nf.terms:
        cur = e
        for _ in range(pp):
            cur = radial_derivative(cur, factory).expr
        for _ in range(q):
            cur = as_expr(angular_derivative(cur))
        if eps:
            cur = omega_raw(cur)
        for _ in range(abs(k)):
            cur = as_expr(mul_r(cur)) if k > 0 else divide_by_r(cur, factory).expr
        cur = cur.scale(c)
        total = cur if total is None else total + cur
    return EquivClass(total, ("monomial-wise action",))


def signum_op_apply(p, u, factory: AtomFactory | None = None):
    """``P^v U = (P U^)^v``: act with ``p`` on a signumdistribution through its partner."""
    e = as_expr(u)
    if e.world is not World.SIGNUM:
        raise WorldError("signum_op_apply expects a signumdistribution")
    return apply_operator(p, u, factory)


# ---------------------------------------------------------------------------
# decompositions with entanglement
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Decomposition:
    parts: tuple
    weights: tuple[Coefficient, ...]
    total: DistExpr
    system: ConstraintSystem
    labels: tuple[str, ...] = ()

    def specialize(self, m0: int) -> "Decomposition":
        return Decomposition(
            tuple(p.specialize(m0) for p in self.parts),
            tuple(w.specialize(m0) for w in self.weights),
            self.total.specialize(m0),
            self.system.specialize(m0),
            self.labels,
        )

    def to_json(self) -> dict:
        return {
            "parts": [
                {"label": lab, "value": p.to_json()} for lab, p in zip(self.labels, self.parts)
            ],
            "weights": [str(w) for w in self.weights],
            "total": self.total.to_json(),
            "constraints": self.system.to_json(),
        }


def residual_system(parts, weights, total: DistExpr) -> ConstraintSystem:
    """Constraints making ``sum(w_i * part_i) = total`` hold exactly."""
    res = -total
    for p, w in zip(parts, weights):
        res = res + as_expr(p).scale(w)
    if res.regular:
        raise Inconsistent(f"regular parts do not add up: residual {res.regular_part()}")
    eqs = []
    for key, lin in sorted(res.origin.items()):
        if not lin.atoms():
            raise Inconsistent(f"origin residual without free constants: {res}")
        eqs.append(lin)
    return ConstraintSystem(tuple(eqs))


def dirac_parts(t, factory: AtomFactory | None = None) -> Decomposition:
    """``w d_r T + (1/r) d_w T = d T`` with its entanglement constraints."""
    e = _need_dist(t)
    factory = factory or AtomFactory()
    rad = radial_dirac(e, factory)
    ang = angular_dirac(e, factory)
    total = dirac_raw(e)
    weights = (ONE, ONE)
    system = residual_system((rad, ang), weights, total)
    return Decomposition((rad, ang), weights, total, system, ("w*dr", "rinv*dw"))


def laplace_parts(t, factory: AtomFactory | None = None) -> Decomposition:
    """``d_r^2 T``, ``(1/r) d_r T`` and ``(1/r^2) Lap* T`` with entanglement constraints.

    General input follows the three-part template with constants ``c1`` (vector),
    ``c2``, ``c3``, ``c4`` and ``c5`` (vector).  Radial input drops the vector
    constants and the third part (``Lap* T = 0``).  Input supported at the
    origin is homogeneous and every part is unique.
    """
    e = _need_dist(t)
    if e.has_atoms():
        raise DivisionRuleMissing("laplace_parts expects a distribution without free constants")
    dim = e.dim
    m = dim.m
    total = -dirac_raw(dirac_raw(e))
    lapstar = gamma_raw(e).scale(m - 2) - gamma_raw(gamma_raw(e))
    weights = (ONE, m - 1, ONE)
    labels = ("dr^2", "rinv*dr", "rinv^2*LapStar")
    notes: tuple[str, ...]

    if e.is_origin_only():
        s1 = divide_x_raw(-euler_raw(e), None, True)
        p1 = divide_x_raw(euler_raw(s1), None, True)
        p2 = divide_x_raw(s1, None, True)
        p3 = divide_r2_raw(lapstar, None)
        notes = ("homogeneity rule (input supported at the origin)",)
    elif e.is_radial():
        c2 = ConstantAtom("c2", "scalar", "d_r^2 part")
        c3 = ConstantAtom("c3", "scalar", "(1/r) d_r part")
        s1 = divide_x_raw(-euler_raw(e), None, True)
        p1 = divide_x_raw(euler_raw(s1), None, True) + _atom_term(e, 0, c2)
        p2 = divide_x_raw(s1, None, True) + _atom_term(e, 0, c3)
        p3 = DistExpr.zero(e.world, dim)
        notes = ("radial-uniqueness rule (rotation invariance)",)
    else:
        c1 = ConstantAtom("c1", "vector", "w d_r part")
        c2 = ConstantAtom("c2", "scalar", "d_r^2 part")
        c3 = ConstantAtom("c3", "scalar", "(1/r) d_r part")
        c4 = ConstantAtom("c4", "scalar", "(1/r^2) Lap* part")
        c5 = ConstantAtom("c5", "vector", "(1/r^2) Lap* part")
        s1 = divide_x_raw(-euler_raw(e), None, True) + _atom_term(e, 0, c1)
        p1 = divide_x_raw(euler_raw(s1), None, True) + _atom_term(e, 0, c2)
        p2 = divide_x_raw(s1, None, True) + _atom_term(e, 0, c3)
        p3 = divide_r2_raw(lapstar, None, (c4, c5))
        notes = ()
    parts = tuple(EquivClass(p, notes) for p in (p1, p2, p3))
    if not any(p.expr.has_atoms() for p in parts):
        res = -total
        for p, w in zip(parts, weights):
            res = res + p.expr.scale(w)
        if not res.is_zero():
            raise Inconsistent(f"unique parts do not add up to the Laplacian: {res}")
        system = ConstraintSystem(())
    else:
        system = residual_system(parts, weights, total)
    return Decomposition(parts, weights, total, system, labels)


def _atom_term(like: DistExpr, n: int, atom: ConstantAtom) -> DistExpr:
    return DistExpr(like.world, like.dim, origin={(like.world.proper_omega, n): Lin.atom(atom)})


def entanglement_check(parts, total: DistExpr, system: ConstraintSystem | None = None, weights=None) -> dict:
    """Verify that ``system`` is exactly the solvability condition of the split.

    Returns a report with the derived equations, whether they span the same
    affine space as ``system`` and the solved form.
    """
    weights = tuple(weights) if weights is not None else tuple(ONE for _ in parts)
    derived = residual_system(parts, weights, total)
    sol = derived.solve()
    same = True
    if system is not None:
        same = _same_space(derived, system)
    return {
        "equations": derived.equation_strings(),
        "matches": same,
        "rank": sol.rank,
        "free": [a.name for a in sol.free],
        "solution": derived.to_json()["solved"],
    }


def _same_space(a: ConstraintSystem, b: ConstraintSystem) -> bool:
    atoms = sorted(set(a.atoms()) | set(b.atoms()), key=ConstantAtom.sort_key)

    def rref(sys_):
        eqs = [({x: eq.coefficient(x) for x in eq.atoms()}, -eq.constant) for eq in sys_.equations]
        sol = solve(eqs, atoms)
        return sol.pivots

    return rref(a) == rref(b)


# ---------------------------------------------------------------------------
# misc
# ---------------------------------------------------------------------------


def check_regular(t: DistExpr) -> None:
    """Raise unless every regular term is locally integrable."""
    for k, e in t.regular:
        if not t.dim.exceeds_minus_m(k):
            raise NonIntegrable(f"r^{k} is not locally integrable for m = {t.dim}")


def from_catalog(world: World, dim: Dimension, regular=(), origin=()) -> DistExpr:
    """Build a catalog element and check it is a genuine (signum)distribution."""
    reg = {}
    for k, e, c in regular:
        reg[(k, e)] = reg.get((k, e), ZERO) + Coefficient.coerce(c)
    org = {}
    for n, c in origin:
        if n > CATALOG_ORDER:
            raise DivisionRuleMissing(f"origin order {n} is beyond the catalog (max {CATALOG_ORDER})")
        key = (world.proper_omega, n)
        org[key] = org.get(key, Lin()) + Lin.const(c)
    t = DistExpr(world, dim, reg, org)
    check_regular(t)
    return t


def iter_catalog(dim: Dimension = SYM, world: World = World.DIST, kmin: int = -1, kmax: int = 4):
    """The basis catalog: ``r^k w^e`` for ``kmin <= k <= kmax`` and ``d^n delta`` for ``n <= 2``."""
    for k in range(kmin, kmax + 1):
        for e in (0, 1):
            if dim.exceeds_minus_m(k):
                yield DistExpr.term(world, k, e, dim=dim)
    for n in range(3):
        yield DistExpr.delta(n, world, dim=dim)
