"""The radial operator algebra generated by r, 1/r, w, dr and dw.

Words are normalized to sums of monomials ``r^k w^e dw^q dr^p`` using

* ``w w = -1`` and ``dw w = (1 - m) - w dw``,
* ``dr r = 1 + r dr`` (hence ``dr r^k = r^k dr + k r^(k-1)``),
* ``r`` and ``1/r`` commute with ``w`` and ``dw``; ``dr`` commutes with ``w``
  and ``dw``; ``r * (1/r) = 1``.

Two independent routes exist: :func:`normalize` multiplies monomials in closed
form, while :func:`normalize_by_rewriting` applies single rewrite steps in any
order.  Their agreement is the confluence property.
"""

from __future__ import annotations

import enum
import random
from functools import lru_cache
from math import comb
from typing import Iterable, Mapping

from .coeff import ONE, ZERO, SYM, Coefficient, Dimension
from .errors import DimensionMismatch

Key = tuple  # (k, e, q, p)


class Generator(enum.Enum):
    MulR = "r"
    MulRInv = "rinv"
    MulOmega = "w"
    DerR = "dr"
    DerOmega = "dw"

    def __str__(self) -> str:
        return self.value


_GEN_KEY = {
    Generator.MulR: (1, 0, 0, 0),
    Generator.MulRInv: (-1, 0, 0, 0),
    Generator.MulOmega: (0, 1, 0, 0),
    Generator.DerOmega: (0, 0, 1, 0),
    Generator.DerR: (0, 0, 0, 1),
}


def _check_dim(a: Dimension, b: Dimension) -> Dimension:
    if a != b:
        raise DimensionMismatch(f"operators live in different dimensions ({a} vs {b})")
    return a


# ---------------------------------------------------------------------------
# words
# ---------------------------------------------------------------------------


class OperatorExpr:
    """A finite linear combination of generator words."""

    __slots__ = ("terms", "dim")

    def __init__(self, terms: Iterable[tuple[Coefficient, tuple[Generator, ...]]] = (), dim: Dimension = SYM):
        self.terms = tuple((dim.coerce(Coefficient.coerce(c)), tuple(w)) for c, w in terms if c)
        self.dim = dim

    @classmethod
    def word(cls, *gens: Generator, dim: Dimension = SYM) -> "OperatorExpr":
        return cls([(ONE, tuple(gens))], dim)

    @classmethod
    def scalar(cls, c, dim: Dimension = SYM) -> "OperatorExpr":
        return cls([(Coefficient.coerce(c), ())], dim)

    def __add__(self, other):
        other = _as_expr(other, self.dim)
        return OperatorExpr(self.terms + other.terms, _check_dim(self.dim, other.dim))

    __radd__ = __add__

    def __neg__(self):
        return OperatorExpr([(-c, w) for c, w in self.terms], self.dim)

    def __sub__(self, other):
        return self + (-_as_expr(other, self.dim))

    def __rsub__(self, other):
        return _as_expr(other, self.dim) - self

    def __mul__(self, other):
        if isinstance(other, (int, Coefficient)) or _is_fraction(other):
            c = Coefficient.coerce(other)
            return OperatorExpr([(a * c, w) for a, w in self.terms], self.dim)
        other = _as_expr(other, self.dim)
        return compose(self, other)

    def __rmul__(self, other):
        c = Coefficient.coerce(other)
        return OperatorExpr([(c * a, w) for a, w in self.terms], self.dim)

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are not operators")
        out = OperatorExpr.scalar(1, self.dim)
        for _ in range(n):
            out = compose(out, self)
        return out

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for c, w in self.terms:
            body = "*".join(str(g) for g in w)
            parts.append(_term_string(c, body))
        return _join_terms(parts)

    def __repr__(self) -> str:
        return f"OperatorExpr({self})"


def _is_fraction(x) -> bool:
    from fractions import Fraction

    return isinstance(x, Fraction)


def _as_expr(x, dim: Dimension) -> OperatorExpr:
    if isinstance(x, OperatorExpr):
        return x
    if isinstance(x, NormalForm):
        return x.to_expr()
    return OperatorExpr.scalar(x, dim)


def compose(a: OperatorExpr, b: OperatorExpr) -> OperatorExpr:
    """Word concatenation distributed over both sums."""
    a = _as_expr(a, getattr(b, "dim", SYM))
    b = _as_expr(b, a.dim)
    dim = _check_dim(a.dim, b.dim)
    return OperatorExpr([(ca * cb, wa + wb) for ca, wa in a.terms for cb, wb in b.terms], dim)


# ---------------------------------------------------------------------------
# normal forms
# ---------------------------------------------------------------------------


class NormalForm:
    """Canonical sum of ``c * r^k w^e dw^q dr^p`` keyed by ``(k, e, q, p)``."""

    __slots__ = ("_terms", "dim", "_hash")

    def __init__(self, terms: Mapping[Key, Coefficient] | None = None, dim: Dimension = SYM):
        self._terms = {k: dim.coerce(c) for k, c in (terms or {}).items() if c}
        self.dim = dim
        self._hash = None

    @property
    def terms(self) -> list[tuple[Key, Coefficient]]:
        return sorted(self._terms.items())

    def coefficient(self, key: Key) -> Coefficient:
        return self._terms.get(key, ZERO)

    def keys(self):
        return set(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __add__(self, other):
        other = _as_normal(other, self.dim)
        _check_dim(self.dim, other.dim)
        out = dict(self._terms)
        for k, c in other._terms.items():
            out[k] = out.get(k, ZERO) + c
        return NormalForm(out, self.dim)

    __radd__ = __add__

    def __neg__(self):
        return NormalForm({k: -c for k, c in self._terms.items()}, self.dim)

    def __sub__(self, other):
        return self + (-_as_normal(other, self.dim))

    def __rsub__(self, other):
        return _as_normal(other, self.dim) - self

    def __mul__(self, other):
        if isinstance(other, (int, Coefficient)) or _is_fraction(other):
            c = self.dim.coerce(Coefficient.coerce(other))
            return NormalForm({k: v * c for k, v in self._terms.items()}, self.dim)
        other = _as_normal(other, self.dim)
        return _nf_product(self, other)

    def __rmul__(self, other):
        c = self.dim.coerce(Coefficient.coerce(other))
        return NormalForm({k: c * v for k, v in self._terms.items()}, self.dim)

    def __pow__(self, n: int):
        out = NormalForm({(0, 0, 0, 0): ONE}, self.dim)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, (OperatorExpr, int, Coefficient)):
            other = _as_normal(other, self.dim)
        if not isinstance(other, NormalForm):
            return NotImplemented
        return self.dim == other.dim and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.dim, frozenset(self._terms.items())))
        return self._hash

    def to_expr(self) -> OperatorExpr:
        return OperatorExpr([(c, key_word(k)) for k, c in self.terms], self.dim)

    def map_coefficients(self, f) -> "NormalForm":
        return NormalForm({k: f(c) for k, c in self._terms.items()}, self.dim)

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        return _join_terms([_term_string(c, key_string(k)) for k, c in self.terms])

    def __repr__(self) -> str:
        return f"NormalForm({self})"


def _as_normal(x, dim: Dimension) -> NormalForm:
    if isinstance(x, NormalForm):
        return x
    if isinstance(x, OperatorExpr):
        return normalize(x)
    return NormalForm({(0, 0, 0, 0): Coefficient.coerce(x)}, dim)


def key_word(key: Key) -> tuple[Generator, ...]:
    k, e, q, p = key
    r = (Generator.MulR,) * k if k >= 0 else (Generator.MulRInv,) * (-k)
    return r + (Generator.MulOmega,) * e + (Generator.DerOmega,) * q + (Generator.DerR,) * p


def key_string(key: Key) -> str:
    k, e, q, p = key
    parts = []
    if k:
        base = "r" if k > 0 else "rinv"
        parts.append(base if abs(k) == 1 else f"{base}^{abs(k)}")
    if e:
        parts.append("w")
    if q:
        parts.append("dw" if q == 1 else f"dw^{q}")
    if p:
        parts.append("dr" if p == 1 else f"dr^{p}")
    return "*".join(parts)


def _term_string(c: Coefficient, body: str) -> str:
    if not body:
        return str(c)
    if c.is_one():
        return body
    if (-c).is_one():
        return "-" + body
    return f"{c}*{body}"


def _join_terms(parts: list[str]) -> str:
    out = parts[0]
    for p in parts[1:]:
        out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
    return out


def _falling(k: int, i: int) -> int:
    out = 1
    for j in range(i):
        out *= k - j
    return out


@lru_cache(maxsize=65536)
def _monomial_product(a: Key, b: Key, dim: Dimension) -> tuple[tuple[Key, Coefficient], ...]:
    """``(r^k1 w^e1 dw^q1 dr^p1)(r^k2 w^e2 dw^q2 dr^p2)`` in normal form."""
    k1, e1, q1, p1 = a
    k2, e2, q2, p2 = b
    one_minus_m = 1 - dim.m
    out: dict[Key, Coefficient] = {}

    # dw^q1 w^e2 = (-1)^q1 w^e2 dw^q1 + [e2 = 1, q1 odd] (1 - m) dw^(q1 - 1)
    angular: list[tuple[int, int, Coefficient]] = []  # (e, q, coef)
    if e2 == 0:
        angular.append((0, q1, ONE))
    else:
        angular.append((1, q1, Coefficient((-1) ** q1)))
        if q1 % 2 == 1:
            angular.append((0, q1 - 1, one_minus_m))

    for i in range(p1 + 1):
        lf = comb(p1, i) * _falling(k2, i)
        if lf == 0:
            continue
        k = k1 + k2 - i
        p = p1 - i + p2
        for e_mid, q_mid, c_mid in angular:
            # w^e1 w^e_mid
            e = e1 + e_mid
            sign = 1
            if e == 2:
                e, sign = 0, -1
            key = (k, e, q_mid + q2, p)
            out[key] = out.get(key, ZERO) + c_mid * (lf * sign)
    return tuple((k, c) for k, c in out.items() if c)


def _nf_product(a: NormalForm, b: NormalForm) -> NormalForm:
    dim = _check_dim(a.dim, b.dim)
    out: dict[Key, Coefficient] = {}
    for ka, ca in a._terms.items():
        for kb, cb in b._terms.items():
            cab = ca * cb
            for k, c in _monomial_product(ka, kb, dim):
                out[k] = out.get(k, ZERO) + cab * c
    return NormalForm(out, dim)


def normalize(expr: OperatorExpr | NormalForm) -> NormalForm:
    """Unique normal form of ``expr``; linear and idempotent."""
    if isinstance(expr, NormalForm):
        return expr
    dim = expr.dim
    out = NormalForm({}, dim)
    acc: dict[Key, Coefficient] = {}
    for c, word in expr.terms:
        cur = NormalForm({(0, 0, 0, 0): c}, dim)
        for g in word:
            cur = _nf_product(cur, NormalForm({_GEN_KEY[g]: ONE}, dim))
        for k, v in cur._terms.items():
            acc[k] = acc.get(k, ZERO) + v
    out = NormalForm(acc, dim)
    return out


# ---------------------------------------------------------------------------
# single-step rewriting (the independent route used for confluence checks)
# ---------------------------------------------------------------------------

R, RI, W, DR, DW = (
    Generator.MulR,
    Generator.MulRInv,
    Generator.MulOmega,
    Generator.DerR,
    Generator.DerOmega,
)

_SWAPS = {(W, R), (W, RI), (DW, R), (DW, RI), (DR, W), (DR, DW)}


def _rule(pair: tuple[Generator, Generator], dim: Dimension):
    """Replacement for an adjacent pair, or None if the pair is not a redex."""
    a, b = pair
    if (a, b) in ((R, RI), (RI, R)):
        return [(ONE, ())]
    if (a, b) == (W, W):
        return [(-ONE, ())]
    if (a, b) == (DW, W):
        return [(1 - dim.m, ()), (-ONE, (W, DW))]
    if (a, b) == (DR, R):
        return [(ONE, (R, DR)), (ONE, ())]
    if (a, b) == (DR, RI):
        return [(ONE, (RI, DR)), (-ONE, (RI, RI))]
    if (a, b) in _SWAPS:
        return [(ONE, (b, a))]
    return None


def redexes(word: tuple[Generator, ...], dim: Dimension = SYM) -> list[int]:
    return [i for i in range(len(word) - 1) if _rule((word[i], word[i + 1]), dim) is not None]


def rewrite_once(word: tuple[Generator, ...], pos: int, dim: Dimension = SYM):
    """Apply the rule at ``pos``; returns a list of ``(coef, word)``."""
    rep = _rule((word[pos], word[pos + 1]), dim)
    if rep is None:
        raise ValueError(f"no rule applies at position {pos}")
    return [(c, word[:pos] + w + word[pos + 2 :]) for c, w in rep]


def word_key(word: tuple[Generator, ...]) -> Key:
    """Key of a redex-free word."""
    k = sum(1 for g in word if g is R) - sum(1 for g in word if g is RI)
    e = sum(1 for g in word if g is W)
    q = sum(1 for g in word if g is DW)
    p = sum(1 for g in word if g is DR)
    return (k, e, q, p)


def normalize_by_rewriting(expr: OperatorExpr, rng: random.Random | None = None) -> NormalForm:
    """Normalize by single rule applications in a (random) admissible order."""
    rng = rng or random.Random(0)
    dim = expr.dim
    pending = list(expr.terms)
    done: dict[Key, Coefficient] = {}
    while pending:
        i = rng.randrange(len(pending))
        c, word = pending.pop(i)
        spots = redexes(word, dim)
        if not spots:
            key = word_key(word)
            done[key] = done.get(key, ZERO) + c
            continue
        for c2, w2 in rewrite_once(word, rng.choice(spots), dim):
            pending.append((c * c2, w2))
    return NormalForm(done, dim)


# ---------------------------------------------------------------------------
# partner maps, equality, evaluation
# ---------------------------------------------------------------------------


def _omega(dim: Dimension) -> NormalForm:
    return NormalForm({(0, 1, 0, 0): ONE}, dim)


def signum_partner(p: OperatorExpr | NormalForm) -> NormalForm:
    """``P^v = w P (-w)``."""
    nf = normalize(p)
    w = _omega(nf.dim)
    return w * nf * (-w)


def cross_partner(q: OperatorExpr | NormalForm) -> NormalForm:
    """``Q^c = (-w) Q (-w) = w Q w``."""
    nf = normalize(q)
    w = _omega(nf.dim)
    return w * nf * w


def equals(a, b) -> bool:
    return normalize(a) == normalize(b)


def eval_at_dimension(expr: OperatorExpr | NormalForm, m0: int):
    """Substitute ``m = m0`` exactly in every coefficient.

    The returned object lives in dimension ``m0``, so later normalizations use
    ``m0`` in the rewrite rules as well.
    """
    dim = Dimension(m0)
    if isinstance(expr, NormalForm):
        if expr.dim.value not in (None, m0):
            raise DimensionMismatch(f"operator already lives in dimension {expr.dim}")
        return NormalForm({k: c.specialize(m0) for k, c in expr.terms}, dim)
    if expr.dim.value not in (None, m0):
        raise DimensionMismatch(f"operator already lives in dimension {expr.dim}")
    return OperatorExpr([(c.specialize(m0), w) for c, w in expr.terms], dim)


# ---------------------------------------------------------------------------
# named operators
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def macros(dim: Dimension = SYM) -> dict[str, OperatorExpr]:
    """The named operators, expanded into generator words."""
    g = {name: OperatorExpr.word(gen, dim=dim) for name, gen in
         (("r", R), ("rinv", RI), ("w", W), ("dr", DR), ("dw", DW))}
    m = dim.m
    one = OperatorExpr.scalar(1, dim)
    r, rinv, w, dr, dw = g["r"], g["rinv"], g["w"], g["dr"], g["dw"]
    x = r * w
    xinv = -(rinv * w)
    euler = r * dr
    gamma = -(w * dw)
    dirac = w * dr + rinv * dw
    lap = -(dirac * dirac)
    lapstar = w * dw - dw * dw
    sdirac = w * dr - rinv * dw + (m - 1) * (rinv * w)
    zstar = -(gamma * gamma) + m * gamma - (m - 1) * one
    # Z is by definition the signum partner of the Laplacian
    z = signum_partner(lap).to_expr()
    out = dict(g)
    out.update(
        {
            "1": one,
            "x": x,
            "xinv": xinv,
            "E": euler,
            "Gamma": gamma,
            "Dirac": dirac,
            "D": sdirac,
            "Lap": lap,
            "LapStar": lapstar,
            "Z": z,
            "ZStar": zstar,
        }
    )
    return out


def op(name: str, dim: Dimension = SYM) -> OperatorExpr:
    return macros(dim)[name]


# ---------------------------------------------------------------------------
# cartesian expressibility
# ---------------------------------------------------------------------------

CARTESIAN_LETTERS = ("E", "Gamma", "x", "Dirac")


def _cartesian_basis(dim: Dimension, max_len: int = 2) -> list[tuple[str, ...]]:
    words: list[tuple[str, ...]] = [()]
    layer: list[tuple[str, ...]] = [()]
    for _ in range(max_len):
        layer = [w + (a,) for w in layer for a in CARTESIAN_LETTERS]
        words.extend(layer)
    return words


@lru_cache(maxsize=4096)
def cartesian_decomposition(nf: NormalForm) -> tuple[tuple[Coefficient, tuple[str, ...]], ...] | None:
    """Write ``nf`` as a Q(m)-combination of words in E, Gamma, x and Dirac.

    Such operators are polynomial-coefficient differential operators, whose
    action on distributions is unique.  Returns ``None`` when no combination
    of words up to length 2 matches, which is the case for every operator
    carrying a genuine ``1/r`` singularity (D, Z, 1/x, dr, ...).
    """
    from .errors import Inconsistent
    from .linsolve import solve

    dim = nf.dim
    mac = macros(dim)
    basis = _cartesian_basis(dim)
    forms = []
    for word in basis:
        cur = NormalForm({(0, 0, 0, 0): ONE}, dim)
        for letter in word:
            cur = cur * normalize(mac[letter])
        forms.append(cur)
    keys = set(nf.keys())
    for f in forms:
        keys |= f.keys()
    equations = []
    for key in sorted(keys):
        row = {i: f.coefficient(key) for i, f in enumerate(forms) if f.coefficient(key)}
        equations.append((row, nf.coefficient(key)))
    try:
        sol = solve(equations, list(range(len(forms))))
    except Inconsistent:
        return None
    part = sol.particular()
    return tuple((c, basis[i]) for i, c in sorted(part.items()) if c)
