"""Exact coefficients in the rational function field Q(m).

``m`` is the formal dimension symbol.  A :class:`Dimension` either keeps ``m``
symbolic or pins it to a concrete integer, and every rewrite rule that mentions
``m`` asks the dimension for it.  Concrete runs therefore never pass through a
symbolic intermediate.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd as _gcd
from typing import Union

from sympy import QQ
from sympy.polys.rings import PolyElement, ring

from .errors import DenominatorZero, DimensionError

_RING, _M = ring("m", QQ)

Number = Union[int, Fraction]


def _as_poly(value) -> PolyElement:
    if isinstance(value, PolyElement):
        return value
    if isinstance(value, Fraction):
        return _RING(QQ(value.numerator, value.denominator))
    return _RING(value)


class Coefficient:
    """A reduced fraction ``num/den`` of polynomials in ``m`` over Q.

    The denominator is kept monic, which fixes a positive leading coefficient
    and makes equality a plain comparison of the two polynomials.
    """

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num=0, den=1) -> None:
        num = _as_poly(num)
        den = _as_poly(den)
        if not den:
            raise ZeroDivisionError("zero denominator")
        if not num:
            num, den = _RING.zero, _RING.one
        elif den.degree() > 0 or den != _RING.one:
            g = num.gcd(den)
            if g != _RING.one:
                num = num.exquo(g)
                den = den.exquo(g)
            lc = den.LC
            if lc != 1:
                num = num.quo_ground(lc)
                den = den.quo_ground(lc)
        self.num = num
        self.den = den
        self._hash = None

    # construction -------------------------------------------------------
    @classmethod
    def m(cls) -> "Coefficient":
        return cls(_M)

    @classmethod
    def coerce(cls, value) -> "Coefficient":
        if isinstance(value, Coefficient):
            return value
        if isinstance(value, (int, Fraction, PolyElement)):
            return cls(value)
        raise TypeError(f"cannot coerce {type(value).__name__} to Coefficient")

    # predicates ---------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.num

    def is_constant(self) -> bool:
        return self.num.degree() <= 0 and self.den.degree() <= 0

    def __bool__(self) -> bool:
        return bool(self.num)

    # arithmetic ---------------------------------------------------------
    def __add__(self, other):
        try:
            o = Coefficient.coerce(other)
        except TypeError:
            return NotImplemented
        if self.den == o.den:
            return Coefficient(self.num + o.num, self.den)
        return Coefficient(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        c = Coefficient.__new__(Coefficient)
        c.num, c.den, c._hash = -self.num, self.den, None
        return c

    def __sub__(self, other):
        try:
            o = Coefficient.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return Coefficient.coerce(other) + (-self)

    def __mul__(self, other):
        try:
            o = Coefficient.coerce(other)
        except TypeError:
            return NotImplemented
        if not self.num or not o.num:
            return ZERO
        return Coefficient(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def inverse(self) -> "Coefficient":
        if not self.num:
            raise ZeroDivisionError("inverse of zero coefficient")
        return Coefficient(self.den, self.num)

    def __truediv__(self, other):
        try:
            o = Coefficient.coerce(other)
        except TypeError:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        return Coefficient.coerce(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        return Coefficient(self.num**n, self.den**n)

    # comparison ---------------------------------------------------------
    def __eq__(self, other) -> bool:
        if not isinstance(other, Coefficient):
            try:
                other = Coefficient.coerce(other)
            except TypeError:
                return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((tuple(sorted(self.num.items())), tuple(sorted(self.den.items()))))
        return self._hash

    # evaluation ---------------------------------------------------------
    def at(self, m0: int) -> Fraction:
        """Exact value at ``m = m0``."""
        d = self.den(m0) if self.den.degree() > 0 else self.den.LC
        if d == 0:
            raise DenominatorZero(f"denominator of {self} vanishes at m = {m0}")
        n = self.num(m0) if self.num.degree() > 0 else (self.num.LC if self.num else 0)
        q = QQ(n) / QQ(d)
        return Fraction(int(q.numerator), int(q.denominator))

    def specialize(self, m0: int) -> "Coefficient":
        return Coefficient(self.at(m0))

    def to_fraction(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} depends on m")
        return self.at(0)

    def __float__(self) -> float:
        return float(self.to_fraction())

    # printing -----------------------------------------------------------
    def __str__(self) -> str:
        return _format(self.num, self.den)

    def __repr__(self) -> str:
        return f"Coefficient({self})"

    def is_one(self) -> bool:
        return self.num == _RING.one and self.den == _RING.one


ZERO = Coefficient(0)
ONE = Coefficient(1)


def _int_factors(p: PolyElement):
    """Split ``p`` into a rational constant and primitive integer factors."""
    const, factors = p.factor_list()
    const = Fraction(int(const.numerator), int(const.denominator))
    out = []
    for f, e in factors:
        dens = [Fraction(int(c.numerator), int(c.denominator)) for c in f.values()]
        lcm = 1
        for d in dens:
            lcm = lcm * d.denominator // _gcd(lcm, d.denominator)
        ints = [int(d * lcm) for d in dens]
        g = 0
        for v in ints:
            g = _gcd(g, abs(v))
        scale = Fraction(lcm, g)
        const /= scale**e
        out.append((f * QQ(scale.numerator, scale.denominator), e))
    out.sort(key=lambda fe: (fe[0].degree(), _poly_str(fe[0])))
    return const, out


def _poly_str(p: PolyElement) -> str:
    parts = []
    for (deg,), c in sorted(p.items(), key=lambda t: -t[0][0]):
        c = Fraction(int(c.numerator), int(c.denominator))
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if deg == 0:
            body = str(a)
        else:
            mono = "m" if deg == 1 else f"m^{deg}"
            body = mono if a == 1 else f"{a}*{mono}"
        parts.append((sign, body))
    first_sign, first = parts[0]
    s = ("-" if first_sign == "-" else "") + first
    for sign, body in parts[1:]:
        s += f" {sign} {body}"
    return s


def _factor_token(f: PolyElement, e: int) -> str:
    s = _poly_str(f)
    if len(f) > 1:
        s = f"({s})"
    return s if e == 1 else f"{s}^{e}"


@lru_cache(maxsize=4096)
def _format_cached(num_key, den_key) -> str:
    num = _RING(dict(num_key)) if num_key else _RING.zero
    den = _RING(dict(den_key))
    if not num:
        return "0"
    cn, fn = _int_factors(num)
    cd, fd = _int_factors(den)
    q = cn / cd
    sign = "-" if q < 0 else ""
    q = abs(q)
    top = [_factor_token(f, e) for f, e in fn]
    bottom = [_factor_token(f, e) for f, e in fd]
    if q.numerator != 1 or not top:
        top.insert(0, str(q.numerator))
    if q.denominator != 1:
        bottom.insert(0, str(q.denominator))
    s = sign + "*".join(top)
    if bottom:
        b = "*".join(bottom)
        s += "/" + (b if len(bottom) == 1 else f"({b})")
    return s


def _format(num: PolyElement, den: PolyElement) -> str:
    return _format_cached(tuple(sorted(num.items())), tuple(sorted(den.items())))


@dataclass(frozen=True)
class Dimension:
    """The dimension ``m``: symbolic (``value is None``) or a concrete integer >= 2."""

    value: int | None = None

    def __post_init__(self) -> None:
        if self.value is not None:
            if isinstance(self.value, bool) or not isinstance(self.value, int):
                raise DimensionError(f"dimension must be an integer, got {self.value!r}")
            if self.value < 2:
                raise DimensionError(f"dimension must be at least 2, got {self.value}")

    @property
    def symbolic(self) -> bool:
        return self.value is None

    @property
    def m(self) -> Coefficient:
        return Coefficient.m() if self.value is None else Coefficient(self.value)

    def coerce(self, c: Coefficient) -> Coefficient:
        """Bring a coefficient into this dimension (substituting ``m`` if concrete)."""
        if self.value is None or c.is_constant():
            return c
        return c.specialize(self.value)

    def exceeds_minus_m(self, k: int) -> bool:
        """``k > -m`` for every admissible ``m`` (symbolic) or for ``m = value``."""
        bound = 2 if self.value is None else self.value
        return k > -bound

    def __str__(self) -> str:
        return "sym" if self.value is None else str(self.value)


SYM = Dimension()
