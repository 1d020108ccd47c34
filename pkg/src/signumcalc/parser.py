"""Text grammar for operators and (signum)distributions.

Both grammars share one tokenizer and one precedence climber::

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/' | <juxtaposition>) factor)*
    factor := '-' factor | '+' factor | power
    power  := atom ('^' ['-'] INT)?
    atom   := INT | NAME | '(' expr ')'

Juxtaposition binds like ``*``.  Columns in :class:`ParseError` are 1-based
and refer to the original text, Unicode aliases included.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .coeff import ONE, ZERO, SYM, Coefficient, Dimension
from .distributions import (
    MAX_ORDER,
    ORIGIN_BY_NAME,
    ConstantAtom,
    DistExpr,
    Lin,
    World,
    origin_sign,
)
from .errors import ParseError
from .operators import OperatorExpr, macros

# longest aliases first; expansions are padded so neighbours stay separate tokens
_ALIASES = [
    ("∂Δδ", " dlapdelta "),
    ("Δδ", " lapdelta "),
    ("∂δ", " ddelta "),
    ("∂_r", " dr "),
    ("∂_ω", " dw "),
    ("∂_w", " dw "),
    ("Δ^*", " LapStar "),
    ("Z^*", " ZStar "),
    ("∂", " Dirac "),
    ("Δ", " Lap "),
    ("Γ", " Gamma "),
    ("ω", " w "),
    ("δ", " delta "),
    ("𝔼", " E "),
    ("−", "-"),
    ("·", "*"),
    ("²", "^2"),
    ("³", "^3"),
]

_TOKEN = re.compile(r"(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\S)")


@dataclass(frozen=True)
class Token:
    kind: str  # "int" | "name" | "op" | "end"
    text: str
    col: int


def _expand(text: str) -> tuple[str, list[int]]:
    """Replace aliases; return the ASCII text and the source column of each char."""
    out: list[str] = []
    cols: list[int] = []
    i = 0
    while i < len(text):
        for src, dst in _ALIASES:
            if text.startswith(src, i):
                out.extend(dst)
                cols.extend([i + 1] * len(dst))
                i += len(src)
                break
        else:
            out.append(text[i])
            cols.append(i + 1)
            i += 1
    return "".join(out), cols


def tokenize(text: str) -> list[Token]:
    s, cols = _expand(text)
    tokens = []
    pos = 0
    while True:
        while pos < len(s) and s[pos].isspace():
            pos += 1
        if pos >= len(s):
            break
        mt = _TOKEN.match(s, pos)
        start = pos
        if mt.group(1):
            tokens.append(Token("int", mt.group(1), cols[start]))
        elif mt.group(2):
            tokens.append(Token("name", mt.group(2), cols[start]))
        elif mt.group(3):
            ch = mt.group(3)
            if ch not in "+-*/^()":
                raise ParseError(f"unexpected character {ch!r}", cols[start], text)
            tokens.append(Token("op", ch, cols[start]))
        pos = mt.end()
    end_col = len(text) + 1
    tokens.append(Token("end", "", end_col))
    return tokens


class _Parser:
    """Precedence climber; subclasses supply the value domain."""

    def __init__(self, text: str, dim: Dimension) -> None:
        self.text = text
        self.dim = dim
        self.tokens = tokenize(text)
        self.i = 0

    # token helpers ------------------------------------------------------
    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def advance(self) -> Token:
        t = self.tokens[self.i]
        self.i += 1
        return t

    def error(self, msg: str, tok: Token | None = None):
        tok = tok or self.tok
        return ParseError(msg, tok.col, self.text)

    def expect(self, text: str) -> Token:
        if self.tok.kind == "op" and self.tok.text == text:
            return self.advance()
        raise self.error(f"expected {text!r}, found {self._describe(self.tok)}")

    @staticmethod
    def _describe(tok: Token) -> str:
        return "end of input" if tok.kind == "end" else repr(tok.text)

    # grammar ------------------------------------------------------------
    def parse(self):
        if self.tok.kind == "end":
            raise self.error("empty expression")
        value = self.expr()
        if self.tok.kind != "end":
            raise self.error(f"unexpected {self._describe(self.tok)}")
        return value

    def expr(self):
        value = self.term()
        while self.tok.kind == "op" and self.tok.text in "+-":
            op = self.advance()
            rhs = self.term()
            value = self.add(value, rhs, op) if op.text == "+" else self.add(value, self.neg(rhs, op), op)
        return value

    def _starts_factor(self) -> bool:
        t = self.tok
        return t.kind in ("int", "name") or (t.kind == "op" and t.text == "(")

    def term(self):
        value = self.factor()
        while True:
            t = self.tok
            if t.kind == "op" and t.text in "*/":
                self.advance()
                rhs = self.factor()
                value = self.mul(value, rhs, t) if t.text == "*" else self.div(value, rhs, t)
            elif self._starts_factor():
                rhs = self.factor()
                value = self.mul(value, rhs, t)
            else:
                return value

    def factor(self):
        t = self.tok
        if t.kind == "op" and t.text == "-":
            self.advance()
            return self.neg(self.factor(), t)
        if t.kind == "op" and t.text == "+":
            self.advance()
            return self.factor()
        return self.power()

    def power(self):
        base_tok = self.tok
        base = self.atom()
        if self.tok.kind == "op" and self.tok.text == "^":
            caret = self.advance()
            sign = 1
            if self.tok.kind == "op" and self.tok.text == "-":
                self.advance()
                sign = -1
            if self.tok.kind != "int":
                raise self.error(f"expected an integer exponent, found {self._describe(self.tok)}")
            n = sign * int(self.advance().text)
            return self.pow(base, n, caret, base_tok)
        return base

    def atom(self):
        t = self.tok
        if t.kind == "int":
            self.advance()
            return self.number(int(t.text))
        if t.kind == "name":
            self.advance()
            return self.name(t)
        if t.kind == "op" and t.text == "(":
            self.advance()
            value = self.expr()
            self.expect(")")
            return value
        raise self.error(f"unexpected {self._describe(t)}")

    # domain hooks -------------------------------------------------------
    def number(self, n: int):
        return self.dim.coerce(Coefficient(n))

    def symbol_m(self, tok: Token):
        if self.dim.value is not None:
            return Coefficient(self.dim.value)
        return Coefficient.m()


# ---------------------------------------------------------------------------
# operators
# ---------------------------------------------------------------------------


class _OperatorParser(_Parser):
    def name(self, tok: Token):
        if tok.text == "m":
            return self.symbol_m(tok)
        mac = macros(self.dim)
        if tok.text not in mac:
            raise self.error(f"unknown operator {tok.text!r}", tok)
        return mac[tok.text]

    def add(self, a, b, tok):
        if isinstance(a, Coefficient) and isinstance(b, Coefficient):
            return a + b
        return _op(a, self.dim) + _op(b, self.dim)

    def neg(self, a, tok):
        return -a

    def mul(self, a, b, tok):
        if isinstance(a, Coefficient) and isinstance(b, Coefficient):
            return a * b
        if isinstance(a, Coefficient):
            return b * a
        if isinstance(b, Coefficient):
            return a * b
        return a * b

    def div(self, a, b, tok):
        if not isinstance(b, Coefficient):
            raise self.error("division by an operator; use rinv or xinv", tok)
        if not b:
            raise self.error("division by zero", tok)
        return a * b.inverse()

    def pow(self, base, n, tok, base_tok):
        if isinstance(base, Coefficient):
            if n < 0 and not base:
                raise self.error("zero to a negative power", tok)
            return base**n
        if n >= 0:
            return base**n
        inverse = {"r": "rinv", "rinv": "r", "x": "xinv", "xinv": "x"}.get(base_tok.text)
        if base_tok.kind != "name" or inverse is None:
            raise self.error("negative powers apply to r, rinv, x and xinv only", tok)
        return macros(self.dim)[inverse] ** (-n)


def _op(v, dim: Dimension) -> OperatorExpr:
    return v if isinstance(v, OperatorExpr) else OperatorExpr.scalar(v, dim)


def parse_operator(text: str, dim: Dimension = SYM) -> OperatorExpr:
    """Parse an operator expression; macros are expanded into generator words."""
    value = _OperatorParser(text, dim).parse()
    return _op(value, dim)


# ---------------------------------------------------------------------------
# distributions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class _DV:
    """Parsed distribution value: regular part, origin part, or a bare atom combination."""

    reg: tuple = ()  # ((k, e), Coefficient)
    org: tuple = ()  # ((e, n), Lin)
    atoms: Lin | None = None

    @property
    def regd(self) -> dict:
        return dict(self.reg)

    @property
    def orgd(self) -> dict:
        return dict(self.org)

    def constant(self) -> Coefficient | None:
        """The value as a plain number, if it is one."""
        if self.atoms is not None or self.org:
            return None
        d = self.regd
        if not d:
            return ZERO
        if set(d) == {(0, 0)}:
            return d[(0, 0)]
        return None


def _dv(reg=None, org=None, atoms=None) -> _DV:
    reg = {k: v for k, v in (reg or {}).items() if v}
    org = {k: v for k, v in (org or {}).items() if v}
    return _DV(tuple(sorted(reg.items())), tuple(sorted(org.items())), atoms)


def _mono_mul(a, b):
    """``(r^k1 w^e1)(r^k2 w^e2)`` as ``(sign, (k, e))``."""
    (k1, e1), (k2, e2) = a, b
    e = e1 + e2
    return (-1 if e == 2 else 1), (k1 + k2, e % 2)


class _DistParser(_Parser):
    def name(self, tok: Token):
        t = tok.text
        if t == "m":
            return _dv({(0, 0): self.symbol_m(tok)})
        if t == "r":
            return _dv({(1, 0): ONE})
        if t == "rinv":
            return _dv({(-1, 0): ONE})
        if t == "w":
            return _dv({(0, 1): ONE})
        if t == "x":
            return _dv({(1, 1): ONE})
        if t == "xinv":
            return _dv({(-1, 1): -ONE})
        if t in ORIGIN_BY_NAME:
            n = ORIGIN_BY_NAME[t]
            return _dv(org={(0, n): Lin.const(origin_sign(n))})
        if re.fullmatch(r"c\d+", t):
            return _DV(atoms=Lin.atom(ConstantAtom(t, "scalar", "input")))
        raise self.error(f"unknown distribution symbol {t!r}", tok)

    def number(self, n: int):
        return _dv({(0, 0): self.dim.coerce(Coefficient(n))})

    def neg(self, a: _DV, tok):
        if a.atoms is not None:
            return _DV(atoms=-a.atoms)
        return _dv({k: -v for k, v in a.reg}, {k: -v for k, v in a.org})

    def add(self, a: _DV, b: _DV, tok):
        if (a.atoms is None) != (b.atoms is None):
            raise self.error("a free constant must multiply a delta term", tok)
        if a.atoms is not None:
            return _DV(atoms=a.atoms + b.atoms)
        reg, org = a.regd, a.orgd
        for k, v in b.reg:
            reg[k] = reg.get(k, ZERO) + v
        for k, v in b.org:
            org[k] = org.get(k, Lin()) + v
        return _dv(reg, org)

    def _scale(self, a: _DV, c: Coefficient) -> _DV:
        if a.atoms is not None:
            return _DV(atoms=a.atoms.scale(c))
        return _dv({k: v * c for k, v in a.reg}, {k: v.scale(c) for k, v in a.org})

    def mul(self, a: _DV, b: _DV, tok):
        ca, cb = a.constant(), b.constant()
        if ca is not None:
            return self._scale(b, ca)
        if cb is not None:
            return self._scale(a, cb)
        if a.atoms is not None or b.atoms is not None:
            atoms, other = (a.atoms, b) if a.atoms is not None else (b.atoms, a)
            if other.atoms is not None or other.reg or any(v.atoms() for _, v in other.org):
                raise self.error("a free constant must multiply a delta term", tok)
            org = {}
            for k, v in other.org:
                org[k] = atoms.scale(v.constant)
            return _dv(org=org)
        if a.org and b.org:
            raise self.error("product of two delta terms", tok)
        if b.org:
            # only constants and w may stand to the left of delta terms
            reg = a.regd
            if any(k != 0 for (k, _) in reg):
                raise self.error("only constants and w may multiply delta terms", tok)
            out: dict = {}
            for (_, e1), c in reg.items():
                for (e2, n), lin in b.org:
                    e = e1 + e2
                    key = (e % 2, n)
                    out[key] = out.get(key, Lin()) + lin.scale(c * (-1 if e == 2 else 1))
            return _dv(org=out)
        if a.org:
            raise self.error("delta terms may only be multiplied from the left", tok)
        out = {}
        for ka, va in a.reg:
            for kb, vb in b.reg:
                s, key = _mono_mul(ka, kb)
                out[key] = out.get(key, ZERO) + va * vb * s
        return _dv(out)

    def _inverse(self, a: _DV, tok) -> _DV:
        c = a.constant()
        if c is not None:
            if not c:
                raise self.error("division by zero", tok)
            return _dv({(0, 0): c.inverse()})
        if a.atoms is None and not a.org and len(a.reg) == 1:
            (k, e), v = a.reg[0]
            # (r^k w)^-1 = -r^-k w
            return _dv({(-k, e): v.inverse() * (-1 if e else 1)})
        raise self.error("only numbers and single monomials can be inverted", tok)

    def div(self, a: _DV, b: _DV, tok):
        return self.mul(a, self._inverse(b, tok), tok)

    def pow(self, base: _DV, n: int, tok, base_tok):
        if n < 0:
            base = self._inverse(base, tok)
            n = -n
        if base.atoms is not None or base.org:
            if n == 1:
                return base
            raise self.error("powers apply to functions of r and w only", tok)
        out = _dv({(0, 0): ONE})
        for _ in range(n):
            out = self.mul(out, base, tok)
        return out


def parse_distribution(text: str, world: World = World.DIST, dim: Dimension = SYM) -> DistExpr:
    """Parse a catalog expression.

    Delta terms are written for the chosen world: ``delta`` in a distribution,
    ``w*delta`` in a signumdistribution.  Free constants ``c1, c2, ...`` may
    multiply delta terms (class representatives print that way).
    """
    value = _DistParser(text, dim).parse()
    if value.atoms is not None:
        raise ParseError("a free constant must multiply a delta term", 1, text)
    org = {}
    for (e, n), lin in value.org:
        if n > MAX_ORDER:
            raise ParseError(f"delta derivative of order {n} is beyond the catalog", 1, text)
        org[(e, n)] = lin
    return DistExpr(world, dim, dict(value.reg), org)

