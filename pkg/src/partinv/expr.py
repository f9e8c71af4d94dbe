"""Exact multivariate rational functions over the rationals.

The atom of every symbolic computation in this package.  An Expression is a
reduced fraction num/den of two multivariate polynomials with Fraction
coefficients over a fixed, ordered tuple of variable names.  Canonical form is

  * num and den share no polynomial factor (gcd cancelled), and
  * den is monic under graded lexicographic order on the declared variable
    order (so a polynomial always has den == 1),

which makes equality and hashing structural.  No floating point enters here.

Polynomials are stored sparsely as dicts mapping exponent tuples to nonzero
Fraction coefficients; the zero polynomial is the empty dict.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterator, Mapping, Sequence

__all__ = [
    "Expression",
    "ExpressionError",
    "ParseError",
    "UndeclaredVariableError",
    "ZeroDenominatorError",
    "DenominatorVanishesError",
    "parse_expr",
    "differentiate",
    "evaluate_at",
]

_ZERO = Fraction(0)
_ONE = Fraction(1)


class ExpressionError(ValueError):
    """Base class for symbolic-arithmetic failures."""


class ParseError(ExpressionError):
    """Malformed input text; carries the 0-based offset of the offence."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class UndeclaredVariableError(ExpressionError):
    pass


class ZeroDenominatorError(ExpressionError, ZeroDivisionError):
    """Division by an expression that is syntactically zero."""


class DenominatorVanishesError(ExpressionError):
    """The denominator vanishes at the requested sample point."""


# ---------------------------------------------------------------------------
# sparse polynomial layer: dict[exponent tuple -> Fraction], zero == {}
# ---------------------------------------------------------------------------


def _pzero() -> dict:
    return {}


def _pconst(c: Fraction, nvars: int) -> dict:
    return {} if c == 0 else {(0,) * nvars: c}


def _pvar(i: int, nvars: int) -> dict:
    mono = tuple(1 if j == i else 0 for j in range(nvars))
    return {mono: _ONE}


def _padd(a: dict, b: dict) -> dict:
    out = dict(a)
    for m, c in b.items():
        s = out.get(m, _ZERO) + c
        if s:
            out[m] = s
        else:
            out.pop(m, None)
    return out


def _pneg(a: dict) -> dict:
    return {m: -c for m, c in a.items()}


def _psub(a: dict, b: dict) -> dict:
    out = dict(a)
    for m, c in b.items():
        s = out.get(m, _ZERO) - c
        if s:
            out[m] = s
        else:
            out.pop(m, None)
    return out


def _pmul(a: dict, b: dict) -> dict:
    if not a or not b:
        return {}
    out: dict = {}
    for m1, c1 in a.items():
        for m2, c2 in b.items():
            m = tuple(x + y for x, y in zip(m1, m2))
            s = out.get(m, _ZERO) + c1 * c2
            if s:
                out[m] = s
            else:
                out.pop(m, None)
    return out


def _pscale(a: dict, c: Fraction) -> dict:
    if c == 0:
        return {}
    return {m: v * c for m, v in a.items()}


def _ppow(a: dict, n: int) -> dict:
    if n == 0:
        if a:
            return {(0,) * len(next(iter(a))): _ONE}
        raise ValueError("0^0 of unknown arity")  # callers guard this
    out = None
    base = a
    k = n
    while k:
        if k & 1:
            out = base if out is None else _pmul(out, base)
        k >>= 1
        if k:
            base = _pmul(base, base)
    return dict(out)


def _pdiff(a: dict, i: int) -> dict:
    out: dict = {}
    for m, c in a.items():
        e = m[i]
        if e:
            mm = m[:i] + (e - 1,) + m[i + 1 :]
            s = out.get(mm, _ZERO) + c * e
            if s:
                out[mm] = s
            else:
                out.pop(mm, None)
    return out


def _peval(a: dict, point: Sequence[Fraction]) -> Fraction:
    total = _ZERO
    for m, c in a.items():
        term = c
        for x, e in zip(point, m):
            if e:
                term *= x**e
        total += term
    return total


def _pis_const(a: dict) -> bool:
    return len(a) <= 1 and all(not any(m) for m in a)


def _grlex_key(m: tuple) -> tuple:
    return (sum(m), m)


def _plead(a: dict) -> tuple:
    """Leading (monomial, coefficient) under graded lex.  a must be nonzero."""
    m = max(a, key=_grlex_key)
    return m, a[m]


def _pdeg(a: dict) -> int:
    return max((sum(m) for m in a), default=-1)


# -- exact division and gcd -------------------------------------------------


def _mono_div(m1: tuple, m2: tuple):
    out = []
    for x, y in zip(m1, m2):
        if x < y:
            return None
        out.append(x - y)
    return tuple(out)


def _pdivexact(a: dict, b: dict) -> dict:
    """Quotient a/b when b divides a exactly; raises ArithmeticError else."""
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    if not a:
        return {}
    if _pis_const(b):
        c = next(iter(b.values()))
        return _pscale(a, 1 / c)
    rem = dict(a)
    quo: dict = {}
    lb, cb = _plead(b)
    while rem:
        la, ca = _plead(rem)
        qm = _mono_div(la, lb)
        if qm is None:
            raise ArithmeticError("inexact polynomial division")
        qc = ca / cb
        quo[qm] = quo.get(qm, _ZERO) + qc
        rem = _psub(rem, _pmul({qm: qc}, b))
    return {m: c for m, c in quo.items() if c}


def _main_var(a: dict, b: dict):
    """Smallest variable index occurring in a or b, or None if both constant."""
    best = None
    for poly in (a, b):
        for m in poly:
            for i, e in enumerate(m):
                if e and (best is None or i < best):
                    best = i
                    break
    return best


def _to_univar(a: dict, v: int) -> dict:
    """View a as univariate in variable v: dict[int -> poly with v-exp 0]."""
    out: dict = {}
    for m, c in a.items():
        e = m[v]
        base = m[:v] + (0,) + m[v + 1 :]
        out.setdefault(e, {})[base] = c
    return out


def _from_univar(u: dict, v: int) -> dict:
    out: dict = {}
    for e, coef in u.items():
        for m, c in coef.items():
            out[m[:v] + (e,) + m[v + 1 :]] = c
    return out


def _ucontent(u: dict) -> dict:
    g: dict = {}
    for coef in u.values():
        g = _pgcd(g, coef)
        if _pis_const(g):
            break
    return g


def _uprem(f: dict, g: dict) -> dict:
    """Pseudo-remainder of univariate views (coefficients are polys)."""
    r = {e: dict(c) for e, c in f.items()}
    dg = max(g)
    lg = g[dg]
    while r:
        dr = max(r)
        if dr < dg:
            break
        lr = r[dr]
        nr: dict = {}
        for e, c in r.items():
            if e != dr:
                nr[e] = _pmul(lg, c)
        for e, c in g.items():
            if e != dg:
                ee = e + dr - dg
                val = _psub(nr.get(ee, {}), _pmul(lr, c))
                if val:
                    nr[ee] = val
                else:
                    nr.pop(ee, None)
        r = {e: c for e, c in nr.items() if c}
    return r


def _pmonic(a: dict) -> dict:
    if not a:
        return a
    _, lc = _plead(a)
    return a if lc == 1 else _pscale(a, 1 / lc)


_FAST_PRIME = (1 << 31) - 1


def _peval_mod(a: dict, point: tuple, p: int = _FAST_PRIME):
    """Image of a coefficient polynomial at an integer point modulo p."""
    total = 0
    for m, c in a.items():
        d = c.denominator % p
        if d == 0:
            return None
        term = c.numerator % p * pow(d, p - 2, p) % p
        for i, e in enumerate(m):
            if e:
                term = term * pow(point[i], e, p) % p
        total = (total + term) % p
    return total


def _umod_scalar(f: dict, g: dict, p: int = _FAST_PRIME) -> dict:
    """Remainder of scalar univariate images, exponent dict -> residue."""
    dg = max(g)
    inv = pow(g[dg], p - 2, p)
    r = dict(f)
    while r:
        dr = max(r)
        if dr < dg:
            break
        scale = r[dr] * inv % p
        del r[dr]
        for e, c in g.items():
            if e == dg:
                continue
            ee = e + dr - dg
            val = (r.get(ee, 0) - scale * c) % p
            if val:
                r[ee] = val
            else:
                r.pop(ee, None)
    return r


def _coprime_by_image(pa: dict, pb: dict) -> bool:
    """Whether the primitive univariate views are provably coprime.

    All coefficient variables get integer values modulo a prime and scalar
    Euclid runs on the images.  When neither leading coefficient vanishes at
    the sample point the image of the true gcd keeps its degree and divides
    the image gcd, so a degree-0 image gcd certifies coprimality.  A bad
    point only wastes the attempt, never gives a wrong answer.
    """
    nv = len(next(iter(next(iter(pa.values())))))
    for attempt in range(4):
        point = tuple((1234567 * (i + 3) + 890123 * (attempt + 1)) % _FAST_PRIME for i in range(nv))
        fa = {e: _peval_mod(c, point) for e, c in pa.items()}
        fb = {e: _peval_mod(c, point) for e, c in pb.items()}
        if None in fa.values() or None in fb.values():
            return False
        if not fa.get(max(pa)) or not fb.get(max(pb)):
            continue
        fa = {e: x for e, x in fa.items() if x}
        fb = {e: x for e, x in fb.items() if x}
        while fb and max(fb) > 0:
            fa, fb = fb, _umod_scalar(fa, fb)
        if fb:
            return True
    return False


def _pgcd(a: dict, b: dict) -> dict:
    """Monic gcd over Q[x1..xn] by primitive pseudo-remainder sequences."""
    if not a:
        return _pmonic(dict(b))
    if not b:
        return _pmonic(dict(a))
    if _pis_const(a) or _pis_const(b):
        nv = len(next(iter(a)))
        return _pconst(_ONE, nv)
    if a == b:
        return _pmonic(dict(a))
    v = _main_var(a, b)
    ua, ub = _to_univar(a, v), _to_univar(b, v)
    ca, cb = _ucontent(ua), _ucontent(ub)
    cg = _pgcd(ca, cb)
    pa = {e: _pdivexact(c, ca) for e, c in ua.items()}
    pb = {e: _pdivexact(c, cb) for e, c in ub.items()}
    if max(pa) < max(pb):
        pa, pb = pb, pa
    if _coprime_by_image(pa, pb):
        return _pmonic(cg)
    f, g = pa, pb
    while g:
        r = _uprem(f, g)
        if r:
            rc = _ucontent(r)
            r = {e: _pdivexact(c, rc) for e, c in r.items()}
        f, g = g, r
    if max(f) == 0:
        # degree 0 in v: gcd reduces to the content part
        return _pmonic(cg)
    return _pmonic(_pmul(cg, _from_univar(f, v)))


def _plcm(a: dict, b: dict) -> dict:
    if not a or not b:
        return {}
    return _pmonic(_pmul(_pdivexact(a, _pgcd(a, b)), b))


def _pcancel(a: dict, b: dict):
    """Divide out the common factor of a and b."""
    if not a or not b or _pis_const(a) or _pis_const(b):
        return a, b
    g = _pgcd(a, b)
    if _pis_const(g):
        return a, b
    return _pdivexact(a, g), _pdivexact(b, g)


def _pint_primitive(a: dict) -> dict:
    """Scale to integer coefficients with gcd 1 and positive leading coeff."""
    if not a:
        return a
    from math import gcd, lcm

    den = 1
    for c in a.values():
        den = lcm(den, c.denominator)
    nums = [c.numerator * (den // c.denominator) for c in a.values()]
    g = 0
    for nu in nums:
        g = gcd(g, nu)
    scale = Fraction(den, g if g else 1)
    out = _pscale(a, scale)
    _, lc = _plead(out)
    if lc < 0:
        out = _pneg(out)
    return out


# ---------------------------------------------------------------------------
# Expression
# ---------------------------------------------------------------------------


class Expression:
    """A canonical rational function over a declared variable tuple."""

    __slots__ = ("vars", "num", "den", "_hash")

    def __init__(self, vars: tuple, num: dict, den: dict, *, _canonical: bool = False):
        self.vars = tuple(vars)
        if not _canonical:
            num, den = _canonicalize(num, den, len(self.vars))
        self.num = num
        self.den = den
        self._hash = None

    # -- constructors --------------------------------------------------

    @classmethod
    def constant(cls, value, vars: Sequence[str]) -> "Expression":
        vars = tuple(vars)
        c = Fraction(value)
        return cls(vars, _pconst(c, len(vars)), _pconst(_ONE, len(vars)), _canonical=True)

    @classmethod
    def variable(cls, name: str, vars: Sequence[str]) -> "Expression":
        vars = tuple(vars)
        try:
            i = vars.index(name)
        except ValueError:
            raise UndeclaredVariableError(f"unknown variable {name!r}") from None
        return cls(vars, _pvar(i, len(vars)), _pconst(_ONE, len(vars)), _canonical=True)

    @classmethod
    def zero(cls, vars: Sequence[str]) -> "Expression":
        return cls.constant(0, vars)

    @classmethod
    def one(cls, vars: Sequence[str]) -> "Expression":
        return cls.constant(1, vars)

    @classmethod
    def from_poly(cls, poly: dict, vars: Sequence[str]) -> "Expression":
        vars = tuple(vars)
        return cls(vars, dict(poly), _pconst(_ONE, len(vars)), _canonical=True)

    # -- predicates -----------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.num

    @property
    def is_constant(self) -> bool:
        return _pis_const(self.num) and _pis_const(self.den)

    @property
    def is_polynomial(self) -> bool:
        return _pis_const(self.den)

    def as_fraction(self) -> Fraction:
        if not self.is_constant:
            raise ExpressionError(f"not a constant: {self}")
        if not self.num:
            return _ZERO
        return next(iter(self.num.values())) / next(iter(self.den.values()))

    def total_degree(self) -> int:
        """Degree of the numerator minus degree of the denominator."""
        return _pdeg(self.num) - _pdeg(self.den)

    def free_variables(self) -> set:
        out = set()
        for poly in (self.num, self.den):
            for m in poly:
                for name, e in zip(self.vars, m):
                    if e:
                        out.add(name)
        return out

    # -- arithmetic -------------------------------------------------------

    def _check(self, other: "Expression"):
        if self.vars != other.vars:
            raise ExpressionError("variable contexts differ")

    def _coerce(self, other):
        if isinstance(other, Expression):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return Expression.constant(other, self.vars)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if _pis_const(self.den) and _pis_const(o.den):
            return Expression(self.vars, _padd(self.num, o.num), self.den, _canonical=True)
        # combine over the lcm of the denominators, not their product; the
        # blind product makes the final cancellation gcd as large as a whole
        # denominator and that is where quotient-rule chains blow up
        g = _pgcd(self.den, o.den)
        if _pis_const(g):
            num = _padd(_pmul(self.num, o.den), _pmul(o.num, self.den))
            return Expression(self.vars, num, _pmul(self.den, o.den))
        da = _pdivexact(self.den, g)
        db = _pdivexact(o.den, g)
        num = _padd(_pmul(self.num, db), _pmul(o.num, da))
        return Expression(self.vars, num, _pmul(_pmul(da, g), db))

    __radd__ = __add__

    def __neg__(self):
        return Expression(self.vars, _pneg(self.num), self.den, _canonical=True)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if _pis_const(self.den) and _pis_const(o.den):
            return Expression(self.vars, _pmul(self.num, o.num), _pconst(_ONE, len(self.vars)), _canonical=True)
        # cancel crosswise first so the product's reduction gcd stays small
        na, db = _pcancel(self.num, o.den)
        nb, da = _pcancel(o.num, self.den)
        return Expression(self.vars, _pmul(na, nb), _pmul(da, db))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if o.is_zero:
            raise ZeroDenominatorError("division by zero expression")
        na, nb = _pcancel(self.num, o.num)
        da, db = _pcancel(self.den, o.den)
        return Expression(self.vars, _pmul(na, db), _pmul(da, nb))

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o / self

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n == 0:
            return Expression.one(self.vars)
        if n < 0:
            if self.is_zero:
                raise ZeroDenominatorError("negative power of zero expression")
            inv = Expression(self.vars, dict(self.den), dict(self.num))
            return inv ** (-n)
        if self.is_zero:
            return self
        return Expression(self.vars, _ppow(self.num, n), _ppow(self.den, n))

    # -- calculus / evaluation -------------------------------------------

    def diff(self, var: str) -> "Expression":
        try:
            i = self.vars.index(var)
        except ValueError:
            raise UndeclaredVariableError(f"unknown variable {var!r}") from None
        dn = _pdiff(self.num, i)
        if _pis_const(self.den):
            return Expression(self.vars, dn, self.den, _canonical=True)
        dd = _pdiff(self.den, i)
        num = _psub(_pmul(dn, self.den), _pmul(self.num, dd))
        return Expression(self.vars, num, _pmul(self.den, self.den))

    def eval(self, point: Mapping) -> Fraction:
        vals = []
        for i, name in enumerate(self.vars):
            if name in point:
                vals.append(Fraction(point[name]))
            else:
                # only required when the variable actually occurs
                if any(m[i] for m in self.num) or any(m[i] for m in self.den):
                    raise UndeclaredVariableError(f"no value supplied for {name!r}")
                vals.append(_ZERO)
        d = _peval(self.den, vals)
        if d == 0:
            raise DenominatorVanishesError(f"denominator vanishes at {dict(point)!r}")
        return _peval(self.num, vals) / d

    # -- structural --------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Expression.constant(other, self.vars)
        if not isinstance(other, Expression):
            return NotImplemented
        return self.vars == other.vars and self.num == other.num and self.den == other.den

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(
                (self.vars, frozenset(self.num.items()), frozenset(self.den.items()))
            )
        return self._hash

    def __bool__(self):
        return not self.is_zero

    def __str__(self):
        ns = _poly_str(self.num, self.vars)
        if _pis_const(self.den):
            return ns
        ds = _poly_str(self.den, self.vars)
        return f"({ns})/({ds})"

    def __repr__(self):
        return f"Expression({str(self)!r}, vars={self.vars!r})"


def _canonicalize(num: dict, den: dict, nvars: int):
    if not den:
        raise ZeroDenominatorError("zero denominator")
    if not num:
        return {}, _pconst(_ONE, nvars)
    if not _pis_const(den):
        g = _pgcd(num, den)
        if not _pis_const(g):
            num = _pdivexact(num, g)
            den = _pdivexact(den, g)
    if _pis_const(den):
        c = next(iter(den.values()))
        if c != 1:
            num = _pscale(num, 1 / c)
        return num, _pconst(_ONE, nvars)
    _, lc = _plead(den)
    if lc != 1:
        num = _pscale(num, 1 / lc)
        den = _pscale(den, 1 / lc)
    return num, den


def _mono_str(m: tuple, vars: tuple) -> str:
    parts = []
    for name, e in zip(vars, m):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def _poly_str(p: dict, vars: tuple) -> str:
    if not p:
        return "0"
    terms = sorted(p.items(), key=lambda kv: _grlex_key(kv[0]), reverse=True)
    out = []
    for i, (m, c) in enumerate(terms):
        ms = _mono_str(m, vars)
        mag = abs(c)
        if ms:
            body = ms if mag == 1 else f"{mag}*{ms}"
        else:
            body = str(mag)
        if i == 0:
            out.append(f"-{body}" if c < 0 else body)
        else:
            out.append(f" - {body}" if c < 0 else f" + {body}")
    return "".join(out)


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

_TOKEN_RE = re.compile(r"\s*(?:(?P<int>\d+)|(?P<name>[A-Za-z_]\w*)|(?P<op>[-+*/^()]))")


class _Parser:
    """Recursive descent over: integers, rationals p/q, declared names,
    + - * / ^ with nonnegative integer exponents, parentheses, unary minus."""

    def __init__(self, text: str, vars: tuple):
        self.text = text
        self.vars = vars
        self.tokens: list = []
        pos = 0
        while pos < len(text):
            m = _TOKEN_RE.match(text, pos)
            if m is None or m.end() == pos:
                # skip over trailing whitespace before declaring an error
                rest = text[pos:]
                if rest.strip() == "":
                    break
                bad = pos + len(rest) - len(rest.lstrip())
                raise ParseError(f"unexpected character {text[bad]!r}", bad)
            kind = m.lastgroup
            self.tokens.append((kind, m.group(kind), m.start(kind)))
            pos = m.end()
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None, len(self.text))

    def next(self):
        tok = self.peek()
        self.i += 1
        return tok

    def expect_op(self, op: str):
        kind, val, pos = self.peek()
        if kind != "op" or val != op:
            raise ParseError(f"expected {op!r}", pos)
        self.next()

    def parse(self) -> Expression:
        if not self.tokens:
            raise ParseError("empty expression", 0)
        e = self.expr()
        kind, val, pos = self.peek()
        if kind is not None:
            raise ParseError(f"unexpected token {val!r}", pos)
        return e

    def expr(self) -> Expression:
        e = self.term()
        while True:
            kind, val, pos = self.peek()
            if kind == "op" and val in "+-":
                self.next()
                rhs = self.term()
                e = e + rhs if val == "+" else e - rhs
            else:
                return e

    def term(self) -> Expression:
        e = self.unary()
        while True:
            kind, val, pos = self.peek()
            if kind == "op" and val in "*/":
                self.next()
                rhs = self.unary()
                if val == "*":
                    e = e * rhs
                else:
                    if rhs.is_zero:
                        raise ZeroDenominatorError(
                            f"division by syntactic zero (at position {pos})"
                        )
                    e = e / rhs
            else:
                return e

    def unary(self) -> Expression:
        kind, val, pos = self.peek()
        if kind == "op" and val == "-":
            self.next()
            return -self.unary()
        if kind == "op" and val == "+":
            self.next()
            return self.unary()
        return self.power()

    def power(self) -> Expression:
        e = self.atom()
        while True:
            kind, val, pos = self.peek()
            if kind == "op" and val == "^":
                self.next()
                k2, v2, p2 = self.peek()
                if k2 != "int":
                    raise ParseError("exponent must be a nonnegative integer", p2)
                self.next()
                e = e ** int(v2)
            else:
                return e

    def atom(self) -> Expression:
        kind, val, pos = self.next()
        if kind == "int":
            return Expression.constant(int(val), self.vars)
        if kind == "name":
            if val not in self.vars:
                raise UndeclaredVariableError(
                    f"unknown variable {val!r} (at position {pos})"
                )
            return Expression.variable(val, self.vars)
        if kind == "op" and val == "(":
            e = self.expr()
            self.expect_op(")")
            return e
        raise ParseError(f"unexpected token {val!r}" if val else "unexpected end of input", pos)


def parse_expr(text: str, vars: Sequence[str]) -> Expression:
    """Parse text over the declared variables into a canonical Expression."""
    return _Parser(text, tuple(vars)).parse()


def differentiate(e: Expression, var: str) -> Expression:
    """Exact partial derivative of e with respect to the named variable."""
    return e.diff(var)


def evaluate_at(e: Expression, point: Mapping) -> Fraction:
    """Evaluate e at a rational point; raises if the denominator vanishes."""
    return e.eval(point)
