"""Exact arithmetic in the rational function field Q(t).

This module provides the desk-scale stand-in for pathological solution
ingredients that cannot be sampled in floating point: elements of Q(t) in
canonical form together with the formal derivation d/dt, which is additive,
Q-linear, satisfies the Leibniz rule d(xy) = x d(y) + y d(x), and vanishes on
every rational constant. Numeric probes happen only through `approx_value`,
which evaluates an element at a fixed transcendental-looking point tau.

Layers:

* ``BigRational`` - arbitrary-precision rationals (stdlib Fraction; already
  gcd-normalized with positive denominator after every operation).
* ``Poly`` - univariate polynomials over BigRational, coefficients indexed by
  degree, empty coefficient list = zero polynomial.
* ``FieldElement`` - quotients of polynomials, canonical form gcd(num, den) = 1
  with monic denominator. Equality is structural on the canonical form.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from typing import Iterable, Union

__all__ = [
    "BigRational",
    "Poly",
    "FieldElement",
    "DegreeCapError",
    "PoleError",
    "FieldParseError",
    "DEGREE_CAP",
    "DEFAULT_TAU",
    "T",
    "as_field_element",
    "field_arith",
    "derivation_apply",
    "approx_value",
    "parse_field_element",
    "poly_gcd",
    "random_unit_interval_element",
]

BigRational = Fraction

# Fixed evaluation point for admissibility probes. Deliberately an
# irrational-looking constant so random small-coefficient polynomials do not
# vanish there.
DEFAULT_TAU = 0.7390851332151607

# Hard cap on canonical numerator/denominator degree; exceeding it raises
# DegreeCapError instead of letting coefficient growth run away.
DEGREE_CAP = 64

RationalLike = Union[int, Fraction]


class DegreeCapError(ArithmeticError):
    """Canonical numerator or denominator degree exceeded DEGREE_CAP."""


class PoleError(ArithmeticError):
    """Evaluation point is a pole (denominator vanishes there)."""


class FieldParseError(ValueError):
    """Malformed field-element text; `column` is 1-based."""

    def __init__(self, message: str, column: int):
        super().__init__(f"column {column}: {message}")
        self.column = column


class Poly:
    """Univariate polynomial in t over BigRational.

    ``coeffs[i]`` is the coefficient of t**i; trailing zeros are stripped so
    the leading coefficient is nonzero unless the polynomial is zero (empty
    tuple). Degree of the zero polynomial is -1.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[RationalLike] = ()):
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lc(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __add__(self, other: "Poly") -> "Poly":
        if not isinstance(other, Poly):
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return Poly(out)

    def __neg__(self) -> "Poly":
        return Poly([-c for c in self.coeffs])

    def __sub__(self, other: "Poly") -> "Poly":
        if not isinstance(other, Poly):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other: "Poly") -> "Poly":
        if not isinstance(other, Poly):
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return Poly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return Poly(out)

    def scale(self, k: RationalLike) -> "Poly":
        k = Fraction(k)
        return Poly([c * k for c in self.coeffs])

    def __pow__(self, n: int) -> "Poly":
        if n < 0:
            raise ValueError("negative polynomial power")
        out = Poly([1])
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __divmod__(self, other: "Poly") -> tuple["Poly", "Poly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        r = list(self.coeffs)
        dlen = len(other.coeffs)
        q = [Fraction(0)] * max(len(r) - dlen + 1, 0)
        inv_lc = 1 / other.lc
        while len(r) >= dlen:
            shift = len(r) - dlen
            factor = r[-1] * inv_lc
            q[shift] = factor
            for i, b in enumerate(other.coeffs):
                r[shift + i] -= factor * b
            r.pop()
            while r and r[-1] == 0:
                r.pop()
        return Poly(q), Poly(r)

    def __floordiv__(self, other: "Poly") -> "Poly":
        return divmod(self, other)[0]

    def __mod__(self, other: "Poly") -> "Poly":
        return divmod(self, other)[1]

    def exact_div(self, other: "Poly") -> "Poly":
        q, r = divmod(self, other)
        if not r.is_zero():
            raise ValueError("inexact polynomial division")
        return q

    def derivative(self) -> "Poly":
        return Poly([i * c for i, c in enumerate(self.coeffs)][1:])

    def evaluate(self, point: RationalLike) -> Fraction:
        point = Fraction(point)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * point + c
        return acc

    def monic(self) -> "Poly":
        if self.is_zero() or self.lc == 1:
            return self
        return self.scale(1 / self.lc)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Poly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(("Poly", self.coeffs))

    def __repr__(self) -> str:
        return f"Poly({list(self.coeffs)!r})"


_ZERO_P = Poly()
_ONE_P = Poly([1])


def _primitive_ints(p: Poly) -> list[int]:
    """Clear denominators and divide out integer content; leading coeff > 0."""
    lcm = 1
    for c in p.coeffs:
        lcm = lcm * c.denominator // math.gcd(lcm, c.denominator)
    ints = [int(c * lcm) for c in p.coeffs]
    g = 0
    for v in ints:
        g = math.gcd(g, abs(v))
    if g > 1:
        ints = [v // g for v in ints]
    if ints and ints[-1] < 0:
        ints = [-v for v in ints]
    return ints


def _int_prem(f: list[int], g: list[int]) -> list[int]:
    """Pseudo-remainder lc(g)^(deg f - deg g + 1) * f mod g over Z."""
    df, dg = len(f) - 1, len(g) - 1
    r = list(f)
    n = df - dg + 1
    lc_g = g[-1]
    while r and len(r) - 1 >= dg:
        n -= 1
        lead = r[-1]
        r = [c * lc_g for c in r]
        shift = len(r) - 1 - dg
        for i, b in enumerate(g):
            r[shift + i] -= lead * b
        while r and r[-1] == 0:
            r.pop()
    if n > 0 and r:
        m = lc_g ** n
        r = [c * m for c in r]
    return r


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd via the primitive subresultant remainder sequence.

    Working over cleared-denominator integer polynomials bounds coefficient
    growth; the g*h^delta divisions below are exact by the subresultant
    theory.
    """
    if a.is_zero() and b.is_zero():
        return _ZERO_P
    if a.is_zero():
        return b.monic()
    if b.is_zero():
        return a.monic()
    if a.degree == 0 or b.degree == 0:
        return _ONE_P
    A, B = _primitive_ints(a), _primitive_ints(b)
    if len(A) < len(B):
        A, B = B, A
    g = h = 1
    while True:
        delta = (len(A) - 1) - (len(B) - 1)
        R = _int_prem(A, B)
        if not R:
            prim = B
            content = 0
            for v in prim:
                content = math.gcd(content, abs(v))
            return Poly([Fraction(v, content) for v in prim]).monic()
        if len(R) == 1:
            return _ONE_P
        divisor = g * h ** delta
        A, B = B, [c // divisor for c in R]
        g = A[-1]
        if delta == 1:
            h = g
        elif delta > 1:
            h = g ** delta // h ** (delta - 1)


def _as_poly(value: Union["Poly", RationalLike]) -> Poly:
    if isinstance(value, Poly):
        return value
    if isinstance(value, (int, Fraction)):
        return Poly([value])
    raise TypeError(f"cannot interpret {type(value).__name__} as a polynomial")


class FieldElement:
    """Element of Q(t) in canonical form: gcd(num, den) = 1, den monic."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        num = _as_poly(num)
        den = _ONE_P if den is None else _as_poly(den)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator polynomial")
        if num.is_zero():
            num, den = _ZERO_P, _ONE_P
        else:
            g = poly_gcd(num, den)
            if g.degree > 0:
                num = num.exact_div(g)
                den = den.exact_div(g)
            lc = den.lc
            if lc != 1:
                inv = 1 / lc
                num = num.scale(inv)
                den = den.scale(inv)
        if num.degree > DEGREE_CAP or den.degree > DEGREE_CAP:
            raise DegreeCapError(
                f"degree {max(num.degree, den.degree)} exceeds cap {DEGREE_CAP}"
            )
        self.num: Poly = num
        self.den: Poly = den

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            return other
        if isinstance(other, (int, Fraction, Poly)):
            return FieldElement(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FieldElement(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(-self.num, self.den)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FieldElement(self.num * o.den - o.num * self.den, self.den * o.den)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FieldElement(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o.is_zero():
            raise ZeroDivisionError("division by the zero field element")
        return FieldElement(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            if self.is_zero():
                raise ZeroDivisionError("zero element to a negative power")
            return FieldElement(self.den ** (-n), self.num ** (-n))
        return FieldElement(self.num ** n, self.den ** n)

    def __eq__(self, other: object) -> bool:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self) -> int:
        return hash(("FieldElement", self.num.coeffs, self.den.coeffs))

    def __str__(self) -> str:
        num, den = _clear_to_ints(self.num, self.den)
        if den == [1]:
            return _int_poly_str(num)
        return f"({_int_poly_str(num)})/({_int_poly_str(den)})"

    def __repr__(self) -> str:
        return f"FieldElement({str(self)!r})"


T = FieldElement(Poly([0, 1]))


def as_field_element(value) -> FieldElement:
    """Coerce ints, rationals, floats (exactly), polynomials and text to Q(t)."""
    if isinstance(value, FieldElement):
        return value
    if isinstance(value, (int, Fraction, Poly)):
        return FieldElement(value)
    if isinstance(value, float):
        # binary64 values are dyadic rationals, so this is exact
        return FieldElement(Fraction(value))
    if isinstance(value, str):
        return parse_field_element(value)
    raise TypeError(f"cannot coerce {type(value).__name__} to a field element")


def field_arith(a, b, op: str) -> FieldElement:
    """Apply one of '+', '-', '*', '/' to two field elements."""
    a, b = as_field_element(a), as_field_element(b)
    if op == "+":
        return a + b
    if op == "-":
        return a - b
    if op == "*":
        return a * b
    if op == "/":
        return a / b
    raise ValueError(f"unknown operation {op!r}")


def derivation_apply(x, scale: RationalLike = 1) -> FieldElement:
    """Formal derivation with d(t) = scale, extended by the quotient rule.

    Additive, Q-linear and Leibniz on all of Q(t); identically zero on the
    rational constants, which is what makes it the exact stand-in for the
    non-measurable solution ingredient.
    """
    x = as_field_element(x)
    p, q = x.num, x.den
    out = FieldElement(p.derivative() * q - p * q.derivative(), q * q)
    scale = Fraction(scale)
    if scale != 1:
        out = out * scale
    return out


def approx_value(x, tau: float = DEFAULT_TAU) -> float:
    """Evaluate x at tau in binary64.

    The evaluation itself is exact (tau is lifted to the rational it denotes);
    only the final conversion rounds. Raises PoleError when the denominator
    vanishes at tau.
    """
    x = as_field_element(x)
    point = Fraction(tau)
    dv = x.den.evaluate(point)
    if dv == 0:
        raise PoleError(f"pole at tau = {tau!r}")
    return float(x.num.evaluate(point) / dv)


def random_unit_interval_element(rng, tau: float = DEFAULT_TAU, degree: int = 2) -> FieldElement:
    """Random element of Q(t) whose value at tau lies strictly inside (0, 1).

    Built as p^2/(p^2 + q^2), which is automatically inside [0, 1) at any real
    point and pole-free; degenerate draws are rejected.
    """
    while True:
        p = Poly([Fraction(rng.randint(-3, 3), rng.randint(1, 3)) for _ in range(degree + 1)])
        q = Poly([Fraction(rng.randint(-3, 3), rng.randint(1, 2)) for _ in range(2)])
        if p.is_zero() or q.is_zero():
            continue
        x = FieldElement(p * p, p * p + q * q)
        try:
            v = approx_value(x, tau)
        except PoleError:
            continue
        if 0.0 < v < 1.0:
            return x


# --- textual form -----------------------------------------------------------
#
# Printing clears coefficient denominators so both polynomials have integer
# coefficients, e.g. "(2*t^2 - 1)/(3*t + 2)"; a plain polynomial prints without
# the wrapping parentheses. The parser accepts the full expression grammar
#   expr := term (('+'|'-') term)* ; term := unary (('*'|'/') unary)* ;
#   unary := ('-'|'+')* power ; power := atom ('^' '-'? INT)? ;
#   atom := INT | 't' | '(' expr ')'
# evaluated directly in Q(t), so rational coefficients like 1/2 need no
# special casing and print -> parse round-trips exactly.


def _clear_to_ints(num: Poly, den: Poly) -> tuple[list[int], list[int]]:
    lcm = 1
    for c in (*num.coeffs, *den.coeffs):
        lcm = lcm * c.denominator // math.gcd(lcm, c.denominator)
    return ([int(c * lcm) for c in num.coeffs] or [0],
            [int(c * lcm) for c in den.coeffs] or [0])


def _int_poly_str(coeffs: list[int]) -> str:
    if coeffs == [0]:
        return "0"
    parts = []
    for i in range(len(coeffs) - 1, -1, -1):
        c = coeffs[i]
        if c == 0:
            continue
        mag = abs(c)
        if i == 0:
            body = str(mag)
        elif i == 1:
            body = "t" if mag == 1 else f"{mag}*t"
        else:
            body = f"t^{i}" if mag == 1 else f"{mag}*t^{i}"
        if not parts:
            parts.append(body if c > 0 else f"-{body}")
        else:
            parts.append(f" + {body}" if c > 0 else f" - {body}")
    return "".join(parts)


_TOKEN_RE = re.compile(r"(\d+)|([t()^*/+-])|(\S)")


class _Parser:
    def __init__(self, text: str):
        self.tokens: list[tuple[str, int]] = []
        for m in _TOKEN_RE.finditer(text):
            col = m.start() + 1
            if m.group(3):
                raise FieldParseError(f"unexpected character {m.group(3)!r}", col)
            self.tokens.append((m.group(0), col))
        self.pos = 0
        self.end_col = len(text) + 1

    def peek(self) -> str | None:
        return self.tokens[self.pos][0] if self.pos < len(self.tokens) else None

    def col(self) -> int:
        return self.tokens[self.pos][1] if self.pos < len(self.tokens) else self.end_col

    def take(self) -> str:
        tok = self.peek()
        if tok is None:
            raise FieldParseError("unexpected end of input", self.end_col)
        self.pos += 1
        return tok

    def expect(self, tok: str):
        if self.peek() != tok:
            raise FieldParseError(f"expected {tok!r}", self.col())
        self.pos += 1

    def parse(self) -> FieldElement:
        value = self.expr()
        if self.peek() is not None:
            raise FieldParseError(f"unexpected token {self.peek()!r}", self.col())
        return value

    def expr(self) -> FieldElement:
        value = self.term()
        while self.peek() in ("+", "-"):
            op = self.take()
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self) -> FieldElement:
        value = self.unary()
        while self.peek() in ("*", "/"):
            op = self.take()
            col = self.col()
            rhs = self.unary()
            if op == "*":
                value = value * rhs
            else:
                if rhs.is_zero():
                    raise FieldParseError("division by zero", col)
                value = value / rhs
        return value

    def unary(self) -> FieldElement:
        sign = 1
        while self.peek() in ("+", "-"):
            if self.take() == "-":
                sign = -sign
        value = self.power()
        return value if sign > 0 else -value

    def power(self) -> FieldElement:
        value = self.atom()
        if self.peek() == "^":
            self.take()
            neg = False
            if self.peek() == "-":
                self.take()
                neg = True
            tok = self.peek()
            if tok is None or not tok.isdigit():
                raise FieldParseError("expected integer exponent", self.col())
            self.take()
            exp = int(tok)
            value = value ** (-exp if neg else exp)
        return value

    def atom(self) -> FieldElement:
        tok = self.peek()
        if tok is None:
            raise FieldParseError("unexpected end of input", self.end_col)
        if tok.isdigit():
            self.take()
            return FieldElement(int(tok))
        if tok == "t":
            self.take()
            return T
        if tok == "(":
            self.take()
            value = self.expr()
            self.expect(")")
            return value
        raise FieldParseError(f"unexpected token {tok!r}", self.col())


def parse_field_element(text: str) -> FieldElement:
    """Parse textual Q(t) syntax such as "(2*t^2 - 1)/(3*t + 2)"."""
    return _Parser(text).parse()
