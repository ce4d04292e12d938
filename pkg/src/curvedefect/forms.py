"""Homogeneous ternary forms with rational coefficients.

Monomials x^a y^b z^c of degree j are ordered lexicographically on the
exponent triple ``(a, b, c)``, ascending, so degree 2 runs
``z^2, y*z, y^2, x*z, x*y, x^2``.  Every graded matrix in the package uses
this order.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, reduce
from math import gcd, lcm
from typing import Iterable, Mapping

from .exact_linalg import as_scalar

Exponent = tuple[int, int, int]
VARIABLES = ("x", "y", "z")


class FormError(ValueError):
    """Invalid form or polynomial text."""


class ParseError(FormError):
    def __init__(self, message: str, position: int | None = None):
        self.position = position
        if position is not None:
            message = f"{message} at position {position}"
        super().__init__(message)


class InhomogeneousError(FormError):
    def __init__(self, low: int, high: int):
        self.degrees = (low, high)
        super().__init__(f"inhomogeneous polynomial: terms of degrees {low} and {high}")


def dim_graded(j: int) -> int:
    """dim S_j = (j+1)(j+2)/2, and 0 for negative j."""
    return (j + 1) * (j + 2) // 2 if j >= 0 else 0


@lru_cache(maxsize=None)
def monomial_basis(j: int) -> tuple[Exponent, ...]:
    if j < 0:
        return ()
    return tuple((a, b, j - a - b) for a in range(j + 1) for b in range(j - a + 1))


def monomial_index(e: Exponent) -> int:
    a, b, c = e
    j = a + b + c
    return a * (j + 1) - a * (a - 1) // 2 + b


@lru_cache(maxsize=None)
def shift_table(j: int, k: int) -> tuple[tuple[int, ...], ...]:
    """``table[u][m]`` = index in S_{j+k} of (monomial u of S_k) * (monomial m of S_j)."""
    out = []
    for u in monomial_basis(k):
        out.append(tuple(
            monomial_index((u[0] + m[0], u[1] + m[1], u[2] + m[2])) for m in monomial_basis(j)
        ))
    return tuple(out)


@dataclass(frozen=True)
class Form:
    """A homogeneous polynomial of a fixed degree in x, y, z.

    ``coeffs`` follows :func:`monomial_basis` of ``degree``.  The zero form
    keeps its degree.
    """

    degree: int
    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        if self.degree < 0:
            raise FormError("degree must be non-negative")
        coeffs = tuple(as_scalar(c) for c in self.coeffs)
        if len(coeffs) != dim_graded(self.degree):
            raise FormError(
                f"degree {self.degree} needs {dim_graded(self.degree)} coefficients, got {len(coeffs)}"
            )
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def from_terms(cls, terms: Mapping[Exponent, object], degree: int | None = None) -> "Form":
        terms = {e: as_scalar(c) for e, c in terms.items() if c}
        degrees = {sum(e) for e in terms}
        if degree is None:
            if len(degrees) > 1:
                raise InhomogeneousError(min(degrees), max(degrees))
            degree = degrees.pop() if degrees else 0
        elif degrees - {degree}:
            bad = max(degrees - {degree}, key=lambda t: abs(t - degree))
            raise InhomogeneousError(*sorted((degree, bad)))
        coeffs = [Fraction(0)] * dim_graded(degree)
        for e, c in terms.items():
            coeffs[monomial_index(e)] = c
        return cls(degree, tuple(coeffs))

    @classmethod
    def zero(cls, degree: int) -> "Form":
        return cls(degree, (Fraction(0),) * dim_graded(degree))

    @classmethod
    def monomial(cls, e: Exponent, coeff=1) -> "Form":
        return cls.from_terms({tuple(e): coeff}, degree=sum(e))

    def terms(self) -> dict[Exponent, Fraction]:
        basis = monomial_basis(self.degree)
        return {basis[i]: c for i, c in enumerate(self.coeffs) if c}

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __add__(self, other: "Form") -> "Form":
        if not isinstance(other, Form):
            return NotImplemented
        if self.degree != other.degree:
            raise InhomogeneousError(*sorted((self.degree, other.degree)))
        return Form(self.degree, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "Form":
        return Form(self.degree, tuple(-a for a in self.coeffs))

    def __sub__(self, other: "Form") -> "Form":
        return self + (-other)

    def __mul__(self, other) -> "Form":
        if isinstance(other, Form):
            return multiply(self, other)
        c = as_scalar(other)
        return Form(self.degree, tuple(c * a for a in self.coeffs))

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Form":
        if n < 0:
            raise FormError("negative power")
        return reduce(multiply, [self] * n, Form.monomial((0, 0, 0)))

    def partials(self) -> tuple["Form", "Form", "Form"]:
        return partials(self)

    def evaluate(self, point) -> Fraction:
        return evaluate(self, point)

    def substitute_powers(self, k: int) -> "Form":
        return substitute_powers(self, k)

    def integral(self) -> "Form":
        """Positive integer multiple with coprime integer coefficients."""
        nonzero = [c for c in self.coeffs if c]
        if not nonzero:
            return self
        scale = reduce(lcm, (c.denominator for c in nonzero), 1)
        ints = [int(c * scale) for c in self.coeffs]
        g = reduce(gcd, ints, 0)
        return Form(self.degree, tuple(Fraction(v // g) for v in ints))

    def render(self) -> str:
        return render(self)

    def __str__(self) -> str:
        return render(self)

    def __repr__(self) -> str:
        return f"Form({render(self)!r}, degree={self.degree})"


def multiply(f: Form, g: Form) -> Form:
    out: dict[Exponent, Fraction] = {}
    for (a1, b1, c1), u in f.terms().items():
        for (a2, b2, c2), v in g.terms().items():
            e = (a1 + a2, b1 + b2, c1 + c2)
            out[e] = out.get(e, 0) + u * v
    return Form.from_terms(out, degree=f.degree + g.degree)


def product(forms: Iterable[Form]) -> Form:
    return reduce(multiply, forms, Form.monomial((0, 0, 0)))


def partials(f: Form) -> tuple[Form, Form, Form]:
    """(f_x, f_y, f_z), each of degree d-1."""
    if f.degree == 0:
        raise FormError("partials need degree at least 1")
    out = []
    for v in range(3):
        terms = {}
        for e, c in f.terms().items():
            if e[v]:
                lowered = list(e)
                lowered[v] -= 1
                terms[tuple(lowered)] = c * e[v]
        out.append(Form.from_terms(terms, degree=f.degree - 1))
    return tuple(out)


def substitute_powers(f: Form, k: int) -> Form:
    """f(x^k, y^k, z^k)."""
    if k < 1:
        raise FormError("k must be a positive integer")
    terms = {(a * k, b * k, c * k): v for (a, b, c), v in f.terms().items()}
    return Form.from_terms(terms, degree=f.degree * k)


def linear_form(a, b, c) -> Form:
    return Form.from_terms({(1, 0, 0): a, (0, 1, 0): b, (0, 0, 1): c}, degree=1)


def linear_substitution(f: Form, matrix) -> Form:
    """f(L x): each variable is replaced by the matching row of ``matrix``."""
    images = [linear_form(*row) for row in matrix]
    powers = [[Form.monomial((0, 0, 0))] for _ in range(3)]
    for v in range(3):
        for _ in range(f.degree):
            powers[v].append(multiply(powers[v][-1], images[v]))
    out = Form.zero(f.degree)
    for (a, b, c), coeff in f.terms().items():
        out = out + multiply(multiply(powers[0][a], powers[1][b]), powers[2][c]) * coeff
    return out


def evaluate(f: Form, point) -> Fraction:
    x, y, z = (as_scalar(t) for t in point)
    return sum((c * x**a * y**b * z**c_ for (a, b, c_), c in f.terms().items()), Fraction(0))


# --------------------------------------------------------------------------
# text <-> Form

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_]\w*)|(\S))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:  # trailing whitespace
            break
        start = m.start(m.lastindex)
        if m.group(1) is not None:
            if m.end() < len(text) and text[m.end()] == ".":
                raise ParseError("decimal literals are not allowed", m.end())
            tokens.append(("num", m.group(1), start))
        elif m.group(2) is not None:
            name = m.group(2)
            if name not in VARIABLES:
                raise ParseError(f"unknown variable {name!r}", start)
            tokens.append(("var", name, start))
        else:
            ch = m.group(3)
            if ch == ".":
                raise ParseError("decimal literals are not allowed", start)
            if ch not in "+-*/^()":
                raise ParseError(f"unexpected character {ch!r}", start)
            tokens.append(("op", ch, start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


Poly = dict  # exponent triple -> Fraction, degree-mixed during parsing


def _padd(p: Poly, q: Poly, sign: int = 1) -> Poly:
    out = dict(p)
    for e, c in q.items():
        out[e] = out.get(e, 0) + sign * c
    return {e: c for e, c in out.items() if c}


def _pmul(p: Poly, q: Poly) -> Poly:
    out: Poly = {}
    for e1, c1 in p.items():
        for e2, c2 in q.items():
            e = (e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2])
            out[e] = out.get(e, 0) + c1 * c2
    return {e: c for e, c in out.items() if c}


class _Parser:
    # expr   := term (('+'|'-') term)*
    # term   := unary (('*'|'/') unary)*
    # unary  := '-' unary | '+' unary | power
    # power  := atom ('^' INT)?
    # atom   := INT | VAR | '(' expr ')'

    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def parse(self) -> Poly:
        if self.peek()[0] == "end":
            raise ParseError("empty input", 0)
        p = self.expr()
        kind, value, pos = self.peek()
        if kind != "end":
            if kind in ("num", "var") or value == "(":
                raise ParseError("implicit multiplication is not allowed; use '*'", pos)
            raise ParseError(f"unexpected {value!r}", pos)
        return p

    def expr(self) -> Poly:
        p = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            p = _padd(p, self.term(), 1 if op == "+" else -1)
        return p

    def term(self) -> Poly:
        p = self.unary()
        while self.peek()[0] == "op" and self.peek()[1] in ("*", "/"):
            op, pos = self.take()[1:]
            q = self.unary()
            if op == "*":
                p = _pmul(p, q)
            else:
                if any(e != (0, 0, 0) for e in q) or not q:
                    raise ParseError("division only by a nonzero constant", pos)
                inv = 1 / q[(0, 0, 0)]
                p = {e: c * inv for e, c in p.items()}
        return p

    def unary(self) -> Poly:
        kind, value, _ = self.peek()
        if kind == "op" and value in ("-", "+"):
            self.take()
            p = self.unary()
            return {e: -c for e, c in p.items()} if value == "-" else p
        return self.power()

    def power(self) -> Poly:
        base = self.atom()
        if self.peek()[1] == "^" and self.peek()[0] == "op":
            self.take()
            kind, value, pos = self.take()
            if kind != "num":
                raise ParseError("exponent must be a non-negative integer literal", pos)
            result: Poly = {(0, 0, 0): Fraction(1)}
            for _ in range(int(value)):
                result = _pmul(result, base)
            return result
        return base

    def atom(self) -> Poly:
        kind, value, pos = self.take()
        if kind == "num":
            return {(0, 0, 0): Fraction(int(value))} if int(value) else {}
        if kind == "var":
            e = [0, 0, 0]
            e[VARIABLES.index(value)] = 1
            return {tuple(e): Fraction(1)}
        if value == "(":
            p = self.expr()
            k2, v2, p2 = self.take()
            if v2 != ")":
                raise ParseError("expected ')'", p2)
            return p
        if kind == "end":
            raise ParseError("unexpected end of input", pos)
        raise ParseError(f"unexpected {value!r}", pos)


def parse_form(text: str) -> Form:
    """Parse polynomial text into a :class:`Form`.

    Grammar: integers, ``x``, ``y``, ``z``, ``+ - * ^``, parentheses and
    unary minus.  ``/`` is accepted only with a constant divisor so that
    rational coefficients round-trip through :func:`render`.
    """
    poly = _Parser(text).parse()
    degrees = sorted({sum(e) for e in poly})
    if len(degrees) > 1:
        raise InhomogeneousError(degrees[0], degrees[-1])
    return Form.from_terms(poly, degree=degrees[0] if degrees else 0)


def _render_monomial(e: Exponent) -> str:
    parts = []
    for name, k in zip(VARIABLES, e):
        if k == 1:
            parts.append(name)
        elif k > 1:
            parts.append(f"{name}^{k}")
    return "*".join(parts)


def render(f: Form) -> str:
    """Canonical text, highest monomial first; parses back to ``f``."""
    pieces = []
    for e, c in sorted(f.terms().items(), reverse=True):
        mono = _render_monomial(e)
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        if mag.denominator != 1:
            coeff = f"{mag.numerator}/{mag.denominator}"
            body = f"{coeff}*{mono}" if mono else coeff
        elif mono and mag == 1:
            body = mono
        else:
            body = f"{mag.numerator}*{mono}" if mono else str(mag.numerator)
        pieces.append((sign, body))
    if not pieces:
        return "0"
    first_sign, first = pieces[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in pieces[1:]:
        out += f" {sign} {body}"
    return out
