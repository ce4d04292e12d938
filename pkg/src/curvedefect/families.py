"""Concrete curves with known singularities, used to exercise the bounds.

Random constructions are reproducible from a seed and certified after the
fact: a candidate whose measured Tjurina number does not match its expected
census is discarded and the next seed is tried.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb, gcd
from typing import Callable

import sympy

from .exact_linalg import ExactMatrix, kernel_basis
from .forms import (
    Form,
    dim_graded,
    evaluate,
    linear_form,
    linear_substitution,
    monomial_basis,
    parse_form,
    product,
    substitute_powers,
)
from .jacobian import CurveError, ceil_three_quarters_square, profile
from .singularities import CUSP, NODE, ORDINARY_TRIPLE, A, Census

log = logging.getLogger(__name__)

COEFF_BOX = 20
DEFAULT_RETRIES = 25


class ConstructionError(RuntimeError):
    def __init__(self, message: str, seed: int | None = None):
        self.seed = seed
        super().__init__(f"{message} (last seed {seed})" if seed is not None else message)


@dataclass(frozen=True)
class FamilyInstance:
    form: Form
    name: str
    expected_census: Census
    irreducible: bool
    params: dict = field(default_factory=dict)
    expected: dict = field(default_factory=dict)
    provenance: dict = field(default_factory=dict)

    def __post_init__(self):
        tau = self.expected.get("tau")
        if tau is not None and tau != self.expected_census.tau:
            raise ValueError(f"{self.name}: expected tau {tau} != census tau {self.expected_census.tau}")

    @property
    def degree(self) -> int:
        return self.form.degree

    @property
    def label(self) -> str:
        args = ",".join(f"{k}={v}" for k, v in self.params.items())
        return f"{self.name}({args})" if args else self.name


# --------------------------------------------------------------------------
# explicit curves


def persson(m: int) -> FamilyInstance:
    """Four curves x^{m/2} +- y^{m/2} +- z^{m/2}; degree 2m with 3m points of type A_{m-1}."""
    if m % 2 or m < 4:
        raise ValueError("persson needs an even m >= 4")
    h = m // 2
    X, Y, Z = (Form.monomial(e) ** h for e in ((1, 0, 0), (0, 1, 0), (0, 0, 1)))
    form = product([X + Y + Z, -X + Y + Z, X - Y + Z, X + Y - Z])
    census = Census.of({A(m - 1): 3 * m})
    return FamilyInstance(
        form, "persson", census, irreducible=False, params={"m": m},
        expected={"tau": census.tau, "nu": 1},
        provenance={"tau": "census 3m x A_{m-1}", "nu": "nearly free"},
    )


DUAL_FERMAT_SEXTIC = "x^6 + y^6 + z^6 - 2*x^3*y^3 - 2*x^3*z^3 - 2*y^3*z^3"


@lru_cache(maxsize=None)
def _validated_sextic() -> Form:
    f = parse_form(DUAL_FERMAT_SEXTIC)
    p = profile(f)
    if (p.tau, p.nu) != (18, 1):
        raise ConstructionError(f"dual Fermat sextic failed validation: tau={p.tau}, nu={p.nu}")
    return f


def dual_fermat_sextic(validate: bool = True) -> FamilyInstance:
    """Dual of the Fermat cubic: an irreducible sextic with 9 ordinary cusps.

    The cusps sit at (1 : w : 0) and its permutations, w^3 = 1, one for each
    flex of the cubic.
    """
    form = _validated_sextic() if validate else parse_form(DUAL_FERMAT_SEXTIC)
    census = Census.of({CUSP: 9})
    return FamilyInstance(
        form, "dual_fermat_sextic", census, irreducible=True,
        expected={"tau": 18, "nu": 1, "mdr_lower_bound": 3},
        provenance={"tau": "9 cusps, tau 2 each", "nu": "nearly free"},
    )


def _line_restriction(f: Form, axis: int) -> list[int]:
    # coefficients of f restricted to {x_axis = 0}, dehomogenized, low degree first
    others = [v for v in range(3) if v != axis]
    coeffs = [0] * (f.degree + 1)
    for e, c in f.terms().items():
        if e[axis] == 0:
            coeffs[e[others[0]]] = c
    return coeffs


def triangle_in_general_position(f: Form) -> bool:
    """True when no coordinate vertex lies on C and each coordinate line
    meets C in d distinct points.

    The restriction of f to a coordinate line has full degree and nonzero
    discriminant exactly when that line misses Sing(C) and is nowhere tangent.
    """
    vertices = ((1, 0, 0), (0, 1, 0), (0, 0, 1))
    if any(evaluate(f, v) == 0 for v in vertices):
        return False
    t = sympy.Symbol("t")
    for axis in range(3):
        coeffs = _line_restriction(f, axis)
        poly = sympy.Poly(list(reversed([sympy.Rational(c.numerator, c.denominator) if c else 0
                                         for c in coeffs])), t)
        if poly.degree() != f.degree or poly.discriminant() == 0:
            return False
    return True


def general_position_sextic(seed: int = 0, retries: int = DEFAULT_RETRIES) -> tuple[Form, list[list[int]]]:
    """The dual Fermat sextic moved by an integer projectivity so that the
    coordinate triangle is in general position with respect to it."""
    base = dual_fermat_sextic().form
    rng = random.Random(seed)
    for _ in range(retries):
        L = [[rng.randint(-3, 3) for _ in range(3)] for _ in range(3)]
        if sympy.Matrix(L).det() == 0:
            continue
        moved = linear_substitution(base, L).integral()
        if triangle_in_general_position(moved):
            return moved, L
    raise ConstructionError("no general-position coordinate change found", seed)


def ivinskis(k: int, seed: int = 0) -> FamilyInstance:
    """Kummer cover (x, y, z) -> (x^k, y^k, z^k) of the 9-cuspidal sextic.

    The cover only multiplies the cusps when the branch triangle is in general
    position, so the sextic is first moved by :func:`general_position_sextic`.
    """
    if k < 1:
        raise ValueError("k must be a positive integer")
    base, L = general_position_sextic(seed)
    form = substitute_powers(base, k)
    census = Census.of({CUSP: 9 * k * k})
    return FamilyInstance(
        form, "ivinskis", census, irreducible=True, params={"k": k, "seed": seed},
        expected={"tau": 18 * k * k, "nu": 9 * k * k - 9 * k + 1, "mdr_lower_bound": 5 * k - 2},
        provenance={"tau": "9k^2 cusps", "nu": "9k^2 - 9k + 1", "coordinate_change": L},
    )


def braid_arrangement() -> FamilyInstance:
    form = parse_form("x*y*z*(x-y)*(x-z)*(y-z)")
    census = Census.of({ORDINARY_TRIPLE: 4, NODE: 3})
    return FamilyInstance(
        form, "braid", census, irreducible=False,
        expected={"tau": 19, "nu": 0, "mdr": 2},
        provenance={"nu": "free arrangement with exponents (2, 3)"},
    )


def fermat_series_max(d: int) -> int:
    """Largest coefficient of ((1 - t^{d-1}) / (1 - t))^3."""
    row = [1] * (d - 1)
    series = [1]
    for _ in range(3):
        out = [0] * (len(series) + len(row) - 1)
        for i, a in enumerate(series):
            for j, b in enumerate(row):
                out[i + j] += a * b
        series = out
    return max(series)


def fermat(d: int) -> FamilyInstance:
    if d < 1:
        raise ValueError("degree must be at least 1")
    X, Y, Z = (Form.monomial(e) ** d for e in ((1, 0, 0), (0, 1, 0), (0, 0, 1)))
    nu = fermat_series_max(d) if d >= 2 else 0
    return FamilyInstance(
        X + Y + Z, "fermat", Census(), irreducible=True, params={"d": d},
        expected={"tau": 0, "nu": nu, "mdr": d - 1},
        provenance={"nu": "max coefficient of the Milnor series"},
    )


# --------------------------------------------------------------------------
# random constructions


def _primitive(v: tuple[int, int, int]) -> tuple[int, int, int]:
    g = gcd(gcd(v[0], v[1]), v[2])
    v = tuple(x // g for x in v)
    lead = next(x for x in v if x)
    return tuple(-x for x in v) if lead < 0 else v


def _cross(a, b):
    return (a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0])


def _distinct_points(lines: list[tuple[int, int, int]]) -> int:
    """Number of distinct pairwise intersection points; -1 if two lines coincide."""
    points = set()
    for i in range(len(lines)):
        for j in range(i):
            p = _cross(lines[i], lines[j])
            if p == (0, 0, 0):
                return -1
            points.add(_primitive(p))
    return len(points)


def generic_lines(n: int, seed: int = 0, concurrent: bool = False,
                  retries: int = DEFAULT_RETRIES) -> FamilyInstance:
    """Product of ``n`` lines with small random integer coefficients.

    Without ``concurrent`` every intersection is a node.  With it the third
    line is forced through the intersection of the first two, giving one
    ordinary triple point.
    """
    if n < 3:
        raise ValueError("need at least 3 lines")
    rng = random.Random(seed)
    for _ in range(retries):
        lines = []
        while len(lines) < n:
            v = tuple(rng.randint(-COEFF_BOX, COEFF_BOX) for _ in range(3))
            if any(v):
                lines.append(v)
        if concurrent:
            a, b = rng.choice([1, 2, 3]), rng.choice([-2, -1, 1, 2])
            lines[2] = tuple(a * s + b * t for s, t in zip(lines[0], lines[1]))
            # the three pairs among lines 0..2 collapse to one point, nothing else may
            ok = _distinct_points(lines) == comb(n, 2) - 2
            census = Census.of({ORDINARY_TRIPLE: 1, **({NODE: comb(n, 2) - 3} if n > 3 else {})})
        else:
            ok = _distinct_points(lines) == comb(n, 2)
            census = Census.of({NODE: comb(n, 2)})
        if ok:
            form = product(linear_form(*v) for v in lines)
            return FamilyInstance(
                form, "lines", census, irreducible=False,
                params={"n": n, "seed": seed, **({"concurrent": True} if concurrent else {})},
                expected={"tau": census.tau},
                provenance={"lines": lines},
            )
    raise ConstructionError(f"no admissible arrangement of {n} lines", seed)


def _binary_form(rng: random.Random, d: int) -> list[int]:
    return [rng.randint(-COEFF_BOX, COEFF_BOX) for _ in range(d + 1)]


def _eval_binary(coeffs: list[int], s: int, t: int) -> int:
    d = len(coeffs) - 1
    return sum(c * s**i * t ** (d - i) for i, c in enumerate(coeffs))


def implicitize(P, Q, R, d: int, samples: int | None = None) -> Form | None:
    """Degree-d equation of the image of s -> (P(s), Q(s), R(s)), or None.

    The coefficients are the kernel of the evaluation matrix at sampled image
    points; None if that kernel is not one-dimensional.  More than d^2
    samples make any degree-d form vanishing on them a multiple of the
    equation (Bezout).
    """
    basis = monomial_basis(d)
    samples = samples or max(dim_graded(d) + 5, d * d + 1)
    params = [(s, 1) for s in range(-(samples // 2), samples - samples // 2)]
    rows = []
    for s, t in params:
        x, y, z = (_eval_binary(c, s, t) for c in (P, Q, R))
        rows.append([x**a * y**b * z**c for a, b, c in basis])
    K = kernel_basis(ExactMatrix(rows))
    if K.cols != 1:
        return None
    return Form(d, K.column(0)).integral()


def rational_nodal(d: int, seed: int = 0, retries: int = DEFAULT_RETRIES,
                   validate: bool = True) -> FamilyInstance:
    """Image of a random degree-d map P^1 -> P^2: an irreducible rational
    curve with (d-1)(d-2)/2 nodes, certified by its Tjurina number."""
    if d < 3:
        raise ValueError("degree must be at least 3")
    nodes = (d - 1) * (d - 2) // 2
    rng = random.Random(seed)
    for attempt in range(retries):
        P, Q, R = (_binary_form(rng, d) for _ in range(3))
        form = implicitize(P, Q, R, d)
        if form is None:
            continue
        if validate:
            try:
                t = profile(form).tau
            except CurveError:
                continue
            if t != nodes:
                log.info("rational_nodal(d=%d, seed=%d): attempt %d gave tau=%d", d, seed, attempt, t)
                continue
        census = Census.of({NODE: nodes})
        return FamilyInstance(
            form, "rational_nodal", census, irreducible=True,
            params={"d": d, "seed": seed},
            expected={"tau": nodes, "nu": ceil_three_quarters_square(d) - nodes, "mdr_lower_bound": d - 2},
            provenance={"parametrization": (P, Q, R), "attempt": attempt},
        )
    raise ConstructionError(f"no nodal rational curve of degree {d}", seed)


#: name -> (constructor, accepted keyword parameters)
FAMILIES: dict[str, tuple[Callable[..., FamilyInstance], tuple[str, ...]]] = {
    "persson": (persson, ("m",)),
    "dual_fermat_sextic": (dual_fermat_sextic, ()),
    "ivinskis": (ivinskis, ("k", "seed")),
    "braid": (braid_arrangement, ()),
    "fermat": (fermat, ("d",)),
    "lines": (generic_lines, ("n", "seed")),
    "rational_nodal": (rational_nodal, ("d", "seed")),
}


def build(name: str, **params) -> FamilyInstance:
    """Construct a family by name, ignoring parameters it does not take."""
    try:
        ctor, accepted = FAMILIES[name]
    except KeyError:
        raise ValueError(f"unknown family {name!r}; choose from {sorted(FAMILIES)}") from None
    kwargs = {k: v for k, v in params.items() if k in accepted and v is not None}
    missing = [k for k in accepted if k not in kwargs and k != "seed"]
    if missing:
        raise ValueError(f"family {name!r} needs --{missing[0]}")
    return ctor(**kwargs)
