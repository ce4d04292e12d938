"""Singularity types and the numerical bounds built on them.

Log canonical thresholds of the simple singularities come from the weights of
their quasi-homogeneous normal forms: for f = sum of monomials with
wt(x) = w_x, wt(y) = w_y and wt(f) = 1, lct = min(1, w_x + w_y).

* A_n: x^2 + y^{n+1}       -> 1/2 + 1/(n+1)
* D_n: x y^2 + x^{n-1}     -> w_x = 1/(n-1), w_y = (n-2)/(2(n-1)) -> n/(2(n-1))
* E_6: x^3 + y^4           -> 1/3 + 1/4 = 7/12
* E_7: x^3 + x y^3         -> 1/3 + 2/9 = 5/9
* E_8: x^3 + y^5           -> 1/3 + 1/5 = 8/15
* ordinary r-fold point    -> 2/r
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping


@dataclass(frozen=True, order=True)
class Singularity:
    """A singularity type; aliases are normalized on construction.

    ``kind`` is one of "A", "D", "E" or "O" (ordinary r-fold point with
    r >= 4; ordinary double and triple points are A_1 and D_4).
    """

    kind: str
    n: int

    def __post_init__(self):
        kind, n = self.kind, self.n
        if kind == "O":
            if n < 2:
                raise ValueError("ordinary points need multiplicity >= 2")
            if n in (2, 3):
                object.__setattr__(self, "kind", "A" if n == 2 else "D")
                object.__setattr__(self, "n", 1 if n == 2 else 4)
        elif kind == "A":
            if n < 1:
                raise ValueError("A_n needs n >= 1")
        elif kind == "D":
            if n < 4:
                raise ValueError("D_n needs n >= 4")
        elif kind == "E":
            if n not in (6, 7, 8):
                raise ValueError("E_n needs n in {6, 7, 8}")
        else:
            raise ValueError(f"unknown singularity kind {kind!r}")

    @property
    def is_ade(self) -> bool:
        return self.kind in "ADE"

    @property
    def multiplicity(self) -> int:
        if self.kind == "A":
            return 2
        if self.kind in "DE":
            return 3
        return self.n

    def __str__(self) -> str:
        if self == NODE:
            return "node"
        if self == CUSP:
            return "cusp"
        if self == ORDINARY_TRIPLE:
            return "triple"
        if self.kind == "O":
            return f"ord{self.n}"
        return f"{self.kind}{self.n}"


def A(n: int) -> Singularity:
    return Singularity("A", n)


def D(n: int) -> Singularity:
    return Singularity("D", n)


def E(n: int) -> Singularity:
    return Singularity("E", n)


def ordinary(r: int) -> Singularity:
    return Singularity("O", r)


NODE = A(1)
CUSP = A(2)
ORDINARY_TRIPLE = D(4)

_NAMED = {"node": NODE, "cusp": CUSP, "triple": ORDINARY_TRIPLE}


def parse_singularity(text: str) -> Singularity:
    """``node``, ``cusp``, ``triple``, ``A3``, ``D5``, ``E6`` or ``ord4``."""
    t = text.strip().lower()
    if t in _NAMED:
        return _NAMED[t]
    if t.startswith("ord") and t[3:].isdigit():
        return ordinary(int(t[3:]))
    if len(t) > 1 and t[0] in "ade" and t[1:].isdigit():
        return Singularity(t[0].upper(), int(t[1:]))
    raise ValueError(f"unknown singularity {text!r}")


def lct(s: Singularity) -> Fraction:
    if s.kind == "A":
        return Fraction(1, 2) + Fraction(1, s.n + 1)
    if s.kind == "D":
        return Fraction(s.n, 2 * (s.n - 1))
    if s.kind == "E":
        return {6: Fraction(7, 12), 7: Fraction(5, 9), 8: Fraction(8, 15)}[s.n]
    return Fraction(2, s.n)


def tau_local(s: Singularity) -> int:
    # ADE are quasi-homogeneous so tau = mu = n.  Ordinary points of
    # multiplicity >= 4 are taken to be unions of lines, where tau = (r-1)^2.
    if s.is_ade:
        return s.n
    return (s.n - 1) ** 2


def delta_local(s: Singularity) -> int:
    if s == NODE or s == CUSP:
        return 1
    if s == ORDINARY_TRIPLE:
        return 3
    if s.kind == "O":
        return s.n * (s.n - 1) // 2
    raise ValueError(f"delta invariant not tabulated for {s}")


@dataclass(frozen=True)
class Census:
    """Singularity types with positive multiplicities."""

    counts: tuple[tuple[Singularity, int], ...] = field(default=())

    def __post_init__(self):
        merged: Counter = Counter()
        for s, c in self.counts:
            if c < 1:
                raise ValueError("census counts must be positive")
            merged[s] += c
        object.__setattr__(self, "counts", tuple(sorted(merged.items())))

    @classmethod
    def of(cls, items: Mapping[Singularity, int] | Iterable[tuple[Singularity, int]] = ()) -> "Census":
        pairs = items.items() if isinstance(items, Mapping) else items
        return cls(tuple(pairs))

    @classmethod
    def parse(cls, text: str) -> "Census":
        """``"A3:12"`` or ``"node:10,triple:6"``; a bare type means count 1."""
        pairs = []
        for chunk in filter(None, (c.strip() for c in text.split(","))):
            name, _, count = chunk.partition(":")
            pairs.append((parse_singularity(name), int(count) if count else 1))
        return cls.of(pairs)

    def __bool__(self) -> bool:
        return bool(self.counts)

    def __iter__(self):
        return iter(self.counts)

    def get(self, s: Singularity) -> int:
        return dict(self.counts).get(s, 0)

    @property
    def tau(self) -> int:
        return sum(c * tau_local(s) for s, c in self.counts)

    @property
    def delta(self) -> int:
        return sum(c * delta_local(s) for s, c in self.counts)

    @property
    def is_ade(self) -> bool:
        return all(s.is_ade for s, _ in self.counts)

    def types(self) -> set[Singularity]:
        return {s for s, _ in self.counts}

    def __str__(self) -> str:
        return ", ".join(f"{s}x{c}" for s, c in self.counts) or "smooth"


def arnold_exponent(census: Census) -> Fraction | float:
    """Minimum lct over the singular points; ``math.inf`` for a smooth curve."""
    if not census:
        return math.inf
    return min(lct(s) for s, _ in census)


def mdr_lower_bound_value(alpha: Fraction, d: int) -> Fraction:
    """alpha * d - 2 as an exact rational."""
    return Fraction(alpha) * d - 2


def mdr_lower_bound(alpha: Fraction, d: int) -> int:
    """Integer form of mdr >= alpha*d - 2 for curves with quasi-homogeneous singularities."""
    alpha = Fraction(alpha)
    if not 0 < alpha <= 1:
        raise ValueError("alpha must lie in (0, 1]")
    return math.ceil(mdr_lower_bound_value(alpha, d))


def dpw_tau_max(d: int, r: int) -> int:
    """du Plessis-Wall upper bound on the total Tjurina number given mdr = r."""
    if not 0 <= r <= d - 1:
        raise ValueError("need 0 <= r <= d-1")
    top = 2 * r - d + 2
    correction = math.comb(top, 2) if top >= 2 else 0
    return (d - 1) * (d - r - 1) + r * r - correction


def genus(d: int, census: Census) -> int:
    """Geometric genus (d-1)(d-2)/2 - sum of delta invariants."""
    g = (d - 1) * (d - 2) // 2 - census.delta
    if g < 0:
        raise ValueError(f"census {census} is inconsistent with degree {d} (genus {g})")
    return g


# --------------------------------------------------------------------------
# theorem checkers


@dataclass
class Verdict:
    """Outcome of one bound check.

    ``passed`` is None when nothing was measured or the theorem does not
    apply; ``reason`` explains non-applicability.
    """

    kind: str
    applicable: bool
    reason: str = ""
    bound: Fraction | int | None = None
    relation: str = ">="
    measured: int | None = None
    passed: bool | None = None
    details: dict = field(default_factory=dict)

    @property
    def integer_bound(self) -> int | None:
        if self.bound is None:
            return None
        return math.ceil(self.bound) if self.relation == ">=" else int(self.bound)

    def compare(self, measured: int | None) -> "Verdict":
        self.measured = measured
        if measured is not None and self.applicable:
            if self.relation == ">=":
                self.passed = measured >= self.bound
            elif self.relation == "<=":
                self.passed = measured <= self.bound
            else:
                self.passed = measured == self.bound
        return self


def not_applicable(kind: str, reason: str) -> Verdict:
    return Verdict(kind, applicable=False, reason=reason)


def theorem_a(d: int, nu: int | None = None, census: Census | None = None,
              irreducible: bool | None = None) -> Verdict:
    """Irreducible nodal curves of degree d >= 4 have nu >= (d^2 - 1)/4."""
    if d < 4:
        return not_applicable("A", f"degree {d} < 4")
    if census is not None:
        if census.types() - {NODE}:
            return not_applicable("A", "singularities other than nodes")
        if irreducible is not True:
            return not_applicable("A", "curve not known to be irreducible")
        if census.get(NODE) > (d - 1) * (d - 2) // 2:
            return not_applicable("A", "more nodes than an irreducible curve can have")
    bound = Fraction(d * d - 1, 4)
    v = Verdict("A", True, bound=bound, details={
        "mdr_lower_bound": d - 2,
        "tau_upper_bound": (d - 1) * (d - 2) // 2,
    })
    return v.compare(nu)


def theorem_b(k: int, nu: int | None = None) -> Verdict:
    """Genus-zero curves of degree 3k with 2k ordinary triple points and nodes."""
    if k < 3:
        return not_applicable("B", f"k = {k} < 3")
    d = 3 * k
    nodes = Fraction(9 * k * k - 21 * k + 2, 2)
    value = Fraction(-(-3 * (d - 1) ** 2 // 4)) - 4 * 2 * k - nodes
    v = Verdict("B", True, bound=Fraction((9 * k + 1) * (k - 1), 4), details={
        "degree": d,
        "triple_points": 2 * k,
        "nodes": nodes,
        "defect_value": value,
        "mdr_lower_bound": 2 * k - 2,
    })
    return v.compare(nu)


def theorem_c(k: int, nu: int | None = None) -> Verdict:
    """Degree 6k curves with 9k^2 ordinary cusps: nu = 9k^2 - 9k + 1 = genus."""
    if k < 1:
        return not_applicable("C", f"k = {k} < 1")
    d = 6 * k
    census = Census.of({CUSP: 9 * k * k})
    v = Verdict("C", True, bound=9 * k * k - 9 * k + 1, relation="==", details={
        "degree": d,
        "tau": census.tau,
        "genus": genus(d, census),
        "mdr_lower_bound": 5 * k - 2,
    })
    return v.compare(nu)


def theorem_c_applies(d: int, census: Census | None) -> int | None:
    """The k for which (d, census) fits Theorem C, else None."""
    if census is None or census.types() != {CUSP} or d % 6:
        return None
    k = d // 6
    return k if census.get(CUSP) == 9 * k * k else None


def theorem_d(d: int, census: Census | None, nu: int | None = None,
              mdr: int | None = None, tau: int | None = None) -> Verdict:
    """Even degree 2m >= 4, ADE singularities, alpha >= 1/2 + 1/m  =>  nu >= 1."""
    if d % 2 or d < 4:
        return not_applicable("D", f"degree {d} is not even and >= 4")
    if census is None:
        return not_applicable("D", "no singularity census supplied")
    if not census:
        return not_applicable("D", "smooth curve: Arnold exponent undefined")
    if not census.is_ade:
        return not_applicable("D", "non-ADE singularities")
    m = d // 2
    alpha = arnold_exponent(census)
    threshold = Fraction(1, 2) + Fraction(1, m)
    if alpha < threshold:
        return not_applicable("D", f"Arnold exponent {alpha} < 1/2 + 1/{m} = {threshold}")
    chain = {
        "alpha": alpha,
        "threshold": threshold,
        "mdr_lower_bound": mdr_lower_bound(alpha, d),
        "tau_max": dpw_tau_max(d, m),
        "ceil_value": 3 * m * m - 3 * m + 1,
    }
    if mdr is not None:
        chain["mdr_ge_m"] = mdr >= m
    if tau is not None:
        chain["tau_le_tau_max"] = tau <= dpw_tau_max(d, m)
    v = Verdict("D", True, bound=1, details=chain)
    return v.compare(nu)


def dpw_check(d: int, mdr: int, tau: int) -> Verdict:
    if d < 1 or not 0 <= mdr <= d - 1:
        return not_applicable("dpw", "mdr outside [0, d-1]")
    v = Verdict("dpw", True, bound=dpw_tau_max(d, mdr), relation="<=")
    return v.compare(tau)
