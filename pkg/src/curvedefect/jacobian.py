"""Jacobian syzygies, Milnor algebra, saturation and the defect of a plane curve.

For a reduced curve C = {f = 0} of degree d put T = 3(d-2).  Everything is
computed degree by degree with linear algebra on the graded pieces S_j:

* J_j, the degree-j part of the Jacobian ideal, is the image of
  S_{j-d+1}^3 -> S_j, (a, b, c) -> a f_x + b f_y + c f_z;
* dim AR(f)_r = 3 dim S_r - dim J_{r+d-1}, and mdr is the first r where it is
  positive;
* the Milnor algebra dimension dim (S/J)_j equals the total Tjurina number
  for j > T;
* the saturation is built top-down from I_{T+1} = J_{T+1} by
  I_j = {g : xg, yg, zg in I_{j+1}}, and n_j = dim I_j - dim J_j.

The default field strategy runs the whole chain modulo two independent large
primes and accepts the result only if every dimension agrees; otherwise it
reruns over Q, which is authoritative.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .exact_linalg import ExactMatrix, PrimeField, RationalField, Span, random_primes
from .forms import Form, dim_graded, shift_table

log = logging.getLogger(__name__)

#: Seed for the modular primes; fixed so that runs are reproducible.
PRIME_SEED = 20240611
DEFAULT_PRIME_COUNT = 2


class CurveError(ValueError):
    """The input is not a reduced plane curve the pipeline can handle."""


class NonReducedError(CurveError):
    def __init__(self, detail: str = ""):
        msg = "non-reduced or non-isolated singularities"
        super().__init__(f"{msg}: {detail}" if detail else msg)


class DualityError(CurveError):
    """The computed Jacobian module dimensions are not self-dual."""


def socle_degree(d: int) -> int:
    """T = 3(d-2), the top degree where N(f) can be nonzero."""
    return 3 * (d - 2)


def classify(nu: int) -> str:
    if nu == 0:
        return "free"
    if nu == 1:
        return "nearly_free"
    return f"defect({nu})"


# --------------------------------------------------------------------------
# field selection


def resolve_fields(field: object = None, primes: Sequence[int] | None = None) -> list:
    """Engines for a field choice: ``None``/"modular", "rational", an engine, or a list."""
    if field is None or field == "modular":
        if primes is None:
            primes = random_primes(DEFAULT_PRIME_COUNT, PRIME_SEED)
        return [PrimeField(p) for p in primes]
    if field in ("rational", "exact", "Q"):
        return [RationalField()]
    if isinstance(field, (PrimeField, RationalField)):
        return [field]
    if isinstance(field, (list, tuple)):
        return list(field)
    raise ValueError(f"unknown field {field!r}")


def _single_field(field) -> PrimeField | RationalField:
    return resolve_fields(field)[0]


# --------------------------------------------------------------------------
# graded pieces


@dataclass(frozen=True)
class GradedSubspace:
    """A subspace of S_j with its reduced echelon basis (rows = vectors)."""

    degree: int
    span: Span
    field_label: str

    @property
    def dim(self) -> int:
        return self.span.dim

    @property
    def ambient_dim(self) -> int:
        return self.span.ambient

    def basis(self) -> ExactMatrix:
        """Basis as columns of an :class:`ExactMatrix` (exact fields only)."""
        if self.field_label != "Q":
            raise TypeError("only subspaces computed over Q have a rational basis")
        return ExactMatrix.from_columns(self.span.basis, self.span.ambient)

    def forms(self) -> list[Form]:
        return [Form(self.degree, tuple(v)) for v in self.basis().columns()]


class _GradedJacobian:
    """Per-curve cache of the graded matrices over one field engine."""

    def __init__(self, f: Form, engine):
        if f.degree < 1:
            raise CurveError("degree must be at least 1")
        if f.is_zero():
            raise CurveError("the zero polynomial does not define a curve")
        self.f = f.integral()
        self.d = f.degree
        self.engine = engine
        self._partials = [
            {i: int(c) for i, c in enumerate(g.coeffs) if c} for g in self.f.partials()
        ]
        self._rank: dict[int, int] = {}

    def generator_rows(self, j: int) -> list[dict[int, int]]:
        k = j - self.d + 1
        if k < 0:
            return []
        table = shift_table(self.d - 1, k)
        rows = []
        for u in range(dim_graded(k)):
            shift = table[u]
            for g in self._partials:
                rows.append({shift[i]: c for i, c in g.items()})
        return rows

    def generators(self, j: int):
        return self.engine.matrix(self.generator_rows(j), dim_graded(j))

    def jacobian_rank(self, j: int) -> int:
        if j not in self._rank:
            rows = self.generator_rows(j)
            self._rank[j] = self.engine.rank(self.engine.matrix(rows, dim_graded(j))) if rows else 0
        return self._rank[j]

    def jacobian_span(self, j: int) -> Span:
        span = self.engine.span(self.generators(j)) if j >= self.d - 1 else self.engine.span(
            self.engine.matrix([], dim_graded(j))
        )
        self._rank.setdefault(j, span.dim)
        return span

    def ar_dim(self, r: int) -> int:
        return 3 * dim_graded(r) - self.jacobian_rank(r + self.d - 1)

    def mdr(self) -> int:
        for r in range(self.d):
            if self.ar_dim(r) > 0:
                return r
        raise AssertionError("no Jacobian relation up to degree d-1")  # Koszul relation exists

    def milnor_dim(self, j: int) -> int:
        return dim_graded(j) - self.jacobian_rank(j)

    def tau(self, margin: int = 0) -> int:
        T = socle_degree(self.d)
        values = [self.milnor_dim(T + 1 + i) for i in range(2 + margin)]
        if len(set(values)) != 1:
            raise NonReducedError(
                f"Milnor algebra dimensions {values} in degrees {T + 1}..{T + 2 + margin} do not stabilize"
            )
        return values[0]

    def saturation(self) -> dict[int, Span]:
        eng = self.engine
        T = socle_degree(self.d)
        if T + 1 < 0:
            return {}
        spans = {T + 1: self.jacobian_span(T + 1)}
        for j in range(T, -1, -1):
            upper = spans[j + 1]
            if upper.codim == 0:
                spans[j] = eng.whole(dim_graded(j))
                continue
            Q = eng.quotient_map(upper)
            table = shift_table(j, 1)
            K = eng.hcat([eng.take_rows(Q, table[u]) for u in range(3)])
            spans[j] = eng.left_kernel(K)
        return spans

    def contains_jacobian(self, j: int, I: Span) -> bool:
        """J_j inside I_j, checked by reducing every generator modulo I_j."""
        rows = self.generator_rows(j)
        if not rows or I.codim == 0:
            return True
        eng = self.engine
        return eng.is_zero(eng.matmul(eng.matrix(rows, dim_graded(j)), eng.quotient_map(I)))


# --------------------------------------------------------------------------
# public operations


def jacobian_piece(f: Form, j: int, field=None) -> GradedSubspace:
    """J_{f,j}; the zero subspace when j < d-1."""
    eng = _single_field(field)
    g = _GradedJacobian(f, eng)
    return GradedSubspace(j, g.jacobian_span(j), eng.label)


def _agree(f: Form, field, func):
    """Evaluate ``func(graded)`` on every engine; fall back to Q on disagreement."""
    engines = resolve_fields(field)
    results = [func(_GradedJacobian(f, e)) for e in engines]
    if all(r == results[0] for r in results):
        return results[0]
    log.warning("modular results disagree (%s); recomputing over Q", [e.label for e in engines])
    return func(_GradedJacobian(f, RationalField()))


def ar_dim(f: Form, r: int, field=None) -> int:
    """dim AR(f)_r, the space of relations a f_x + b f_y + c f_z = 0 of degree r."""
    return _agree(f, field, lambda g: g.ar_dim(r))


def mdr(f: Form, field=None) -> int:
    """Minimal degree of a Jacobian relation; at most d-1."""
    return _agree(f, field, lambda g: g.mdr())


def milnor_dim(f: Form, j: int, field=None) -> int:
    """dim (S/J_f)_j."""
    return _agree(f, field, lambda g: g.milnor_dim(j))


def tau(f: Form, field=None, margin: int = 0) -> int:
    """Total Tjurina number, read off the Milnor algebra in degree 3(d-2)+1.

    Raises :class:`NonReducedError` if the Milnor algebra has not stabilized,
    which is how non-reduced input is detected.
    """
    return _agree(f, field, lambda g: g.tau(margin))


def saturate(f: Form, field=None) -> list[GradedSubspace]:
    """I_{f,j} for j = 0 .. 3(d-2)+1 over a single field."""
    eng = _single_field(field)
    g = _GradedJacobian(f, eng)
    g.tau()
    spans = g.saturation()
    return [GradedSubspace(j, spans[j], eng.label) for j in sorted(spans)]


def jacobian_module_dims(f: Form, field=None) -> tuple[int, ...]:
    """n(f)_j = dim I_{f,j} - dim J_{f,j} for j = 0 .. 3(d-2)."""
    return profile(f, field=field).n_seq


@dataclass(frozen=True)
class JacobianProfile:
    d: int
    mdr: int
    tau: int
    n_seq: tuple[int, ...]
    milnor_seq: tuple[int, ...] = ()
    saturation_dims: tuple[int, ...] = ()
    jacobian_dims: tuple[int, ...] = ()
    containment: bool = True
    field: str = ""

    @property
    def nu(self) -> int:
        return max(self.n_seq, default=0)

    @property
    def classification(self) -> str:
        return classify(self.nu)

    @property
    def socle_degree(self) -> int:
        return socle_degree(self.d)

    def is_self_dual(self) -> bool:
        return is_self_dual(self.n_seq)


def is_self_dual(n_seq: Sequence[int]) -> bool:
    return tuple(n_seq) == tuple(reversed(n_seq))


def _profile_over(f: Form, engine, margin: int) -> JacobianProfile:
    g = _GradedJacobian(f, engine)
    d = g.d
    T = socle_degree(d)
    t = g.tau(margin)
    spans = g.saturation()
    jac = tuple(g.jacobian_rank(j) for j in range(max(T + 3, 0)))
    sat = tuple(spans[j].dim for j in range(T + 2)) if T + 1 >= 0 else ()
    n_seq = tuple(sat[j] - jac[j] for j in range(T + 1))
    contained = all(g.contains_jacobian(j, spans[j]) for j in range(T + 2))
    return JacobianProfile(
        d=d,
        mdr=g.mdr(),
        tau=t,
        n_seq=n_seq,
        milnor_seq=tuple(dim_graded(j) - jac[j] for j in range(len(jac))),
        saturation_dims=sat,
        jacobian_dims=jac,
        containment=contained,
        field=engine.label,
    )


def _comparable(p: JacobianProfile) -> tuple:
    return (p.mdr, p.tau, p.n_seq, p.milnor_seq, p.saturation_dims, p.containment)


def profile(f: Form, field=None, margin: int = 0, check_duality: bool = True,
            parallel: bool = True) -> JacobianProfile:
    """All invariants of C = {f = 0}: mdr, tau, n(f)_j, nu and the class.

    With the default modular field the computation is repeated for each prime
    (in threads when ``parallel``) and must agree; a disagreement triggers an
    exact recomputation over Q.  ``check_duality`` enforces n_j = n_{T-j} and
    raises :class:`DualityError` otherwise.
    """
    engines = resolve_fields(field)
    if parallel and len(engines) > 1:
        with ThreadPoolExecutor(max_workers=len(engines)) as pool:
            results = list(pool.map(lambda e: _profile_over(f, e, margin), engines))
    else:
        results = [_profile_over(f, e, margin) for e in engines]
    first = results[0]
    if all(_comparable(r) == _comparable(first) for r in results):
        prof = first if len(results) == 1 else _relabel(first, "=".join(e.label for e in engines))
    else:
        log.warning("modular profiles disagree over %s; recomputing over Q", [e.label for e in engines])
        prof = _profile_over(f, RationalField(), margin)
    if check_duality and not prof.is_self_dual():
        raise DualityError(f"n(f) sequence {prof.n_seq} is not symmetric about {prof.socle_degree}/2")
    return prof


def _relabel(p: JacobianProfile, label: str) -> JacobianProfile:
    from dataclasses import replace

    return replace(p, field=label)


# --------------------------------------------------------------------------
# closed-form defect


def ceil_three_quarters_square(d: int) -> int:
    """ceil(3 (d-1)^2 / 4)."""
    return -(-3 * (d - 1) ** 2 // 4)


@dataclass(frozen=True)
class CrossCheck:
    d: int
    mdr: int
    tau: int
    measured: int
    small_mdr_value: int | None
    large_mdr_value: int | None
    cases: tuple[str, ...] = field(default=())

    @property
    def predicted(self) -> int:
        return self.small_mdr_value if self.small_mdr_value is not None else self.large_mdr_value

    @property
    def agree(self) -> bool:
        values = [v for v in (self.small_mdr_value, self.large_mdr_value) if v is not None]
        return all(v == self.measured for v in values)

    @property
    def verdict(self) -> str:
        return "agree" if self.agree else "disagree"


def predicted_defect(d: int, r: int, tau: int) -> tuple[int | None, int | None]:
    """Defect from degree, mdr and tau: (value if r < (d-1)/2, value if r >= (d-2)/2)."""
    small = (d - 1) ** 2 - r * (d - 1 - r) - tau if r < Fraction(d - 1, 2) else None
    large = ceil_three_quarters_square(d) - tau if r >= Fraction(d - 2, 2) else None
    return small, large


def theorem12_crosscheck(p: JacobianProfile) -> CrossCheck:
    small, large = predicted_defect(p.d, p.mdr, p.tau)
    cases = tuple(name for name, v in (("r<(d-1)/2", small), ("r>=(d-2)/2", large)) if v is not None)
    return CrossCheck(p.d, p.mdr, p.tau, p.nu, small, large, cases)
