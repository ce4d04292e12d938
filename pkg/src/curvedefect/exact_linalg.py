"""Exact linear algebra over the rationals, with a modular (mod p) fast path.

Two layers live here:

* column-oriented helpers on :class:`ExactMatrix` (``rank``, ``kernel_basis``,
  ``preimage_kernel``) with Fraction entries;
* two *field engines*, :class:`RationalField` and :class:`PrimeField`, that
  work on row spaces.  The graded computations in :mod:`curvedefect.jacobian`
  are written once against the engine interface and can run either exactly
  over Q or modulo a large prime.

Ranks over Q of an integer matrix are never smaller than ranks modulo a
prime, so the maximum over several primes is a lower bound that is attained
for all but finitely many primes.
"""

from __future__ import annotations

import random
from fractions import Fraction
from functools import reduce
from math import lcm
from numbers import Rational
from typing import Iterable, Sequence

import numpy as np
from sympy import nextprime

Scalar = Fraction

#: Lower end of the window the modular primes are drawn from.
PRIME_FLOOR = 2**30
#: Products of two residues must fit in int64.
PRIME_CEIL = 2**31 - 1


def as_scalar(value) -> Fraction:
    """Coerce an exact number to :class:`Fraction`; floats are rejected."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool) or not isinstance(value, Rational):
        raise TypeError(f"exact rational expected, got {type(value).__name__}")
    return Fraction(value)


class ExactMatrix:
    """Dense immutable matrix of Fractions."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries: Iterable[Iterable], cols: int | None = None):
        grid = tuple(tuple(as_scalar(v) for v in row) for row in entries)
        if cols is None:
            cols = len(grid[0]) if grid else 0
        if any(len(row) != cols for row in grid):
            raise ValueError("ragged matrix")
        self.rows = len(grid)
        self.cols = cols
        self.entries = grid

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "ExactMatrix":
        return cls([[0] * cols for _ in range(rows)], cols=cols)

    @classmethod
    def identity(cls, n: int) -> "ExactMatrix":
        return cls([[int(i == j) for j in range(n)] for i in range(n)], cols=n)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], rows: int) -> "ExactMatrix":
        return cls([[col[i] for col in columns] for i in range(rows)], cols=len(columns))

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def transpose(self) -> "ExactMatrix":
        return ExactMatrix(
            [[self.entries[i][j] for i in range(self.rows)] for j in range(self.cols)],
            cols=self.rows,
        )

    T = property(transpose)

    def column(self, j: int) -> tuple[Fraction, ...]:
        return tuple(row[j] for row in self.entries)

    def columns(self) -> list[tuple[Fraction, ...]]:
        return [self.column(j) for j in range(self.cols)]

    def hstack(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.rows != other.rows:
            raise ValueError("row count mismatch")
        return ExactMatrix(
            [a + b for a, b in zip(self.entries, other.entries)],
            cols=self.cols + other.cols,
        )

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        out = []
        for row in self.entries:
            out.append([
                sum((row[k] * other.entries[k][j] for k in range(self.cols) if row[k]), Fraction(0))
                for j in range(other.cols)
            ])
        return ExactMatrix(out, cols=other.cols)

    def is_zero(self) -> bool:
        return all(v == 0 for row in self.entries for v in row)

    def __eq__(self, other) -> bool:
        return isinstance(other, ExactMatrix) and self.shape == other.shape and self.entries == other.entries

    def __hash__(self) -> int:
        return hash((self.shape, self.entries))

    def __repr__(self) -> str:
        return f"ExactMatrix({self.rows}x{self.cols})"


# --------------------------------------------------------------------------
# exact routines over Q


def _integer_rows(M: ExactMatrix) -> list[list[int]]:
    rows = []
    for row in M.entries:
        scale = reduce(lcm, (v.denominator for v in row), 1)
        rows.append([int(v * scale) for v in row])
    return rows


def rank_fraction_free(M: ExactMatrix) -> int:
    """Rank over Q by Bareiss fraction-free elimination on integer rows."""
    A = _integer_rows(M)
    m, n = M.rows, M.cols
    r, prev = 0, 1
    for c in range(n):
        if r == m:
            break
        pivot = next((i for i in range(r, m) if A[i][c]), None)
        if pivot is None:
            continue
        A[r], A[pivot] = A[pivot], A[r]
        piv = A[r][c]
        for i in range(r + 1, m):
            a = A[i][c]
            row_i, row_r = A[i], A[r]
            for k in range(c + 1, n):
                row_i[k] = (piv * row_i[k] - a * row_r[k]) // prev
            row_i[c] = 0
        prev = piv
        r += 1
    return r


def rank(M: ExactMatrix) -> int:
    """Rank of ``M`` over Q (exact)."""
    return rank_fraction_free(M)


def rref(M: ExactMatrix) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form; returns (nonzero rows, pivot columns)."""
    A = [list(row) for row in M.entries]
    pivots = _rref_fraction_inplace(A, M.cols)
    return A[: len(pivots)], pivots


def _rref_fraction_inplace(A: list[list[Fraction]], n: int) -> list[int]:
    m = len(A)
    r = 0
    pivots: list[int] = []
    for c in range(n):
        if r == m:
            break
        pivot = next((i for i in range(r, m) if A[i][c]), None)
        if pivot is None:
            continue
        A[r], A[pivot] = A[pivot], A[r]
        inv = 1 / A[r][c]
        prow = A[r]
        if inv != 1:
            for k in range(c, n):
                if prow[k]:
                    prow[k] *= inv
        support = [k for k in range(c, n) if prow[k]]
        for i in range(m):
            if i == r:
                continue
            a = A[i][c]
            if a:
                row = A[i]
                for k in support:
                    row[k] -= a * prow[k]
        pivots.append(c)
        r += 1
    return pivots


def _nullspace_rows(R: Sequence[Sequence[Fraction]], pivots: Sequence[int], n: int) -> list[list[Fraction]]:
    pivot_set = set(pivots)
    basis = []
    for f in range(n):
        if f in pivot_set:
            continue
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for i, c in enumerate(pivots):
            v[c] = -R[i][f]
        basis.append(v)
    return basis


def kernel_basis(M: ExactMatrix) -> ExactMatrix:
    """Columns spanning ``{v : M v = 0}``; exactly ``cols - rank`` of them."""
    R, pivots = rref(M)
    vectors = _nullspace_rows(R, pivots, M.cols)
    return ExactMatrix.from_columns(vectors, M.cols)


def preimage_kernel(M: ExactMatrix, V: ExactMatrix) -> ExactMatrix:
    """Basis (as columns) of ``{v : M v in colspan(V)}``.

    Solved as the projection onto the first block of ``ker [M | -V]``; the
    columns of ``V`` are assumed independent so the projection is injective
    modulo ``ker M``.
    """
    if V.cols and V.rows != M.rows:
        raise ValueError(f"target dimension {M.rows} does not match V rows {V.rows}")
    if V.cols == 0:
        return kernel_basis(M)
    neg_V = ExactMatrix([[-v for v in row] for row in V.entries], cols=V.cols)
    K = kernel_basis(M.hstack(neg_V))
    head = [col[: M.cols] for col in K.columns()]
    R, pivots = rref(ExactMatrix(head, cols=M.cols)) if head else ([], [])
    return ExactMatrix.from_columns(R, M.cols)


# --------------------------------------------------------------------------
# modular routines


def random_primes(count: int, seed: int = 0) -> list[int]:
    """``count`` distinct primes in (2^30, 2^31), reproducible from ``seed``."""
    rng = random.Random(seed)
    primes: list[int] = []
    while len(primes) < count:
        p = int(nextprime(rng.randrange(PRIME_FLOOR, PRIME_CEIL - 2**20)))
        if p < PRIME_CEIL and p not in primes:
            primes.append(p)
    return primes


def to_residues(M: ExactMatrix | Sequence[Sequence], p: int) -> np.ndarray:
    """Reduce a rational matrix mod ``p``; fails if a denominator vanishes."""
    entries = M.entries if isinstance(M, ExactMatrix) else M
    out = []
    for row in entries:
        out_row = []
        for v in row:
            v = as_scalar(v)
            den = v.denominator % p
            if den == 0:
                raise ZeroDivisionError(f"denominator divisible by {p}")
            out_row.append(v.numerator % p * pow(den, -1, p) % p)
        out.append(out_row)
    ncols = M.cols if isinstance(M, ExactMatrix) else (len(entries[0]) if entries else 0)
    return np.array(out, dtype=np.int64).reshape(len(out), ncols)


def rref_mod(A: np.ndarray, p: int, reduced: bool = True) -> tuple[np.ndarray, list[int]]:
    """Row echelon form of an int64 matrix over GF(p).

    Entries must already lie in [0, p).  With ``reduced=False`` only the rows
    below each pivot are cleared, which is enough for a rank.
    """
    A = np.array(A, dtype=np.int64, copy=True)
    m, n = A.shape
    r = 0
    pivots: list[int] = []
    for c in range(n):
        if r == m:
            break
        nz = np.flatnonzero(A[r:, c])
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            A[[r, i]] = A[[i, r]]
        inv = pow(int(A[r, c]), p - 2, p)
        if inv != 1:
            A[r, c:] = A[r, c:] * inv % p
        col = A[:, c].copy()
        col[r] = 0
        if not reduced:
            col[:r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            A[hit, c:] = (A[hit, c:] - np.outer(col[hit], A[r, c:])) % p
        pivots.append(c)
        r += 1
    return A[:r], pivots


def rank_mod(M: ExactMatrix | np.ndarray, p: int) -> int:
    A = M if isinstance(M, np.ndarray) else to_residues(M, p)
    if A.size == 0:
        return 0
    return len(rref_mod(A, p, reduced=False)[1])


def rank_modular(M: ExactMatrix, primes: Sequence[int] | None = None) -> int:
    """Maximum of the ranks of ``M`` modulo each prime (a lower bound on the Q-rank)."""
    if primes is None:
        primes = random_primes(2)
    best = 0
    for p in primes:
        try:
            best = max(best, rank_mod(M, p))
        except ZeroDivisionError:
            continue
    return best


def matmul_mod(A: np.ndarray, B: np.ndarray, p: int) -> np.ndarray:
    """``A @ B mod p`` for residues below 2^31 without int64 overflow.

    ``B`` is split into 16-bit limbs; each partial product stays below 2^47,
    so inner dimensions up to 2^15 are safe.
    """
    if A.shape[1] > 2**15:
        raise ValueError("inner dimension too large for limb-split product")
    lo = B & 0xFFFF
    hi = B >> 16
    return ((A @ hi) % p * 65536 + (A @ lo) % p) % p


# --------------------------------------------------------------------------
# field engines: row-space computations shared by the graded code


class Span:
    """Row space held as a reduced echelon basis.

    ``basis`` is engine-specific (an int64 array for :class:`PrimeField`, a
    list of Fraction rows for :class:`RationalField`).
    """

    __slots__ = ("basis", "pivots", "ambient")

    def __init__(self, basis, pivots: Sequence[int], ambient: int):
        self.basis = basis
        self.pivots = list(pivots)
        self.ambient = ambient

    @property
    def dim(self) -> int:
        return len(self.pivots)

    @property
    def codim(self) -> int:
        return self.ambient - self.dim

    def __repr__(self) -> str:
        return f"Span(dim={self.dim}, ambient={self.ambient})"


class PrimeField:
    """Row-space engine over GF(p) backed by int64 numpy arrays."""

    exact = False

    def __init__(self, p: int):
        if not 2 <= p <= PRIME_CEIL:
            raise ValueError("modulus must be a prime below 2^31")
        self.p = p

    def __repr__(self) -> str:
        return f"PrimeField({self.p})"

    @property
    def label(self) -> str:
        return f"GF({self.p})"

    def matrix(self, sparse_rows: Sequence[dict[int, int]], ncols: int) -> np.ndarray:
        A = np.zeros((len(sparse_rows), ncols), dtype=np.int64)
        p = self.p
        for i, row in enumerate(sparse_rows):
            for j, v in row.items():
                A[i, j] = v % p
        return A

    def rank(self, A: np.ndarray) -> int:
        if A.shape[0] == 0 or A.shape[1] == 0:
            return 0
        return len(rref_mod(A, self.p, reduced=False)[1])

    def span(self, A: np.ndarray) -> Span:
        n = A.shape[1]
        if A.shape[0] == 0 or n == 0:
            return Span(np.zeros((0, n), dtype=np.int64), [], n)
        R, piv = rref_mod(A, self.p)
        return Span(R, piv, n)

    def whole(self, n: int) -> Span:
        return Span(np.eye(n, dtype=np.int64), range(n), n)

    def quotient_map(self, V: Span) -> np.ndarray:
        """Matrix ``Q`` (ambient x codim) with ``v @ Q = 0`` iff ``v`` in ``V``."""
        n = V.ambient
        free = np.setdiff1d(np.arange(n), np.array(V.pivots, dtype=np.int64))
        Q = np.zeros((n, free.size), dtype=np.int64)
        Q[free, np.arange(free.size)] = 1
        if V.dim:
            Q[V.pivots] = (-V.basis[:, free]) % self.p
        return Q

    def left_kernel(self, K: np.ndarray) -> Span:
        """Row space of ``{g : g @ K = 0}``."""
        n = K.shape[0]
        if K.shape[1] == 0:
            return self.whole(n)
        R, piv = rref_mod(np.ascontiguousarray(K.T), self.p)
        free = np.setdiff1d(np.arange(n), np.array(piv, dtype=np.int64))
        N = np.zeros((free.size, n), dtype=np.int64)
        N[np.arange(free.size), free] = 1
        if piv:
            N[:, piv] = (-R[:, free].T) % self.p
        return self.span(N)

    def stack(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        return np.vstack([A, B])

    def take_rows(self, A: np.ndarray, idx: Sequence[int]) -> np.ndarray:
        return A[list(idx)]

    def hcat(self, blocks: Sequence[np.ndarray]) -> np.ndarray:
        return np.hstack(blocks)

    def matmul(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        return matmul_mod(A, B, self.p)

    def is_zero(self, A: np.ndarray) -> bool:
        return not A.any()

    def basis_of(self, V: Span) -> np.ndarray:
        return V.basis

    def to_fractions(self, V: Span) -> list[list[Fraction]]:
        raise TypeError("modular spans have no rational representative")


class RationalField:
    """Row-space engine over Q with Fraction entries (exact, slower)."""

    exact = True
    label = "Q"

    def __repr__(self) -> str:
        return "RationalField()"

    def matrix(self, sparse_rows: Sequence[dict[int, int]], ncols: int) -> list[list[Fraction]]:
        out = []
        for row in sparse_rows:
            dense = [Fraction(0)] * ncols
            for j, v in row.items():
                dense[j] = as_scalar(v)
            out.append(dense)
        return out

    def rank(self, A: list[list[Fraction]]) -> int:
        if not A:
            return 0
        return rank_fraction_free(ExactMatrix(A))

    def span(self, A: list[list[Fraction]], ncols: int | None = None) -> Span:
        n = len(A[0]) if A else (ncols or 0)
        rows = [list(r) for r in A]
        piv = _rref_fraction_inplace(rows, n)
        return Span(rows[: len(piv)], piv, n)

    def whole(self, n: int) -> Span:
        return Span([[Fraction(int(i == j)) for j in range(n)] for i in range(n)], range(n), n)

    def quotient_map(self, V: Span) -> list[list[Fraction]]:
        n = V.ambient
        pivot_set = set(V.pivots)
        free = [c for c in range(n) if c not in pivot_set]
        Q = [[Fraction(0)] * len(free) for _ in range(n)]
        for k, c in enumerate(free):
            Q[c][k] = Fraction(1)
        for i, c in enumerate(V.pivots):
            Q[c] = [-V.basis[i][f] for f in free]
        return Q

    def left_kernel(self, K: list[list[Fraction]]) -> Span:
        n = len(K)
        width = len(K[0]) if K else 0
        if width == 0:
            return self.whole(n)
        KT = [[K[i][j] for i in range(n)] for j in range(width)]
        piv = _rref_fraction_inplace(KT, n)
        N = _nullspace_rows(KT[: len(piv)], piv, n)
        return self.span(N, n)

    def stack(self, A, B):
        return list(A) + list(B)

    def take_rows(self, A, idx):
        return [A[i] for i in idx]

    def hcat(self, blocks):
        return [sum((list(b[i]) for b in blocks), []) for i in range(len(blocks[0]))]

    def matmul(self, A, B):
        if not A or not B:
            return [[] for _ in A]
        width = len(B[0])
        return [
            [sum((row[k] * B[k][j] for k in range(len(row)) if row[k]), Fraction(0)) for j in range(width)]
            for row in A
        ]

    def is_zero(self, A) -> bool:
        return not any(v for row in A for v in row)

    def basis_of(self, V: Span) -> list[list[Fraction]]:
        return V.basis

    def to_fractions(self, V: Span) -> list[list[Fraction]]:
        return [list(r) for r in V.basis]
