from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from curvedefect.exact_linalg import (
    ExactMatrix,
    PrimeField,
    RationalField,
    as_scalar,
    kernel_basis,
    matmul_mod,
    preimage_kernel,
    random_primes,
    rank,
    rank_mod,
    rank_modular,
    rref,
)

small_ints = st.integers(min_value=-6, max_value=6)


@st.composite
def matrices(draw, max_rows=6, max_cols=6):
    r = draw(st.integers(0, max_rows))
    c = draw(st.integers(0, max_cols))
    rows = draw(st.lists(st.lists(small_ints, min_size=c, max_size=c), min_size=r, max_size=r))
    return ExactMatrix(rows) if r else ExactMatrix.zeros(0, c)


def sympy_rank(M: ExactMatrix) -> int:
    rows, cols = M.shape
    if rows == 0 or cols == 0:
        return 0
    return sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in row] for row in M.entries]).rank()


def test_scalar_rejects_float():
    with pytest.raises(TypeError):
        as_scalar(0.5)
    assert as_scalar(3) == Fraction(3)
    with pytest.raises(TypeError):
        as_scalar("3/4")


@pytest.mark.parametrize("M, expected", [
    (ExactMatrix.zeros(0, 0), 0),
    (ExactMatrix.identity(3), 3),
    (ExactMatrix([[1, 2], [2, 4], [3, 6]]), 1),
])
def test_rank_examples(M, expected):
    assert rank(M) == expected


def test_kernel_examples():
    assert kernel_basis(ExactMatrix.identity(2)).shape[1] == 0
    K = kernel_basis(ExactMatrix.zeros(2, 3))
    assert K.shape == (3, 3) and rank(K) == 3
    M = ExactMatrix([[1, 1, 0]])
    K = kernel_basis(M)
    assert K.shape[1] == 2
    assert (M @ K).is_zero()
    # (1,-1,0) and (0,0,1) lie in the span
    target = ExactMatrix.from_columns([(1, -1, 0), (0, 0, 1)], 3)
    assert rank(K.hstack(target)) == 2


def test_preimage_examples():
    I2 = ExactMatrix.identity(2)
    whole = preimage_kernel(I2, ExactMatrix.identity(2))
    assert whole.shape[1] == 2
    M = ExactMatrix([[1, 2, 0], [0, 0, 1]])
    empty = ExactMatrix.zeros(2, 0)
    assert preimage_kernel(M, empty) == kernel_basis(M)
    P = preimage_kernel(I2, ExactMatrix.from_columns([(1, 0)], 2))
    assert P.shape[1] == 1
    assert P.column(0)[1] == 0 and P.column(0)[0] != 0


def test_preimage_dimension_mismatch():
    with pytest.raises(ValueError):
        preimage_kernel(ExactMatrix.identity(2), ExactMatrix.identity(3))


def test_rref_pivots():
    R, piv = rref(ExactMatrix([[2, 4, 1], [1, 2, 1]]))
    assert piv == [0, 2]
    assert R[0][:3] == [1, 2, 0]


def test_random_primes_window_and_determinism():
    ps = random_primes(2, seed=7)
    assert ps == random_primes(2, seed=7)
    assert len(set(ps)) == 2
    assert all(2 ** 30 < p < 2 ** 31 and sympy.isprime(p) for p in ps)


def test_matmul_mod_no_overflow():
    p = random_primes(1, seed=3)[0]
    rng = np.random.default_rng(0)
    A = rng.integers(0, p, size=(7, 9), dtype=np.int64)
    B = rng.integers(0, p, size=(9, 5), dtype=np.int64)
    expected = (A.astype(object) @ B.astype(object)) % p
    assert (matmul_mod(A, B, p).astype(object) == expected).all()


def test_bad_prime_lowers_rank():
    # det = 7, so rank drops modulo 7 only
    M = ExactMatrix([[1, 2], [3, 13]])
    assert rank_mod(M, 7) == 1
    assert rank_modular(M, [7, 11]) == 2 == rank(M)


@settings(max_examples=80, deadline=None)
@given(matrices())
def test_rank_agrees_with_oracle_and_modular(M):
    r = rank(M)
    assert r == sympy_rank(M)
    if M.shape[0] and M.shape[1]:
        assert rank_modular(M) == r


@settings(max_examples=80, deadline=None)
@given(matrices())
def test_rank_nullity(M):
    K = kernel_basis(M)
    assert rank(M) + K.shape[1] == M.shape[1]
    assert K.shape[1] == 0 or rank(K) == K.shape[1]
    if K.shape[1] and M.shape[0]:
        assert (M @ K).is_zero()


@settings(max_examples=40, deadline=None)
@given(matrices(max_rows=4, max_cols=4), st.integers(0, 3))
def test_preimage_property(M, nv):
    rows, cols = M.shape
    if rows == 0:
        return
    V = ExactMatrix.identity(rows)
    V = ExactMatrix.from_columns(V.columns()[:min(nv, rows)], rows)
    P = preimage_kernel(M, V)
    image = M @ P if P.shape[1] else ExactMatrix.zeros(rows, 0)
    # every image column lies in span(V)
    for col in image.columns():
        assert all(x == 0 for x in col[V.shape[1]:])
    # and the preimage is as large as it can be: dim = nullity of (M projected away from V)
    proj = ExactMatrix([list(r) for r in M.entries[V.shape[1]:]]) if rows > V.shape[1] else ExactMatrix.zeros(0, cols)
    assert P.shape[1] == cols - sympy_rank(proj)


@pytest.mark.parametrize("engine", [PrimeField(random_primes(1, seed=1)[0]), RationalField()],
                         ids=["modular", "rational"])
def test_engines_agree_on_left_kernel(engine):
    rows = [{0: 1, 1: 1}, {1: 1, 2: 1}, {0: 1, 2: -1}]
    A = engine.matrix(rows, 3)
    assert engine.rank(A) == 2
    L = engine.left_kernel(A)
    assert L.dim == 1
    assert engine.span(A).dim == 2
    Q = engine.quotient_map(engine.span(A))
    assert engine.is_zero(engine.matmul(A, Q))
