from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pointedchains.linalg import (
    Field,
    NoSolution,
    column_basis,
    inverse,
    is_invertible,
    kernel,
    left_inverse,
    quotient_basis,
    rank,
    rref,
    solve,
)

FIELDS = [Field(7, minimum=2), Field(), Field.rationals()]


def matrices(max_rows=5, max_cols=5):
    return st.integers(1, max_rows).flatmap(
        lambda m: st.integers(1, max_cols).flatmap(
            lambda n: st.lists(st.integers(-4, 4), min_size=m * n, max_size=m * n).map(
                lambda xs: np.array(xs, dtype=object).reshape(m, n))))


@pytest.mark.parametrize("F", FIELDS, ids=str)
@given(a=matrices())
@settings(max_examples=60, deadline=None)
def test_rank_nullity(F, a):
    A = F.array(a)
    K = kernel(F, A)
    assert rank(F, A) + K.shape[1] == A.shape[1]
    assert F.is_zero(F.matmul(A, K))
    assert rank(F, K) == K.shape[1]


@pytest.mark.parametrize("F", FIELDS, ids=str)
@given(a=matrices(), data=st.data())
@settings(max_examples=60, deadline=None)
def test_solve_consistent_systems(F, a, data):
    A = F.array(a)
    x0 = F.array(np.array(data.draw(st.lists(st.integers(-3, 3), min_size=A.shape[1],
                                             max_size=A.shape[1])), dtype=object))
    b = F.matmul(A, x0.reshape(-1, 1))[:, 0]
    x, K = solve(F, A, b)
    assert F.equal(F.matmul(A, x.reshape(-1, 1))[:, 0], b)
    assert K.shape[1] == A.shape[1] - rank(F, A)


@pytest.mark.parametrize("F", FIELDS, ids=str)
@given(a=matrices())
@settings(max_examples=60, deadline=None)
def test_rref_is_idempotent(F, a):
    R, piv = rref(F, F.array(a))
    R2, piv2 = rref(F, R)
    assert piv == piv2
    assert F.equal(R, R2)


@pytest.mark.parametrize("F", FIELDS, ids=str)
@given(a=matrices(6, 4))
@settings(max_examples=60, deadline=None)
def test_quotient_basis_splits(F, a):
    A = F.array(a)
    d = A.shape[0]
    pi, sigma = quotient_basis(F, d, A)
    q = pi.shape[0]
    assert q == d - rank(F, A)
    assert F.equal(F.matmul(pi, sigma), F.eye(q))
    assert F.is_zero(F.matmul(pi, A))


@pytest.mark.parametrize("F", FIELDS, ids=str)
@given(a=matrices(5, 5))
@settings(max_examples=60, deadline=None)
def test_column_basis_and_left_inverse(F, a):
    A = F.array(a)
    B = column_basis(F, A)
    assert B.shape[1] == rank(F, A) == rank(F, np.concatenate([B, A], axis=1))
    L = left_inverse(F, B)
    assert F.equal(F.matmul(L, B), F.eye(B.shape[1]))


@pytest.mark.parametrize("F", FIELDS, ids=str)
@given(a=matrices(4, 4).filter(lambda m: m.shape[0] == m.shape[1]))
@settings(max_examples=60, deadline=None)
def test_inverse(F, a):
    A = F.array(a)
    if is_invertible(F, A):
        assert F.equal(F.matmul(A, inverse(F, A)), F.eye(A.shape[0]))
    else:
        with pytest.raises(NoSolution):
            inverse(F, A)


def test_inconsistent_system():
    F = Field()
    with pytest.raises(NoSolution):
        solve(F, F.array([[1, 1], [1, 1]]), F.array([1, 2]))


def test_rationals_are_exact():
    F = Field.rationals()
    x, _ = solve(F, F.array([[3]]), F.array([1]))
    assert x[0] == Fraction(1, 3)


@pytest.mark.parametrize("p", [1, 4, 9, 2**31 + 11])
def test_bad_moduli(p):
    with pytest.raises(ValueError):
        Field(p, minimum=2)


def test_small_prime_guard():
    with pytest.raises(ValueError):
        Field(5)
    assert Field(5, minimum=2).p == 5
