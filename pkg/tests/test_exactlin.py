from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from htcpkit.exactlin import QQ, Field, Mat, inverse, kernel_basis, rank, solve

GF5 = Field(5)


def test_rank_and_kernel():
    A = Mat([[1, 2, 3], [2, 4, 6], [1, 0, 1]])
    assert rank(A) == 2
    K = kernel_basis(A)
    assert K.ncols == 1
    assert (A @ K).is_zero()


def test_inverse_and_singular():
    A = Mat([[2, 1], [1, 1]])
    B = inverse(A)
    assert A @ B == Mat.identity(2)
    assert inverse(Mat([[1, 2], [2, 4]])) is None


def test_solve_consistent_and_inconsistent():
    A = Mat([[1, 1], [1, -1]])
    x = solve(A, [3, 1])
    assert x == [2, 1]
    assert solve(Mat([[1, 1], [1, 1]]), [1, 2]) is None


def test_exact_fractions():
    A = Mat([[3, 0], [0, 7]])
    assert inverse(A).rows[1][1] == Fraction(1, 7)


def test_prime_field():
    a = GF5(3)
    assert a * GF5(2) == GF5(1)
    assert rank(Mat([[1, 2], [3, 1]], field=GF5)) == 1  # 3*2 = 1 mod 5
    with pytest.raises(ValueError):
        Field(6)


small = st.integers(-4, 4)


def matrices(n, m):
    return st.lists(st.lists(small, min_size=m, max_size=m), min_size=n, max_size=n)


@settings(max_examples=60, deadline=None, derandomize=True)
@given(st.integers(1, 4).flatmap(lambda n: st.tuples(st.just(n), st.integers(1, 4))).flatmap(
    lambda nm: matrices(*nm)))
def test_rank_nullity(rows):
    A = Mat(rows)
    assert rank(A) + kernel_basis(A).ncols == A.ncols
    assert rank(A) == rank(A.transpose())


@settings(max_examples=60, deadline=None, derandomize=True)
@given(st.integers(1, 4).flatmap(lambda n: matrices(n, n)))
def test_inverse_property(rows):
    A = Mat(rows)
    B = inverse(A)
    if rank(A) == A.nrows:
        assert B is not None and A @ B == Mat.identity(A.nrows) and B @ A == Mat.identity(A.nrows)
    else:
        assert B is None


@settings(max_examples=40, deadline=None, derandomize=True)
@given(matrices(3, 3), st.lists(small, min_size=3, max_size=3))
def test_solve_is_a_solution(rows, x0):
    A = Mat(rows)
    b = (A @ Mat([[v] for v in x0])).column(0)
    x = solve(A, b)
    assert x is not None
    assert (A @ Mat([[v] for v in x])).column(0) == b


def test_qq_is_rationals():
    assert QQ(1) / QQ(3) == Fraction(1, 3)
