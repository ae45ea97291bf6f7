from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from hodgemicro.corelin import (
    EchelonSpace,
    IntegerEchelon,
    Matrix,
    compose,
    kernel_basis,
    rank,
    rational_str,
    rref,
    sparse_rank,
    to_rational,
)


def small_matrices(max_dim=6):
    return st.integers(0, max_dim).flatmap(lambda r: st.integers(0, max_dim).flatmap(
        lambda c: st.lists(
            st.lists(st.fractions(min_value=-3, max_value=3, max_denominator=3),
                     min_size=c, max_size=c),
            min_size=r, max_size=r).map(lambda rows: Matrix.from_rows(rows, c))))


def test_rank_examples():
    assert rank(Matrix.zeros(0, 0)) == 0
    assert rank(Matrix.identity(3)) == 3
    assert rank(Matrix.from_rows([[1, 2], [2, 4]])) == 1


def test_kernel_examples():
    assert kernel_basis(Matrix.identity(3)).cols == 0
    assert kernel_basis(Matrix.zeros(2, 3)).cols == 3
    k = kernel_basis(Matrix.from_rows([[1, 1]]))
    assert k.cols == 1
    assert k[0, 0] == -k[1, 0] != 0


def test_compose_examples():
    m = Matrix.from_rows([[1, 2], [3, 4]])
    assert compose(Matrix.identity(2), m) == m
    assert compose(m, Matrix.zeros(2, 2)).is_zero()
    j2 = Matrix.from_rows([[0, 0], [1, 0]])
    assert compose(j2, j2).is_zero()
    with pytest.raises(ValueError):
        compose(Matrix.zeros(2, 3), Matrix.zeros(2, 3))


def test_shape_validation():
    with pytest.raises(ValueError):
        Matrix(2, 2, (Fraction(1),))
    with pytest.raises(ValueError):
        Matrix.from_rows([[1, 2], [3]])


def test_rational_serialization():
    assert rational_str(Fraction(3, 6)) == "1/2"
    assert rational_str(Fraction(-4, 2)) == "-2"
    assert to_rational(" 2/4 ") == Fraction(1, 2)
    assert Matrix.from_rows([["1/2", 0]]).to_json() == [["1/2", "0"]]


def test_rref_pivots_are_leftmost():
    rows, pivots = rref(Matrix.from_rows([[0, 2, 4], [0, 1, 2], [1, 0, 0]]))
    assert pivots == [0, 1]
    assert rows[1] == [0, 1, 2]


@settings(max_examples=60, deadline=None)
@given(small_matrices())
def test_rank_transpose_and_nullity(m):
    assert rank(m) == rank(m.transpose())
    k = kernel_basis(m)
    assert m.cols == rank(m) + k.cols
    if k.cols:
        assert compose(m, k).is_zero()


@settings(max_examples=60, deadline=None)
@given(small_matrices())
def test_sparse_rank_agrees_with_rref(m):
    _, pivots = rref(m)
    rows = [{j: v for j, v in enumerate(m.row(i)) if v} for i in range(m.rows)]
    assert sparse_rank(rows) == len(pivots)


@settings(max_examples=40, deadline=None)
@given(small_matrices(4), small_matrices(4), small_matrices(4))
def test_compose_associative(a, b, c):
    if a.cols == b.rows and b.cols == c.rows:
        assert (a @ b) @ c == a @ (b @ c)


def test_echelon_spaces():
    space = EchelonSpace()
    assert space.add({0: 1, 1: 1})
    assert not space.add({0: 2, 1: 2})
    assert space.reduce({0: 1, 1: 1}) == {}
    ints = IntegerEchelon()
    assert ints.add({0: 2, 1: 4})
    assert ints.rows() == [{0: 1, 1: 2}]
    assert not ints.add({0: 3, 1: 6})
    assert ints.add({1: 5})
    assert len(ints) == 2
