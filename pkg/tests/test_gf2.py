import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from adams.gf2 import GF2Matrix, kernel_basis, rref, solve, z4


def dense(entries):
    return GF2Matrix.from_dense(entries)


def test_rref_identity():
    m = dense([[1, 0], [0, 1]])
    r = rref(m)
    assert r.rank == 2
    assert r.pivots == (0, 1)
    assert [[r.matrix.get(i, j) for j in range(2)] for i in range(2)] == [[1, 0], [0, 1]]


def test_rref_dependent_rows():
    r = rref(dense([[1, 1], [1, 1]]))
    assert r.rank == 1
    assert [[r.matrix.get(i, j) for j in range(2)] for i in range(2)] == [[1, 1], [0, 0]]


def test_rref_zero():
    r = rref(dense([[0, 0], [0, 0]]))
    assert r.rank == 0
    assert r.pivots == ()


def test_solve_identity():
    assert solve(dense([[1, 0], [0, 1]]), [1, 0]) == [1, 0]


def test_solve_free_variable_zeroed():
    assert solve(dense([[1, 1]]), [1]) == [1, 0]


def test_solve_inconsistent():
    assert solve(dense([[0]]), [1]) is None


def test_solve_dimension_mismatch():
    with pytest.raises(ValueError):
        solve(dense([[1, 0]]), [1, 0])


def test_kernel_identity_empty():
    assert kernel_basis(dense([[1, 0], [0, 1]])) == []


def test_kernel_zero_matrix():
    basis = kernel_basis(dense([[0, 0, 0], [0, 0, 0], [0, 0, 0]]))
    assert basis == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]


def test_kernel_sum():
    assert kernel_basis(dense([[1, 1]])) == [[1, 1]]


@st.composite
def random_matrix(draw):
    rows = draw(st.integers(1, 8))
    cols = draw(st.integers(1, 70))  # crosses the 64-bit word boundary
    ent = draw(st.lists(st.lists(st.integers(0, 1), min_size=cols, max_size=cols),
                        min_size=rows, max_size=rows))
    return dense(ent)


@settings(max_examples=60, deadline=None)
@given(random_matrix(), st.data())
def test_solve_solution_is_exact(m, data):
    x = data.draw(st.lists(st.integers(0, 1), min_size=m.cols, max_size=m.cols))
    b = m.mul_vec(x)
    sol = solve(m, b)
    assert sol is not None
    assert m.mul_vec(sol) == b


@settings(max_examples=60, deadline=None)
@given(random_matrix())
def test_kernel_vectors_are_killed(m):
    basis = kernel_basis(m)
    assert len(basis) == m.cols - rref(m).rank
    for v in basis:
        assert m.mul_vec(v) == [0] * m.rows


@settings(max_examples=40, deadline=None)
@given(random_matrix())
def test_rref_idempotent(m):
    r1 = rref(m)
    r2 = rref(r1.matrix)
    assert np.array_equal(r1.matrix.words, r2.matrix.words)
    assert r1.pivots == r2.pivots


def test_z4():
    assert z4(2 * 2) == 0
    assert z4(-1) == 3
    assert [z4(v) for v in range(4)] == [0, 1, 2, 3]
