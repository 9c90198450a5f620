import random
from fractions import Fraction

import pytest

from bimanin.linalg import (
    LinalgError, SpanSolver, SubspaceBasis, hnf, integer_kernel, kernel_basis,
    lattice_equal, rank, row_space, rref, span_equal, sum_spaces,
)

F = Fraction


def test_kernel_examples():
    assert kernel_basis([[1]], 1).dim == 0
    b = kernel_basis([[1, -1]], 2)
    assert b.rows == ((F(1), F(1)),)
    # Matrix of 1 + S acting on V_2 in the monomial basis {1, X, X^2}.
    one_plus_s = [[1, 0, 1], [0, 0, 0], [1, 0, 1]]
    k = kernel_basis(one_plus_s, 3)
    assert k.dim == 2
    assert k.rows == ((F(1), F(0), F(-1)), (F(0), F(1), F(0)))


def test_rank_examples():
    assert rank([[0] * 3] * 3) == 0
    assert rank([[int(i == j) for j in range(4)] for i in range(4)]) == 4
    assert rank([[1, 0, 1], [0, 0, 0], [1, 0, 1]]) == 1


def test_kernel_satisfies_equations_and_dimension():
    rng = random.Random(1)
    for _ in range(20):
        rows = [[rng.randrange(-9, 10) for _ in range(6)] for _ in range(4)]
        k = kernel_basis(rows, 6)
        for v in k.rows:
            for row in rows:
                assert sum(F(a) * b for a, b in zip(row, v)) == 0
        assert rank(rows) + k.dim == 6


def test_kernel_is_canonical():
    rows_a = [[2, 4, -2], [1, 1, 1]]
    rows_b = [[1, 2, -1], [0, -1, 2], [1, 0, 3]]  # same kernel, messier rows
    assert rank(rows_b) == 2
    assert kernel_basis(rows_a, 3) == kernel_basis(rows_b, 3)


def test_span_equal():
    a = row_space([[1, 0]], 2)
    b = row_space([[2, 0]], 2)
    c = row_space([[0, 1]], 2)
    assert span_equal(a, b)
    assert not span_equal(a, c)
    with pytest.raises(LinalgError):
        span_equal(a, row_space([[1, 0, 0]], 3))


def test_subspace_contains():
    b = row_space([[1, 0, 1], [0, 1, 2]], 3)
    assert b.contains([2, 3, 8])
    assert not b.contains([0, 0, 1])


def test_sum_spaces():
    a = row_space([[1, 0, 0]], 3)
    b = row_space([[0, 1, 0]], 3)
    s = sum_spaces(3, a, b, [[1, 1, 0]])
    assert s.dim == 2


def test_rref_fraction_entries():
    reduced, piv = rref([[F(1, 2), F(1, 3)], [F(1, 4), F(1, 6)]])
    assert piv == (0,)
    assert reduced[0] == [F(1), F(2, 3)]


def test_modular_agrees_with_bareiss():
    rng = random.Random(42)
    for _ in range(100):
        rows = [[rng.randrange(-10**6, 10**6 + 1) for _ in range(20)]
                for _ in range(20)]
        assert rank(rows, method="modular") == rank(rows, method="bareiss")


def test_modular_rref_matches_exact_values():
    rng = random.Random(9)
    for _ in range(10):
        rows = [[rng.randrange(-50, 51) for _ in range(8)] for _ in range(5)]
        exact = rref(rows, method="bareiss")
        modular = rref(rows, method="modular")
        assert [list(map(F, r)) for r in exact[0]] == \
               [list(map(F, r)) for r in modular[0]]
        assert exact[1] == modular[1]


def test_span_solver():
    solver = SpanSolver([[1, 2, 0], [0, 1, 1]])
    coords = solver.coordinates([2, 5, 1])
    assert coords == [F(2), F(1)]
    assert solver.coordinates([0, 0, 1]) is None


# ----------------------------------------------------------------- lattices

def test_hnf_canonical():
    assert hnf([[2, 0], [0, 2], [2, 2]]) == ((2, 0), (0, 2))
    assert hnf([[0, 0]]) == ()
    assert hnf([[-1, 2]]) == ((1, -2),)


def test_lattice_equal_examples():
    assert lattice_equal([[2, 0], [0, 2]], [[2, 0], [0, 2], [2, 2]])
    assert not lattice_equal([[1, 0]], [[2, 0]])
    assert lattice_equal([[1, 2], [0, 3]], [[1, -1], [0, 3]])


def test_lattice_equal_reflexive_symmetric_and_implies_span():
    rng = random.Random(7)
    for _ in range(20):
        rows = [[rng.randrange(-5, 6) for _ in range(4)] for _ in range(3)]
        other = [[a + b for a, b in zip(rows[0], rows[1])], rows[1], rows[2]]
        assert lattice_equal(rows, rows)
        assert lattice_equal(rows, other) == lattice_equal(other, rows)
        if lattice_equal(rows, other):
            assert span_equal(row_space(rows, 4), row_space(other, 4))


def test_integer_kernel_is_saturated():
    rows = [[2, 4, 6], [0, 0, 5]]
    k = integer_kernel(rows, 3)
    assert k == [(2, -1, 0)] or k == [(-2, 1, 0)]
    # x = (1, -1/2, 0) is not integral; the primitive vector must be there.
    assert lattice_equal(k, [(2, -1, 0)])


def test_integer_kernel_no_constraints():
    k = integer_kernel([], 3)
    assert lattice_equal(k, [[1, 0, 0], [0, 1, 0], [0, 0, 1]])
