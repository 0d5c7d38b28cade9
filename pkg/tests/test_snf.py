"""Smith normal form: exact identities against sympy as an independent oracle."""

import numpy as np
import pytest
import sympy
from sympy.matrices.normalforms import smith_normal_form as sympy_snf

from grouplin.snf import smith_normal_form


def as_np(mat):
    return np.array(mat, dtype=object)


def check_snf(matrix):
    rows = len(matrix)
    cols = len(matrix[0]) if rows else 0
    U, D, V = smith_normal_form(matrix)
    A = as_np(matrix)
    Um, Dm, Vm = as_np(U), as_np(D), as_np(V)
    assert Um.shape == (rows, rows)
    assert Vm.shape == (cols, cols)
    assert Dm.shape == (rows, cols)
    assert np.array_equal(Um @ A @ Vm, Dm)
    # off-diagonal zero, non-negative diagonal, divisibility chain
    diag = []
    for i in range(rows):
        for j in range(cols):
            if i != j:
                assert D[i][j] == 0
            else:
                assert D[i][j] >= 0
                diag.append(D[i][j])
    for a, b in zip(diag, diag[1:]):
        if a == 0:
            assert b == 0
        else:
            assert b % a == 0
    assert abs(sympy.Matrix(U).det()) == 1
    assert abs(sympy.Matrix(V).det()) == 1
    return diag


def test_identity():
    diag = check_snf([[1, 0], [0, 1]])
    assert diag == [1, 1]


def test_textbook_two_by_two():
    diag = check_snf([[2, 4], [6, 8]])
    assert diag == [2, 4]


def test_zero_matrix():
    assert check_snf([[0, 0], [0, 0], [0, 0]]) == [0, 0]


def test_single_entry():
    assert check_snf([[-6]]) == [6]


def test_rectangular():
    check_snf([[1, 2, 3], [4, 5, 6]])
    check_snf([[1, 2], [3, 4], [5, 6]])


def test_against_sympy_oracle():
    rng = np.random.default_rng(11)
    for _ in range(120):
        rows = int(rng.integers(1, 7))
        cols = int(rng.integers(1, 7))
        mat = [[int(x) for x in rng.integers(-20, 21, cols)] for _ in range(rows)]
        diag = check_snf(mat)
        expected = sympy_snf(sympy.Matrix(mat), domain=sympy.ZZ)
        exp_diag = [abs(int(expected[i, i])) for i in range(min(rows, cols))]
        # sympy may order or sign entries differently only when zero; the
        # divisibility-normalized absolute diagonals must agree exactly
        assert diag == exp_diag


def test_random_identities_up_to_ten():
    rng = np.random.default_rng(7)
    for _ in range(500):
        rows = int(rng.integers(1, 11))
        cols = int(rng.integers(1, 11))
        mat = [[int(x) for x in rng.integers(-20, 21, cols)] for _ in range(rows)]
        check_snf(mat)


def test_big_integers_stay_exact():
    big = 10**30
    diag = check_snf([[big, big + 2], [big - 2, big]])
    assert all(isinstance(d, int) for d in diag)
    # determinant magnitude is preserved: product of invariants = |det|
    det = big * big - (big + 2) * (big - 2)
    assert diag[0] * diag[1] == abs(det)


def test_malformed_rejected():
    with pytest.raises(ValueError):
        smith_normal_form([[1, 2], [3]])
