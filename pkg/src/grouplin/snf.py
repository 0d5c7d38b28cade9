"""Smith normal form over the integers with full transform tracking.

All arithmetic uses Python's arbitrary-precision ints: intermediate entries
can exceed any fixed word size even for small matrices, and correctness is
worth more than speed at the sizes handled here.
"""

from __future__ import annotations


def _identity(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def smith_normal_form(matrix):
    """Return (U, D, V) with U*A*V = D, U and V unimodular, and D diagonal.

    The diagonal is non-negative and satisfies D[0][0] | D[1][1] | ...
    Matrices are plain lists of lists of ints. Pivots are chosen in the
    leftmost column holding a nonzero entry, taking the entry of minimal
    absolute value there.
    """
    D = [[int(x) for x in row] for row in matrix]
    m = len(D)
    n = len(D[0]) if m else 0
    if any(len(row) != n for row in D):
        raise ValueError("matrix rows must all have the same length")
    U = _identity(m)
    V = _identity(n)
    t = 0
    while t < min(m, n):
        pivot = _find_pivot(D, t, m, n)
        if pivot is None:
            break
        pi, pj = pivot
        _swap_rows(D, U, t, pi)
        _swap_cols(D, V, t, pj)
        while True:
            _clear_column(D, U, t, m)
            if _clear_row(D, V, t, n):
                continue
            if _column_is_clear(D, t, m):
                offender = _find_nondivisible(D, t, m, n)
                if offender is None:
                    break
                _add_row(D, U, t, offender)
            # a row or column entry reappeared, loop again
        if D[t][t] < 0:
            _negate_row(D, U, t)
        t += 1
    return U, D, V


def _find_pivot(D, t, m, n):
    for j in range(t, n):
        best = None
        for i in range(t, m):
            v = D[i][j]
            if v != 0 and (best is None or abs(v) < abs(D[best][j])):
                best = i
        if best is not None:
            return best, j
    return None


def _swap_rows(D, U, a, b):
    if a != b:
        D[a], D[b] = D[b], D[a]
        U[a], U[b] = U[b], U[a]


def _swap_cols(D, V, a, b):
    if a != b:
        for row in D:
            row[a], row[b] = row[b], row[a]
        for row in V:
            row[a], row[b] = row[b], row[a]


def _negate_row(D, U, i):
    D[i] = [-x for x in D[i]]
    U[i] = [-x for x in U[i]]


def _clear_column(D, U, t, m):
    """Zero the entries below the pivot by Euclidean row steps."""
    while True:
        best = None
        for i in range(t + 1, m):
            if D[i][t] != 0 and (best is None or abs(D[i][t]) < abs(D[best][t])):
                best = i
        if best is None:
            return
        if abs(D[best][t]) < abs(D[t][t]) or D[t][t] == 0:
            _swap_rows(D, U, t, best)
            continue
        for i in range(t + 1, m):
            if D[i][t] != 0:
                q = D[i][t] // D[t][t]
                _submul_row(D, U, i, t, q)


def _clear_row(D, V, t, n):
    """Zero the entries right of the pivot by Euclidean column steps.

    Returns True if column entries below the pivot may have been disturbed.
    """
    disturbed = False
    while True:
        best = None
        for j in range(t + 1, n):
            if D[t][j] != 0 and (best is None or abs(D[t][j]) < abs(D[t][best])):
                best = j
        if best is None:
            return disturbed
        if abs(D[t][best]) < abs(D[t][t]) or D[t][t] == 0:
            _swap_cols(D, V, t, best)
            disturbed = True
            continue
        for j in range(t + 1, n):
            if D[t][j] != 0:
                q = D[t][j] // D[t][t]
                _submul_col(D, V, j, t, q)
                if D[t][j] != 0:
                    disturbed = True


def _submul_row(D, U, i, t, q):
    if q:
        D[i] = [a - q * b for a, b in zip(D[i], D[t])]
        U[i] = [a - q * b for a, b in zip(U[i], U[t])]


def _submul_col(D, V, j, t, q):
    if q:
        for row in D:
            row[j] -= q * row[t]
        for row in V:
            row[j] -= q * row[t]


def _column_is_clear(D, t, m):
    return all(D[i][t] == 0 for i in range(t + 1, m))


def _find_nondivisible(D, t, m, n):
    """Row whose block entries are not multiples of the pivot, if any."""
    p = D[t][t]
    if p == 0:
        return None
    for i in range(t + 1, m):
        for j in range(t + 1, n):
            if D[i][j] % p != 0:
                return i
    return None


def _add_row(D, U, t, i):
    D[t] = [a + b for a, b in zip(D[t], D[i])]
    U[t] = [a + b for a, b in zip(U[t], U[i])]
