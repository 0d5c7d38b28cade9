"""Linear equation systems over a finite abelian group Q = Z_d1 x ... x Z_dm.

Integer coefficient matrices act componentwise on the cyclic factors, so a
system splits into one congruence system A x = b (mod d) per factor. The
default engine eliminates modulo d directly and is vectorized; whenever a
column offers no pivot coprime to d it hands the whole system to the Smith
normal form route, which is fully general.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

import numpy as np

from .snf import smith_normal_form


class MalformedSystemError(ValueError):
    pass


def _as_matrix(data, width):
    # reshape(-1, width) cannot infer the row count when width is 0, so keep
    # an explicit row count for already-2-D input
    arr = np.array(data, dtype=np.int64)
    if arr.ndim == 2 and arr.shape[1] == width:
        return arr
    if arr.size == 0:
        rows = arr.shape[0] if arr.ndim == 2 else 0
        return arr.reshape(rows, width)
    return arr.reshape(-1, width)


@dataclass(frozen=True, eq=False)
class AbelianSystem:
    """Equations sum_i coeff[e][i] * x_i = rhs[e] over Z_d1 x ... x Z_dm."""

    num_vars: int
    invariants: tuple
    coeff: np.ndarray
    rhs: np.ndarray

    def __post_init__(self):
        if self.num_vars < 0:
            raise MalformedSystemError("num_vars must be non-negative")
        invariants = tuple(int(d) for d in self.invariants)
        if any(d < 1 for d in invariants):
            raise MalformedSystemError("cyclic factor orders must be positive")
        coeff = _as_matrix(self.coeff, self.num_vars)
        rhs = _as_matrix(self.rhs, len(invariants))
        if coeff.shape[0] != rhs.shape[0]:
            raise MalformedSystemError(
                f"{coeff.shape[0]} coefficient rows but {rhs.shape[0]} right-hand sides"
            )
        if coeff.size and coeff.min() < 0:
            raise MalformedSystemError("coefficients must be non-negative multiplicities")
        if invariants:
            rhs = rhs % np.array(invariants, dtype=np.int64)
        coeff.flags.writeable = False
        rhs.flags.writeable = False
        object.__setattr__(self, "invariants", invariants)
        object.__setattr__(self, "coeff", coeff)
        object.__setattr__(self, "rhs", rhs)

    @property
    def num_equations(self):
        return self.coeff.shape[0]


@dataclass(frozen=True)
class AbelianSolution:
    """A satisfying assignment, one tuple of factor components per variable.

    free_dims[f] counts the randomized degrees of freedom used for factor f
    (free columns plus diagonal congruences with several solutions).
    """

    assignment: tuple
    free_dims: tuple


def verify(system, assignment):
    """True iff every equation holds componentwise mod the factor orders."""
    if len(assignment) != system.num_vars:
        return False
    if not system.invariants:
        return True
    vals = np.asarray([list(v) for v in assignment], dtype=np.int64).reshape(
        system.num_vars, len(system.invariants)
    )
    mods = np.array(system.invariants, dtype=np.int64)
    lhs = (system.coeff @ vals) % mods
    return bool(np.array_equal(lhs, system.rhs))


def solve(system, seed):
    """Solve the system, or return None when it is unsatisfiable.

    Free parameters are drawn from the seeded RNG so repeated calls explore
    the solution space. Deterministic for a fixed seed.
    """
    rng = np.random.default_rng(seed)
    per_factor = []
    free_dims = []
    for f, d in enumerate(system.invariants):
        out = _solve_single_modulus(system.coeff, system.rhs[:, f], d, rng)
        if out == "unsat":
            return None
        if out == "nonunit":
            return solve_via_snf(system, seed)
        x, free = out
        per_factor.append(x)
        free_dims.append(free)
    return _combine(system, per_factor, free_dims)


def solve_via_snf(system, seed):
    """Reference engine: diagonalize the coefficient matrix once with Smith
    normal form and solve each diagonal congruence per cyclic factor."""
    rng = np.random.default_rng(seed)
    a_rows = [[int(x) for x in row] for row in system.coeff]
    m_eq = len(a_rows)
    n = system.num_vars
    if m_eq == 0:
        per_factor = [
            np.array([int(rng.integers(0, d)) for _ in range(n)], dtype=np.int64)
            for d in system.invariants
        ]
        return _combine(system, per_factor, tuple(n for _ in system.invariants))
    u_mat, d_mat, v_mat = smith_normal_form(a_rows)
    diag = [d_mat[j][j] for j in range(min(m_eq, n))]
    per_factor = []
    free_dims = []
    for f, d in enumerate(system.invariants):
        b = [int(x) for x in system.rhs[:, f]]
        c = [sum(u_mat[j][i] * b[i] for i in range(m_eq)) % d for j in range(m_eq)]
        t = [0] * n
        free = 0
        ok = True
        for j in range(m_eq):
            dj = diag[j] if j < len(diag) else 0
            if j >= n:
                if c[j] != 0:
                    ok = False
                    break
                continue
            g = gcd(dj, d)
            if g == 0:
                g = d
            if c[j] % g != 0:
                ok = False
                break
            step = d // g
            base = (pow(dj // g, -1, step) * (c[j] // g)) % step if step > 1 else 0
            if g > 1:
                t[j] = base + step * int(rng.integers(0, g))
                free += 1
            else:
                t[j] = base
        if not ok:
            return None
        for j in range(m_eq, n):
            t[j] = int(rng.integers(0, d))
            free += 1
        x = [sum(v_mat[i][j] * t[j] for j in range(n)) % d for i in range(n)]
        per_factor.append(np.array(x, dtype=np.int64))
        free_dims.append(free)
    return _combine(system, per_factor, free_dims)


def _solve_single_modulus(coeff, b_col, d, rng):
    """Row reduce A x = b (mod d) with pivots coprime to d.

    Returns (assignment, free_count), or "unsat", or "nonunit" when some
    column offers no coprime pivot and the SNF route must take over.
    """
    A = coeff % d
    b = b_col % d
    m, n = A.shape
    r = 0
    pivots = []
    for col in range(n):
        if r == m:
            break
        nz = np.flatnonzero(A[r:, col])
        pick = -1
        for off in nz:
            if gcd(int(A[r + off, col]), d) == 1:
                pick = r + int(off)
                break
        if pick == -1:
            if nz.size:
                return "nonunit"
            continue
        if pick != r:
            A[[r, pick]] = A[[pick, r]]
            b[[r, pick]] = b[[pick, r]]
        inv = pow(int(A[r, col]), -1, d)
        A[r] = A[r] * inv % d
        b[r] = b[r] * inv % d
        fac = A[r + 1 :, col].copy()
        A[r + 1 :] = (A[r + 1 :] - fac[:, None] * A[r]) % d
        b[r + 1 :] = (b[r + 1 :] - fac * b[r]) % d
        pivots.append((r, col))
        r += 1
    if r < m and np.any(b[r:] != 0):
        return "unsat"
    x = np.zeros(n, dtype=np.int64)
    pivot_cols = {col for _, col in pivots}
    for col in range(n):
        if col not in pivot_cols:
            x[col] = int(rng.integers(0, d))
    for row, col in reversed(pivots):
        x[col] = int((b[row] - A[row] @ x) % d)
    return x, n - len(pivots)


def _combine(system, per_factor, free_dims):
    if system.invariants:
        assignment = tuple(
            tuple(int(per_factor[f][i]) for f in range(len(system.invariants)))
            for i in range(system.num_vars)
        )
    else:
        assignment = tuple(() for _ in range(system.num_vars))
    return AbelianSolution(assignment=assignment, free_dims=tuple(free_dims))
