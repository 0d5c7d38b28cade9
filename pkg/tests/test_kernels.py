"""Kernel backends: numpy and numba must agree bit for bit, and both must
match slow pure-Python oracles."""

import numpy as np
import pytest

from grouplin import _kernels
from grouplin.groups import cyclic, dihedral, make_group

HAVE_NUMBA = "numba" in _kernels.IMPLEMENTATIONS
BACKENDS = sorted(_kernels.IMPLEMENTATIONS)


def random_tables(rng):
    kind = rng.integers(0, 3)
    if kind == 0:
        return cyclic(int(rng.integers(2, 9))).op_table
    if kind == 1:
        return dihedral(int(rng.integers(2, 5))).op_table
    return make_group("Q8").op_table


def oracle_count(op, values, shifts, vars_, s_mask):
    count = 0
    for c in range(shifts.shape[0]):
        acc = None
        for j in range(shifts.shape[1]):
            term = op[shifts[c, j], values[vars_[c, j]]]
            acc = term if acc is None else op[acc, term]
        count += bool(s_mask[acc])
    return count


def oracle_closure(op, seed_mask):
    order = op.shape[0]
    identity = next(e for e in range(order) if all(op[e, b] == b for b in range(order)))
    members = {identity} | {int(g) for g in np.flatnonzero(seed_mask)}
    while True:
        new = {int(op[a, b]) for a in members for b in members}
        if new <= members:
            break
        members |= new
    mask = np.zeros(order, dtype=np.bool_)
    mask[sorted(members)] = True
    return mask


def oracle_brute(op, n_vars, shifts, vars_, s_mask):
    order = op.shape[0]
    best_count, best_rank = -1, 0
    for rank in range(order**n_vars):
        digits = []
        r = rank
        for _ in range(n_vars):
            digits.append(r % order)
            r //= order
        values = np.array(digits[::-1], dtype=np.int64)
        count = oracle_count(op, values, shifts, vars_, s_mask)
        if count > best_count:
            best_count, best_rank = count, rank
    return best_count, best_rank


def random_constraints(rng, order, n, m, k):
    shifts = rng.integers(0, order, (m, k)).astype(np.int64)
    vars_ = rng.integers(0, n, (m, k)).astype(np.int64)
    s_mask = np.zeros(order, dtype=np.bool_)
    s_mask[rng.integers(0, order, int(rng.integers(1, order + 1)))] = True
    if not s_mask.any():
        s_mask[0] = True
    return shifts, vars_, s_mask


@pytest.mark.parametrize("backend", BACKENDS)
def test_count_satisfied_matches_oracle(backend):
    impl = _kernels.IMPLEMENTATIONS[backend]["count_satisfied"]
    rng = np.random.default_rng(0)
    for _ in range(60):
        op = random_tables(rng)
        order = op.shape[0]
        n, m, k = int(rng.integers(1, 7)), int(rng.integers(0, 9)), int(rng.integers(2, 5))
        shifts, vars_, s_mask = random_constraints(rng, order, n, m, k)
        values = rng.integers(0, order, n).astype(np.int64)
        assert impl(op, values, shifts, vars_, s_mask) == oracle_count(
            op, values, shifts, vars_, s_mask
        )


@pytest.mark.parametrize("backend", BACKENDS)
def test_closure_matches_oracle(backend):
    impl = _kernels.IMPLEMENTATIONS[backend]["closure_mask"]
    rng = np.random.default_rng(1)
    for _ in range(60):
        op = random_tables(rng)
        order = op.shape[0]
        seed = np.zeros(order, dtype=np.bool_)
        seed[rng.integers(0, order, int(rng.integers(0, 3)))] = True
        assert np.array_equal(impl(op, seed), oracle_closure(op, seed))


@pytest.mark.parametrize("backend", BACKENDS)
def test_brute_force_matches_oracle(backend):
    impl = _kernels.IMPLEMENTATIONS[backend]["brute_force_search"]
    rng = np.random.default_rng(2)
    for _ in range(25):
        op = random_tables(rng)
        order = op.shape[0]
        n = int(rng.integers(1, 4))
        if order**n > 2000:
            n = 1
        m, k = int(rng.integers(1, 6)), int(rng.integers(2, 4))
        shifts, vars_, s_mask = random_constraints(rng, order, n, m, k)
        assert impl(op, n, shifts, vars_, s_mask) == oracle_brute(op, n, shifts, vars_, s_mask)


@pytest.mark.parametrize("backend", BACKENDS)
def test_brute_force_tie_breaks_to_rank_zero(backend):
    # every assignment satisfies everything, so the first (lexicographically
    # smallest) assignment must win
    impl = _kernels.IMPLEMENTATIONS[backend]["brute_force_search"]
    op = cyclic(3).op_table
    shifts = np.zeros((2, 2), dtype=np.int64)
    vars_ = np.array([[0, 1], [1, 2]], dtype=np.int64)
    s_mask = np.ones(3, dtype=np.bool_)
    count, rank = impl(op, 3, shifts, vars_, s_mask)
    assert (count, rank) == (2, 0)


@pytest.mark.skipif(not HAVE_NUMBA, reason="numba backend not importable")
def test_backends_agree_on_derandomize_sweep():
    rng = np.random.default_rng(3)
    for _ in range(40):
        op = random_tables(rng)
        order = op.shape[0]
        n, m, k = int(rng.integers(1, 6)), int(rng.integers(1, 8)), int(rng.integers(2, 4))
        shifts, vars_, s_mask = random_constraints(rng, order, n, m, k)
        maxc = int(rng.integers(1, order + 1))
        cand = np.sort(rng.integers(0, order, (n, maxc)).astype(np.int64), axis=1)
        cand_len = np.full(n, maxc, dtype=np.int64)
        per_var = [[] for _ in range(n)]
        ndistinct = np.zeros(m, dtype=np.int64)
        for c in range(m):
            seen = sorted(set(int(v) for v in vars_[c]))
            ndistinct[c] = len(seen)
            for i in seen:
                per_var[i].append(c)
        indptr = np.zeros(n + 1, dtype=np.int64)
        for i in range(n):
            indptr[i + 1] = indptr[i] + len(per_var[i])
        conidx = np.array([c for lst in per_var for c in lst], dtype=np.int64)
        if conidx.size == 0:
            conidx = np.zeros(0, dtype=np.int64)
        args = (op, shifts, vars_, s_mask, cand, cand_len, indptr, conidx, ndistinct)
        out_np = _kernels.IMPLEMENTATIONS["numpy"]["derandomize_sweep"](*args)
        out_nb = _kernels.IMPLEMENTATIONS["numba"]["derandomize_sweep"](*args)
        assert np.array_equal(out_np, out_nb)


@pytest.mark.skipif(not HAVE_NUMBA, reason="numba backend not importable")
def test_backends_agree_on_counts_and_triples():
    rng = np.random.default_rng(4)
    for _ in range(40):
        op = random_tables(rng)
        order = op.shape[0]
        n, m, k = int(rng.integers(1, 7)), int(rng.integers(0, 9)), int(rng.integers(2, 5))
        shifts, vars_, s_mask = random_constraints(rng, order, n, m, k)
        values = rng.integers(0, order, n).astype(np.int64)
        a = _kernels.IMPLEMENTATIONS["numpy"]["count_satisfied"](op, values, shifts, vars_, s_mask)
        b = _kernels.IMPLEMENTATIONS["numba"]["count_satisfied"](op, values, shifts, vars_, s_mask)
        assert a == b
        t = int(rng.integers(1, 50))
        fx = rng.integers(0, order, t).astype(np.int64)
        fy = rng.integers(0, order, t).astype(np.int64)
        fz = rng.integers(0, order, t).astype(np.int64)
        ta = _kernels.IMPLEMENTATIONS["numpy"]["triple_product_in_set"](op, fx, fy, fz, s_mask)
        tb = _kernels.IMPLEMENTATIONS["numba"]["triple_product_in_set"](op, fx, fy, fz, s_mask)
        assert ta == tb


def test_backend_selection_env(monkeypatch):
    monkeypatch.setenv("GROUPLIN_BACKEND", "numpy")
    assert _kernels._select_backend() == "numpy"
    monkeypatch.setenv("GROUPLIN_BACKEND", "bogus")
    with pytest.raises(ValueError):
        _kernels._select_backend()
    monkeypatch.delenv("GROUPLIN_BACKEND")
    assert _kernels._select_backend() in _kernels.IMPLEMENTATIONS


def test_available_backends_lists_numpy():
    assert "numpy" in _kernels.available_backends()
