"""Hot loops, compiled with numba when available, with a pure-numpy fallback.

Backend selection: set GROUPLIN_BACKEND=numpy or GROUPLIN_BACKEND=numba.
Unset, numba is used when importable. Both implementations stay importable
side by side (see IMPLEMENTATIONS) so they can be benchmarked and cross-checked.

Conventions shared by all kernels:
  op        dense multiplication table, int64 (order x order)
  s_mask    bool membership vector for the target set S, length order
  shifts    int64 (m, k) constraint shift element IDs
  vars_     int64 (m, k) constraint variable indices
Kernels are deterministic; callers draw any randomness up front.
"""

from __future__ import annotations

import os

import numpy as np

try:
    from numba import njit

    HAS_NUMBA = True
except ImportError:
    HAS_NUMBA = False


def _identity_of(op):
    # the identity is the unique e with row op[e] = 0..n-1
    order = op.shape[0]
    rng = np.arange(order)
    for e in range(order):
        if np.array_equal(op[e], rng):
            return e
    raise ValueError("operation table has no identity row")


# ---------------------------------------------------------------------------
# numpy implementations
# ---------------------------------------------------------------------------


def _count_satisfied_numpy(op, values, shifts, vars_, s_mask):
    acc = op[shifts[:, 0], values[vars_[:, 0]]]
    for j in range(1, shifts.shape[1]):
        acc = op[acc, op[shifts[:, j], values[vars_[:, j]]]]
    return int(s_mask[acc].sum())


def _closure_mask_numpy(op, seed_mask):
    order = op.shape[0]
    mask = seed_mask.copy()
    mask[_identity_of(op)] = True
    while True:
        idx = np.flatnonzero(mask)
        new = np.zeros(order, dtype=np.bool_)
        new[op[np.ix_(idx, idx)].ravel()] = True
        if not np.any(new & ~mask):
            return mask
        mask |= new


def _brute_force_search_numpy(op, n_vars, shifts, vars_, s_mask, chunk=1 << 15):
    order = op.shape[0]
    total = order**n_vars
    powers = order ** np.arange(n_vars - 1, -1, -1, dtype=np.int64)
    best_count = -1
    best_rank = 0
    m, k = shifts.shape
    for start in range(0, total, chunk):
        ranks = np.arange(start, min(start + chunk, total), dtype=np.int64)
        digits = (ranks[:, None] // powers[None, :]) % order
        counts = np.zeros(len(ranks), dtype=np.int64)
        for c in range(m):
            acc = op[shifts[c, 0], digits[:, vars_[c, 0]]]
            for j in range(1, k):
                acc = op[acc, op[shifts[c, j], digits[:, vars_[c, j]]]]
            counts += s_mask[acc]
        pos = int(np.argmax(counts))
        if counts[pos] > best_count:
            best_count = int(counts[pos])
            best_rank = int(ranks[pos])
    return best_count, best_rank


def _derandomize_sweep_numpy(op, shifts, vars_, s_mask, cand, cand_len, indptr, conidx, ndistinct):
    n = cand.shape[0]
    k = shifts.shape[1]
    values = np.zeros(n, dtype=np.int64)
    remaining = ndistinct.copy()
    for i in range(n):
        touching = conidx[indptr[i] : indptr[i + 1]]
        last_free = touching[remaining[touching] == 1]
        cands = cand[i, : cand_len[i]]
        if len(last_free) == 0:
            values[i] = cands[0]
        else:
            scores = np.zeros(len(cands), dtype=np.int64)
            for c in last_free:
                vals = cands if vars_[c, 0] == i else np.full(len(cands), values[vars_[c, 0]])
                acc = op[shifts[c, 0], vals]
                for j in range(1, k):
                    vals = cands if vars_[c, j] == i else np.full(len(cands), values[vars_[c, j]])
                    acc = op[acc, op[shifts[c, j], vals]]
                scores += s_mask[acc]
            values[i] = cands[int(np.argmax(scores))]
        remaining[touching] -= 1
    return values


def _triple_product_in_set_numpy(op, fx, fy, fz, s_mask):
    return int(s_mask[op[op[fx, fy], fz]].sum())


# ---------------------------------------------------------------------------
# numba implementations
# ---------------------------------------------------------------------------

if HAS_NUMBA:

    @njit(cache=True)
    def _count_satisfied_numba(op, values, shifts, vars_, s_mask):
        m, k = shifts.shape
        count = 0
        for c in range(m):
            acc = op[shifts[c, 0], values[vars_[c, 0]]]
            for j in range(1, k):
                acc = op[acc, op[shifts[c, j], values[vars_[c, j]]]]
            if s_mask[acc]:
                count += 1
        return count

    @njit(cache=True)
    def _closure_mask_numba(op, seed_mask):
        order = op.shape[0]
        mask = seed_mask.copy()
        for e in range(order):
            is_identity = True
            for b in range(order):
                if op[e, b] != b:
                    is_identity = False
                    break
            if is_identity:
                mask[e] = True
                break
        members = np.empty(order, dtype=np.int64)
        size = 0
        for g in range(order):
            if mask[g]:
                members[size] = g
                size += 1
        # each round multiplies every ordered pair with at least one new member
        old = 0
        while old < size:
            hi = size
            for ia in range(hi):
                lo = old if ia < old else 0
                for ib in range(lo, hi):
                    p = op[members[ia], members[ib]]
                    if not mask[p]:
                        mask[p] = True
                        members[size] = p
                        size += 1
            old = hi
        return mask

    @njit(cache=True)
    def _brute_force_search_numba(op, n_vars, shifts, vars_, s_mask):
        order = op.shape[0]
        m, k = shifts.shape
        total = 1
        for _ in range(n_vars):
            total *= order
        values = np.zeros(n_vars, dtype=np.int64)
        best_count = -1
        best_rank = 0
        for rank in range(total):
            count = 0
            for c in range(m):
                acc = op[shifts[c, 0], values[vars_[c, 0]]]
                for j in range(1, k):
                    acc = op[acc, op[shifts[c, j], values[vars_[c, j]]]]
                if s_mask[acc]:
                    count += 1
            if count > best_count:
                best_count = count
                best_rank = rank
            # odometer with the last variable least significant, so rank
            # order equals lexicographic order on assignment tuples
            pos = n_vars - 1
            while pos >= 0:
                values[pos] += 1
                if values[pos] < order:
                    break
                values[pos] = 0
                pos -= 1
        return best_count, best_rank

    @njit(cache=True)
    def _derandomize_sweep_numba(op, shifts, vars_, s_mask, cand, cand_len, indptr, conidx, ndistinct):
        n = cand.shape[0]
        k = shifts.shape[1]
        values = np.zeros(n, dtype=np.int64)
        remaining = ndistinct.copy()
        for i in range(n):
            best_v = cand[i, 0]
            best_score = -1
            for ci in range(cand_len[i]):
                v = cand[i, ci]
                score = 0
                for p in range(indptr[i], indptr[i + 1]):
                    c = conidx[p]
                    if remaining[c] != 1:
                        continue
                    w = v if vars_[c, 0] == i else values[vars_[c, 0]]
                    acc = op[shifts[c, 0], w]
                    for j in range(1, k):
                        w = v if vars_[c, j] == i else values[vars_[c, j]]
                        acc = op[acc, op[shifts[c, j], w]]
                    if s_mask[acc]:
                        score += 1
                if score > best_score:
                    best_score = score
                    best_v = v
            values[i] = best_v
            for p in range(indptr[i], indptr[i + 1]):
                remaining[conidx[p]] -= 1
        return values

    @njit(cache=True)
    def _triple_product_in_set_numba(op, fx, fy, fz, s_mask):
        count = 0
        for t in range(fx.shape[0]):
            if s_mask[op[op[fx[t], fy[t]], fz[t]]]:
                count += 1
        return count


# ---------------------------------------------------------------------------
# backend selection
# ---------------------------------------------------------------------------

IMPLEMENTATIONS = {
    "numpy": {
        "count_satisfied": _count_satisfied_numpy,
        "closure_mask": _closure_mask_numpy,
        "brute_force_search": _brute_force_search_numpy,
        "derandomize_sweep": _derandomize_sweep_numpy,
        "triple_product_in_set": _triple_product_in_set_numpy,
    }
}
if HAS_NUMBA:
    IMPLEMENTATIONS["numba"] = {
        "count_satisfied": _count_satisfied_numba,
        "closure_mask": _closure_mask_numba,
        "brute_force_search": _brute_force_search_numba,
        "derandomize_sweep": _derandomize_sweep_numba,
        "triple_product_in_set": _triple_product_in_set_numba,
    }


def _select_backend():
    env = os.environ.get("GROUPLIN_BACKEND", "").strip().lower()
    if env not in ("", "numba", "numpy"):
        raise ValueError(f"GROUPLIN_BACKEND must be 'numba' or 'numpy', got {env!r}")
    if env == "numba" and not HAS_NUMBA:
        raise RuntimeError("GROUPLIN_BACKEND=numba but numba is not importable")
    if env:
        return env
    return "numba" if HAS_NUMBA else "numpy"


BACKEND = _select_backend()

count_satisfied = IMPLEMENTATIONS[BACKEND]["count_satisfied"]
closure_mask = IMPLEMENTATIONS[BACKEND]["closure_mask"]
brute_force_search = IMPLEMENTATIONS[BACKEND]["brute_force_search"]
derandomize_sweep = IMPLEMENTATIONS[BACKEND]["derandomize_sweep"]
triple_product_in_set = IMPLEMENTATIONS[BACKEND]["triple_product_in_set"]


def available_backends():
    """Names of the kernel backends importable in this process."""
    return sorted(IMPLEMENTATIONS)
