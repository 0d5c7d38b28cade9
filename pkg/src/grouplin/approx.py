"""Approximation pipeline: project to the abelian quotient, solve, lift, derandomize.

The pipeline maps each constraint into G/H_S, where the constraint becomes a
linear equation over the quotient's cyclic factors. Any quotient solution
lifts to a group assignment coset by coset; a random lift satisfies each
constraint with probability |S|/|H_S|, and a conditional-expectation sweep
turns that into a deterministic assignment meeting the same bound. When the
quotient system has no solution the pipeline falls back to the uniform
baseline with guarantee |S|/|G|.
"""

from __future__ import annotations

import weakref
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import _kernels
from .abelian import AbelianSystem
from .abelian import solve as solve_abelian
from .groups import quotient
from .hs import compute_hs
from .instances import evaluate

_QUOTIENT_CACHE = weakref.WeakKeyDictionary()

MAX_BRUTE_ASSIGNMENTS = 10_000_000


@dataclass(frozen=True)
class SolveReport:
    """Outcome of one solver run: exact value, proven guarantee, assignment."""

    value: Fraction
    guarantee: Fraction
    assignment: tuple
    mode: str
    quotient_unsat: bool = False
    vacuous: bool = False


def quotient_by(G, subgroup):
    """G/H with caching, so repeated solves on one group share the quotient."""
    per_group = _QUOTIENT_CACHE.get(G)
    if per_group is None:
        per_group = {}
        _QUOTIENT_CACHE[G] = per_group
    q = per_group.get(subgroup.elements)
    if q is None:
        q = quotient(G, subgroup)
        per_group[subgroup.elements] = q
    return q


def project_instance(instance, quot):
    """The instance's image in the abelian quotient, as a linear system.

    In invariant coordinates each constraint reads
    sum_j y_{i_j} = [S] - sum_j [a_j], with every variable's coset unknown
    y = [x]. Shifts and the target coset are constants, so only a coefficient
    count per variable and a right-hand side per cyclic factor remain.
    """
    invariants = quot.abelian_invariants
    if invariants is None:
        raise ValueError("quotient is not abelian, no linear projection exists")
    nf = len(invariants)
    q_vecs = np.array(
        [quot.iso_to_vec(q) for q in range(quot.order)], dtype=np.int64
    ).reshape(quot.order, nf)
    targets = {quot.project(s) for s in instance.s_set}
    if len(targets) != 1:
        raise ValueError("target set S does not sit inside a single coset of this quotient")
    target_vec = q_vecs[targets.pop()]
    m = instance.num_constraints
    n = instance.num_vars
    coeff = np.zeros((m, n), dtype=np.int64)
    if m:
        rows = np.repeat(np.arange(m), instance.arity)
        np.add.at(coeff, (rows, instance._vars.ravel()), 1)
    shift_vecs = q_vecs[quot.project_table[instance._shifts]]
    mods = np.array(invariants, dtype=np.int64).reshape(1, nf)
    rhs = (target_vec.reshape(1, nf) - shift_vecs.sum(axis=1)) % mods if m else np.zeros(
        (0, nf), dtype=np.int64
    )
    return AbelianSystem(num_vars=n, invariants=tuple(invariants), coeff=coeff, rhs=rhs)


def _coset_indices(quot, solution):
    return [quot.iso_from_vec(per_var) for per_var in solution.assignment]


def round_solution(instance, quot, solution, seed):
    """Lift a quotient solution: coset representative times a uniform H element.

    With at least one variable of multiplicity one per constraint, each
    constraint is satisfied with probability exactly |S|/|H_S| under this lift.
    """
    rng = np.random.default_rng(seed)
    cosets = _coset_indices(quot, solution)
    reps = np.array([quot.coset_reps[q] for q in cosets], dtype=np.int64)
    h_elems = np.array(quot.normal_sub.elements, dtype=np.int64)
    picks = h_elems[rng.integers(0, len(h_elems), size=len(cosets))]
    return instance.group.op_table[reps, picks]


def _distinct_rows(instance):
    return all(len(set(i for _, i in con)) == instance.arity for con in instance.constraints)


def _sweep(instance, cand_lists):
    """Conditional-expectation sweep over per-variable candidate lists.

    Visits variables in index order; each variable takes the candidate
    maximizing satisfied count among constraints whose other variables are
    already fixed. Candidate lists are ascending, so ties pick the smallest
    element ID.
    """
    n = instance.num_vars
    maxc = max((len(c) for c in cand_lists), default=1)
    cand = np.zeros((n, maxc), dtype=np.int64)
    cand_len = np.zeros(n, dtype=np.int64)
    for i, lst in enumerate(cand_lists):
        cand[i, : len(lst)] = lst
        cand_len[i] = len(lst)
    per_var = [[] for _ in range(n)]
    ndistinct = np.zeros(instance.num_constraints, dtype=np.int64)
    for r, con in enumerate(instance.constraints):
        seen = set(i for _, i in con)
        ndistinct[r] = len(seen)
        for i in seen:
            per_var[i].append(r)
    indptr = np.zeros(n + 1, dtype=np.int64)
    for i in range(n):
        indptr[i + 1] = indptr[i] + len(per_var[i])
    conidx = np.array(
        [r for lst in per_var for r in lst], dtype=np.int64
    ) if indptr[-1] else np.zeros(0, dtype=np.int64)
    return _kernels.derandomize_sweep(
        instance.group.op_table,
        instance._shifts,
        instance._vars,
        instance._s_mask,
        cand,
        cand_len,
        indptr,
        conidx,
        ndistinct,
    )


def _sweep_python(instance, cand_lists, ratio, check_monotone):
    """Reference sweep tracking the full conditional expectation as a Fraction.

    Asserts the expectation never drops step to step; that argument needs
    every constraint to touch distinct variables, so the check is skipped
    otherwise.
    """
    n = instance.num_vars
    values = [None] * n
    op = instance.group.op
    s_set = set(instance.s_set)

    def expectation():
        total = Fraction(0)
        for con in instance.constraints:
            if all(values[i] is not None for _, i in con):
                acc = None
                for a, i in con:
                    term = op(a, values[i])
                    acc = term if acc is None else op(acc, term)
                total += 1 if acc in s_set else 0
            else:
                total += ratio
        return total

    prev = expectation()
    for i in range(n):
        best_v = None
        best_e = None
        for v in cand_lists[i]:
            values[i] = v
            e = expectation()
            if best_e is None or e > best_e:
                best_e, best_v = e, v
        values[i] = best_v
        if check_monotone:
            assert best_e >= prev, f"conditional expectation dropped at variable {i}"
        prev = best_e
    return np.array(values, dtype=np.int64)


def derandomize(instance, quot, solution, debug=False):
    """Deterministic lift of a quotient solution by conditional expectations.

    With debug=True a pure-Python sweep runs instead, tracking the exact
    expectation and asserting it never decreases.
    """
    cosets = _coset_indices(quot, solution)
    cand_lists = [list(quot.coset_elements[q]) for q in cosets]
    if debug:
        ratio = Fraction(len(instance.s_set), quot.normal_sub.order)
        return _sweep_python(instance, cand_lists, ratio, _distinct_rows(instance))
    return _sweep(instance, cand_lists)


def _derandomize_uniform(instance, debug=False):
    cand_lists = [list(range(instance.group.order)) for _ in range(instance.num_vars)]
    if debug:
        ratio = Fraction(len(instance.s_set), instance.group.order)
        return _sweep_python(instance, cand_lists, ratio, _distinct_rows(instance))
    return _sweep(instance, cand_lists)


def _identity_assignment(instance):
    return np.full(instance.num_vars, instance.group.identity, dtype=np.int64)


def solve_pipeline(instance, seed=0, randomized=False):
    """Full solver: H_S, quotient projection, linear solve, lift, derandomize.

    randomized=True keeps the random lift instead of sweeping it; the
    guarantee then holds in expectation rather than pointwise.
    """
    G = instance.group
    hs = compute_hs(G, instance.s_set)
    ratio = hs.ratio
    mode = "randomized" if randomized else "derandomized"
    if instance.num_constraints == 0:
        values = _identity_assignment(instance)
        return SolveReport(Fraction(1), ratio, tuple(int(v) for v in values), mode, vacuous=True)
    quot = quotient_by(G, hs.subgroup)
    system = project_instance(instance, quot)
    rng = np.random.default_rng(seed)
    solution = solve_abelian(system, rng)
    if solution is None:
        guarantee = Fraction(len(instance.s_set), G.order)
        if randomized:
            values = rng.integers(0, G.order, size=instance.num_vars, dtype=np.int64)
        else:
            values = _derandomize_uniform(instance)
        value = evaluate(instance, values)
        return SolveReport(
            value, guarantee, tuple(int(v) for v in values), mode, quotient_unsat=True
        )
    if randomized:
        values = round_solution(instance, quot, solution, rng)
    else:
        values = derandomize(instance, quot, solution)
    value = evaluate(instance, values)
    return SolveReport(value, ratio, tuple(int(v) for v in values), mode)


def baseline_random(instance, seed=0, derandomized=True):
    """Uniform-assignment baseline with guarantee |S|/|G|, optionally derandomized."""
    G = instance.group
    guarantee = Fraction(len(instance.s_set), G.order)
    if instance.num_constraints == 0:
        values = _identity_assignment(instance)
        return SolveReport(
            Fraction(1), guarantee, tuple(int(v) for v in values), "baseline-random", vacuous=True
        )
    if derandomized:
        values = _derandomize_uniform(instance)
    else:
        rng = np.random.default_rng(seed)
        values = rng.integers(0, G.order, size=instance.num_vars, dtype=np.int64)
    value = evaluate(instance, values)
    return SolveReport(value, guarantee, tuple(int(v) for v in values), "baseline-random")


def brute_force(instance):
    """Exact optimum by enumerating all |G|^n assignments (bounded).

    The reported assignment is the lexicographically smallest optimum, read
    as a big-endian tuple of element IDs.
    """
    G = instance.group
    total = G.order**instance.num_vars
    if total > MAX_BRUTE_ASSIGNMENTS:
        raise ValueError(
            f"{G.order}^{instance.num_vars} = {total} assignments exceed the "
            f"brute-force bound {MAX_BRUTE_ASSIGNMENTS}"
        )
    if instance.num_constraints == 0:
        values = _identity_assignment(instance)
        return SolveReport(
            Fraction(1), Fraction(1), tuple(int(v) for v in values), "brute-force", vacuous=True
        )
    best_count, best_rank = _kernels.brute_force_search(
        G.op_table,
        instance.num_vars,
        instance._shifts,
        instance._vars,
        instance._s_mask,
    )
    values = np.zeros(instance.num_vars, dtype=np.int64)
    rank = int(best_rank)
    for i in range(instance.num_vars - 1, -1, -1):
        values[i] = rank % G.order
        rank //= G.order
    value = Fraction(int(best_count), instance.num_constraints)
    check = evaluate(instance, values)
    assert check == value, "brute-force count disagrees with direct evaluation"
    return SolveReport(value, value, tuple(int(v) for v in values), "brute-force")
