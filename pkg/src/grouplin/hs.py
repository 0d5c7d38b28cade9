"""The minimal normal subgroup H_S placing S inside a single coset.

H_S is the smallest normal subgroup of G that contains the commutator
subgroup and has S contained in one coset g*H_S. It is computed directly as
the subgroup generated by [G,G] together with s0^-1*s for s in S, and
cross-checked in tests against an exhaustive subgroup-lattice scan.
"""

from __future__ import annotations

import weakref
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import _kernels
from .groups import Subgroup, commutator_subgroup, generated_subgroup, normal_test

_LATTICE_CACHE = weakref.WeakKeyDictionary()
_COMMUTATOR_CACHE = weakref.WeakKeyDictionary()
_ANNOTATION_CACHE = weakref.WeakKeyDictionary()
MAX_BRUTE_ORDER = 24


@dataclass(frozen=True)
class HsResult:
    """H_S with its coset representative and the guarantee ratio |S|/|H_S|."""

    subgroup: Subgroup
    coset_rep: int
    ratio_num: int
    ratio_den: int
    generated_by_SinvS: bool

    @property
    def ratio(self):
        return Fraction(self.ratio_num, self.ratio_den)


def _commutators(G):
    sub = _COMMUTATOR_CACHE.get(G)
    if sub is None:
        sub = commutator_subgroup(G)
        _COMMUTATOR_CACHE[G] = sub
    return sub


def _check_s(G, S):
    s_ids = sorted(set(int(s) for s in S))
    if not s_ids:
        raise ValueError("S must be a nonempty set of element IDs")
    for s in s_ids:
        G.check_element(s)
    return s_ids


def _sinvs_generates(G, s_ids, subgroup):
    idx = np.array(s_ids, dtype=np.int64)
    pairs = np.unique(G.op_table[G.inv_table[idx][:, None], idx[None, :]])
    seed = np.zeros(G.order, dtype=np.bool_)
    seed[pairs] = True
    mask = _kernels.closure_mask(G.op_table, seed)
    return bool(np.array_equal(mask, subgroup.mask))


def compute_hs(G, S):
    """H_S built from the commutator subgroup and the differences s0^-1*s.

    The coset representative is s0, the minimum element ID in S, which makes
    the result deterministic; any other choice of s0 yields the same subgroup.
    """
    s_ids = _check_s(G, S)
    s0 = s_ids[0]
    s0_inv = G.inv(s0)
    gens = set(_commutators(G).elements)
    gens.update(G.op(s0_inv, s) for s in s_ids)
    subgroup = generated_subgroup(G, gens)
    return HsResult(
        subgroup=subgroup,
        coset_rep=s0,
        ratio_num=len(s_ids),
        ratio_den=subgroup.order,
        generated_by_SinvS=_sinvs_generates(G, s_ids, subgroup),
    )


def subgroup_lattice(G):
    """Every subgroup of G, found by closing known subgroups with one extra
    element until a fixed point. Sorted by (order, element list)."""
    if G.order > MAX_BRUTE_ORDER:
        raise ValueError(f"group order {G.order} exceeds {MAX_BRUTE_ORDER}, lattice too large")
    cached = _LATTICE_CACHE.get(G)
    if cached is not None:
        return cached
    trivial = generated_subgroup(G, [])
    seen = {trivial.elements: trivial}
    frontier = [trivial]
    while frontier:
        nxt = []
        for sub in frontier:
            for g in range(G.order):
                if sub.contains(g):
                    continue
                bigger = generated_subgroup(G, sub.elements + (g,))
                if bigger.elements not in seen:
                    seen[bigger.elements] = bigger
                    nxt.append(bigger)
        frontier = nxt
    lattice = sorted(seen.values(), key=lambda s: (s.order, s.elements))
    _LATTICE_CACHE[G] = lattice
    return lattice


def brute_force_hs(G, S):
    """Oracle: scan the whole subgroup lattice for the smallest valid H_S.

    Valid means normal, containing every commutator, and covering S with a
    single coset. Ties in order break by lexicographic element list, per the
    lattice ordering.
    """
    s_ids = _check_s(G, S)
    lattice = subgroup_lattice(G)
    annotations = _annotate(G, lattice)
    s_bits = 0
    for s in s_ids:
        s_bits |= 1 << s
    s0 = s_ids[0]
    for sub, (commut_ok, normal_ok, coset_bits) in zip(lattice, annotations):
        if commut_ok and normal_ok and s_bits & ~coset_bits[s0] == 0:
            return HsResult(
                subgroup=sub,
                coset_rep=s0,
                ratio_num=len(s_ids),
                ratio_den=sub.order,
                generated_by_SinvS=_sinvs_generates(G, s_ids, sub),
            )
    raise AssertionError("unreachable: the full group is always a valid H_S")


def _annotate(G, lattice):
    cached = _ANNOTATION_CACHE.get(G)
    if cached is not None:
        return cached
    comm_mask = _commutators(G).mask
    annotations = []
    for sub in lattice:
        commut_ok = bool(comm_mask[~sub.mask].sum() == 0)
        normal_ok = normal_test(G, sub)
        idx = np.array(sub.elements, dtype=np.int64)
        coset_bits = []
        for g in range(G.order):
            bits = 0
            for h in G.op_table[g, idx]:
                bits |= 1 << int(h)
            coset_bits.append(bits)
        annotations.append((commut_ok, normal_ok, coset_bits))
    _ANNOTATION_CACHE[G] = annotations
    return annotations
