"""Fourier analysis of functions on G^n for abelian G, and folded functions.

Characters of an abelian group are indexed by the same invariant-factor
coordinates as the elements, so both sides share one mixed-radix rank. Phases
are kept as exact integers modulo L = lcm of the factor orders; complex
values only appear at the last step. Transforms over G^n reduce to one
multidimensional FFT after permuting each axis into coordinate order.
"""

from __future__ import annotations

import weakref
from dataclasses import dataclass
from math import lcm

import numpy as np

from .groups import GroupError, _abelian_decomposition

_BASIS_CACHE = weakref.WeakKeyDictionary()

MAX_TABLE = 1 << 16


@dataclass(frozen=True, eq=False)
class CharacterBasis:
    """All |G| characters of an abelian G, with exact integer phases.

    phase[c, g] holds the phase of character c at element g in units of
    2*pi/L, so value[c, g] = exp(2j*pi*phase[c, g]/L). rank_to_elem and
    elem_to_rank translate between element IDs and mixed-radix ranks of the
    invariant coordinates (first factor most significant); character index c
    is the rank of the character's own coordinate tuple.
    """

    dims: tuple
    lcm_order: int
    phase: np.ndarray
    values: np.ndarray
    elem_to_rank: np.ndarray
    rank_to_elem: np.ndarray


def characters(group):
    """Character basis of an abelian group, cached per group."""
    basis = _BASIS_CACHE.get(group)
    if basis is not None:
        return basis
    if not group.is_abelian():
        raise GroupError(f"{group.name} is not abelian, characters require an abelian group")
    invariants, to_vec, _ = _abelian_decomposition(group)
    dims = tuple(invariants)
    order = group.order
    L = lcm(*dims) if dims else 1
    vec_mat = np.array([to_vec[g] for g in range(order)], dtype=np.int64).reshape(
        order, len(dims)
    )
    weights = np.array([L // d for d in dims], dtype=np.int64)
    # rank = mixed-radix combination, first coordinate most significant
    strides = np.ones(len(dims), dtype=np.int64)
    for j in range(len(dims) - 2, -1, -1):
        strides[j] = strides[j + 1] * dims[j + 1]
    elem_to_rank = vec_mat @ strides if dims else np.zeros(order, dtype=np.int64)
    rank_to_elem = np.zeros(order, dtype=np.int64)
    rank_to_elem[elem_to_rank] = np.arange(order)
    # character with rank c has the coordinate tuple of the element of rank c
    char_vecs = vec_mat[rank_to_elem]
    phase = ((char_vecs * weights) @ vec_mat.T) % L
    values = np.exp(2j * np.pi * phase / L)
    for arr in (phase, values, elem_to_rank, rank_to_elem):
        arr.flags.writeable = False
    basis = CharacterBasis(
        dims=dims,
        lcm_order=L,
        phase=phase,
        values=values,
        elem_to_rank=elem_to_rank,
        rank_to_elem=rank_to_elem,
    )
    _BASIS_CACHE[group] = basis
    return basis


def constant_on(basis, elements):
    """Boolean mask over character ranks: which characters are constant on
    the given element set. Exact integer test, no rounding."""
    idx = np.asarray(list(elements), dtype=np.int64)
    return (basis.phase[:, idx] == 0).all(axis=1)


def _check_size(group, n):
    total = group.order**n
    if total > MAX_TABLE:
        raise ValueError(
            f"{group.order}^{n} = {total} points exceed the dense-table bound {MAX_TABLE}"
        )
    return total


def fourier_transform(group, n, values, rho_index):
    """Coefficients of rho(f) for a G-valued f on G^n, one per character tuple.

    values lists f at every point of G^n in big-endian rank order. The result
    has shape (order,)*n; entry alpha = (c_1, ..., c_n) is the inner product
    of rho(f) with the product character, so Parseval gives
    sum |coeff|^2 = mean |rho(f)|^2 = 1.
    """
    basis = characters(group)
    order = group.order
    total = _check_size(group, n)
    vals = np.asarray(values, dtype=np.int64)
    if vals.shape != (total,):
        raise ValueError(f"function table has shape {vals.shape}, expected ({total},)")
    table = basis.values[rho_index][vals].reshape((order,) * n)
    for ax in range(n):
        table = np.take(table, basis.rank_to_elem, axis=ax)
    dims = basis.dims if basis.dims else (1,)
    coeff = np.fft.fftn(table.reshape(dims * n)) / total
    return coeff.reshape((order,) * n)


class FourierTable:
    """A G-valued function on G^n with its Fourier coefficients per output character."""

    def __init__(self, group, n, values):
        total = _check_size(group, n)
        vals = np.array(values, dtype=np.int64)
        if vals.shape != (total,):
            raise ValueError(f"function table has shape {vals.shape}, expected ({total},)")
        if vals.size and (vals.min() < 0 or vals.max() >= group.order):
            raise ValueError("function values must be element IDs of the group")
        vals.flags.writeable = False
        self.group = group
        self.n = n
        self.values = vals
        self.basis = characters(group)
        self._coeffs = {}

    def coeff(self, rho_index):
        got = self._coeffs.get(rho_index)
        if got is None:
            got = fourier_transform(self.group, self.n, self.values, rho_index)
            got.flags.writeable = False
            self._coeffs[rho_index] = got
        return got

    def parseval_defect(self, rho_index):
        c = self.coeff(rho_index)
        return abs(float(np.sum(np.abs(c) ** 2)) - 1.0)


@dataclass(frozen=True)
class InfluenceResult:
    """Degree-bounded influence of one coordinate: the H_S-modified variant
    next to the plain one."""

    modified: float
    plain: float


def modified_influence(table, rho_index, coord, degree, hs_elements):
    """Influence of a coordinate restricted to low-degree characters.

    The plain version sums |coeff(alpha)|^2 over alpha with alpha_coord
    nontrivial and at most `degree` nontrivial components. The modified
    version replaces "nontrivial" with "not constant on H_S" in both roles:
    the coordinate's component must be non-constant on H_S, and the degree
    counts non-constant components. With H_S = G the two coincide; with
    H_S = {e} the modified influence is identically zero.
    """
    basis = table.basis
    order = table.group.order
    n = table.n
    power = np.abs(table.coeff(rho_index)) ** 2
    nonconst = ~constant_on(basis, hs_elements)
    nontriv = np.arange(order) != 0

    def weighted(mask):
        weight = np.zeros((order,) * n, dtype=np.int64)
        for ax in range(n):
            shape = [1] * n
            shape[ax] = order
            weight = weight + mask.astype(np.int64).reshape(shape)
        sel_shape = [1] * n
        sel_shape[coord] = order
        sel = mask.reshape(sel_shape) & (weight <= degree)
        return float(power[sel].sum())

    return InfluenceResult(modified=weighted(nonconst), plain=weighted(nontriv))


def point_ranks(group, n):
    """Big-endian rank helpers: (powers, digits) for enumerating G^n."""
    order = group.order
    total = _check_size(group, n)
    powers = order ** np.arange(n - 1, -1, -1, dtype=np.int64) if n else np.zeros(0, np.int64)
    ranks = np.arange(total, dtype=np.int64)
    digits = (ranks[:, None] // powers[None, :]) % order if n else np.zeros((1, 0), np.int64)
    return powers, digits


class FoldedFunction:
    """A function satisfying f(c*x) = c*f(x), stored on one point per orbit.

    Orbits of the diagonal left action of G on G^n each contain |G| points;
    the representative is the point of minimum rank. Values on the other
    points follow from the folding identity.
    """

    def __init__(self, group, n, rep_values):
        if n < 1:
            raise ValueError("folded functions need at least one coordinate")
        self.group = group
        self.n = n
        total = _check_size(group, n)
        powers, digits = point_ranks(group, n)
        op = group.op_table
        # R[c, x] = rank of the point c*x
        moved = op[np.arange(group.order)[:, None, None], digits[None, :, :]]
        ranks_moved = np.tensordot(moved, powers, axes=([2], [0]))
        self.rep_rank = ranks_moved.min(axis=0)
        self._carrier = ranks_moved.argmin(axis=0)
        self.rep_ranks = np.unique(self.rep_rank)
        values = np.zeros(len(self.rep_ranks), dtype=np.int64)
        index = {int(r): i for i, r in enumerate(self.rep_ranks)}
        for r, v in rep_values.items():
            group.check_element(v)
            if int(r) not in index:
                raise ValueError(f"rank {r} is not an orbit representative")
            values[index[int(r)]] = v
        if len(rep_values) != len(self.rep_ranks):
            raise ValueError(
                f"need values on all {len(self.rep_ranks)} orbit representatives, "
                f"got {len(rep_values)}"
            )
        self.rep_values = values
        rep_pos = np.array([index[int(r)] for r in self.rep_rank], dtype=np.int64)
        # x = inv(carrier) * rep, so f(x) = inv(carrier) * f(rep)
        self.table = op[group.inv_table[self._carrier], values[rep_pos]]
        self.table.flags.writeable = False
        assert self.table.shape == (total,)

    @classmethod
    def random(cls, group, n, seed):
        _check_size(group, n)
        powers, digits = point_ranks(group, n)
        op = group.op_table
        moved = op[np.arange(group.order)[:, None, None], digits[None, :, :]]
        ranks_moved = np.tensordot(moved, powers, axes=([2], [0]))
        reps = np.unique(ranks_moved.min(axis=0))
        rng = np.random.default_rng(seed)
        vals = rng.integers(0, group.order, size=len(reps))
        return cls(group, n, {int(r): int(v) for r, v in zip(reps, vals)})

    def is_folded(self):
        """Exhaustive check of f(c*x) = c*f(x) over all c and x."""
        powers, digits = point_ranks(self.group, self.n)
        op = self.group.op_table
        for c in range(self.group.order):
            moved = op[c, digits]
            ranks = moved @ powers
            if not np.array_equal(self.table[ranks], op[c, self.table]):
                return False
        return True
