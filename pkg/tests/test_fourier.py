"""Character bases, transforms, influences, and folded functions.

The fast transform is validated against a direct-summation oracle, and the
two structural facts about folded functions (vanishing 1-dim coefficients of
matrix entries, and vanishing coefficients over subgroup-constant character
tuples) are checked numerically.
"""

import itertools

import numpy as np
import pytest

import grouplin as gl
from grouplin.fourier import FoldedFunction, FourierTable, constant_on, point_ranks
from grouplin.groups import GroupError

ABELIAN_NAMES = ("Z2", "Z3", "Z4", "Z6", "Z4xZ4")


def direct_coeff(group, n, values, rho, alpha):
    # textbook inner product E[rho(f(x)) * conj(alpha(x))], summed point by point
    basis = gl.characters(group)
    _, digits = point_ranks(group, n)
    acc = 0j
    for r in range(group.order**n):
        term = basis.values[rho][values[r]]
        for i, c in enumerate(alpha):
            term *= np.conj(basis.values[c][digits[r, i]])
        acc += term
    return acc / group.order**n


# ---------------------------------------------------------------------------
# character basis
# ---------------------------------------------------------------------------


def test_characters_require_abelian(catalog_groups):
    with pytest.raises(GroupError):
        gl.characters(catalog_groups["S3"])


@pytest.mark.parametrize("name", ABELIAN_NAMES)
def test_character_multiplicativity_exact(catalog_groups, name):
    G = catalog_groups[name]
    basis = gl.characters(G)
    L = basis.lcm_order
    for c in range(G.order):
        for a in range(G.order):
            for b in range(G.order):
                lhs = basis.phase[c, G.op(a, b)]
                assert lhs == (basis.phase[c, a] + basis.phase[c, b]) % L


@pytest.mark.parametrize("name", ABELIAN_NAMES)
def test_character_orthogonality(catalog_groups, name):
    G = catalog_groups[name]
    basis = gl.characters(G)
    gram = basis.values @ basis.values.conj().T / G.order
    assert np.abs(gram - np.eye(G.order)).max() < 1e-12
    assert np.abs(np.abs(basis.values) - 1.0).max() < 1e-12
    assert (basis.phase[0] == 0).all()


def test_characters_cached(catalog_groups):
    G = catalog_groups["Z6"]
    assert gl.characters(G) is gl.characters(G)


def test_character_group_structure(catalog_groups):
    # pointwise product of characters c1, c2 is the character of rank
    # rank(vec(c1) + vec(c2)); with the shared rank convention that is just
    # the group operation on ranks mapped through rank_to_elem
    G = catalog_groups["Z4xZ4"]
    basis = gl.characters(G)
    L = basis.lcm_order
    for c1 in range(G.order):
        for c2 in range(G.order):
            e3 = G.op(basis.rank_to_elem[c1], basis.rank_to_elem[c2])
            c3 = basis.elem_to_rank[e3]
            assert (
                (basis.phase[c1] + basis.phase[c2]) % L == basis.phase[c3]
            ).all()


def test_constant_on_counts(catalog_groups):
    # characters constant on a subgroup H correspond to characters of G/H
    for name in ABELIAN_NAMES:
        G = catalog_groups[name]
        basis = gl.characters(G)
        for sub in gl.subgroup_lattice(G):
            mask = constant_on(basis, sub.elements)
            assert int(mask.sum()) == G.order // sub.order


# ---------------------------------------------------------------------------
# transform
# ---------------------------------------------------------------------------


def test_transform_matches_direct_summation(catalog_groups):
    rng = np.random.default_rng(2)
    for name, n in (("Z6", 2), ("Z4", 3), ("Z4xZ4", 1)):
        G = catalog_groups[name]
        values = rng.integers(0, G.order, size=G.order**n)
        for rho in (0, 1, G.order - 1):
            coeff = gl.fourier_transform(G, n, values, rho)
            for alpha in itertools.product(range(G.order), repeat=n):
                want = direct_coeff(G, n, values, rho, alpha)
                assert abs(coeff[alpha] - want) < 1e-9, (name, rho, alpha)


def test_transform_constant_function(catalog_groups):
    G = catalog_groups["Z6"]
    values = np.full(36, 3, dtype=np.int64)
    coeff = gl.fourier_transform(G, 2, values, 0)
    assert abs(coeff[0, 0] - 1.0) < 1e-12
    off = coeff.copy()
    off[0, 0] = 0
    assert np.abs(off).max() < 1e-12
    # nontrivial character of a constant: magnitude-1 coefficient at trivial alpha
    coeff1 = gl.fourier_transform(G, 2, values, 1)
    assert abs(abs(coeff1[0, 0]) - 1.0) < 1e-12


def test_transform_identity_map_is_delta(catalog_groups):
    G = catalog_groups["Z6"]
    values = np.arange(6)
    for rho in range(6):
        coeff = gl.fourier_transform(G, 1, values, rho)
        expected = np.zeros(6)
        expected[rho] = 1.0
        assert np.abs(coeff - expected).max() < 1e-12


def test_dictator_coefficient_concentration(catalog_groups):
    # f(x) = first coordinate over Z2^2, composed with the sign character:
    # the single coefficient sits at (nontrivial, trivial)
    G = catalog_groups["Z2"]
    values = np.array([0, 0, 1, 1])
    coeff = gl.fourier_transform(G, 2, values, 1)
    assert abs(coeff[1, 0] - 1.0) < 1e-12
    mask = np.ones((2, 2), dtype=bool)
    mask[1, 0] = False
    assert np.abs(coeff[mask]).max() < 1e-12


def test_parseval_and_inversion(catalog_groups):
    rng = np.random.default_rng(4)
    for name, n in (("Z4", 2), ("Z6", 2), ("Z4xZ4", 2)):
        G = catalog_groups[name]
        table = FourierTable(G, n, rng.integers(0, G.order, size=G.order**n))
        basis = table.basis
        for rho in range(G.order):
            assert table.parseval_defect(rho) < 1e-9
        # reconstruct F = chi_rho(f) from its coefficients at a few points
        rho = 1
        coeff = table.coeff(rho)
        _, digits = point_ranks(G, n)
        for r in rng.integers(0, G.order**n, size=5):
            total = 0j
            for alpha in itertools.product(range(G.order), repeat=n):
                term = coeff[alpha]
                for i, c in enumerate(alpha):
                    term *= basis.values[c][digits[r, i]]
                total += term
            assert abs(total - basis.values[rho][table.values[r]]) < 1e-9


def test_transform_size_and_shape_errors(catalog_groups):
    G = catalog_groups["Z4xZ4"]
    with pytest.raises(ValueError):
        gl.fourier_transform(G, 5, np.zeros(16**5, dtype=np.int64), 0)
    with pytest.raises(ValueError):
        gl.fourier_transform(G, 2, np.zeros(7, dtype=np.int64), 0)
    with pytest.raises(ValueError):
        FourierTable(G, 1, np.full(16, 16, dtype=np.int64))


# ---------------------------------------------------------------------------
# influences
# ---------------------------------------------------------------------------


def hs_for_pair(catalog_groups):
    G = catalog_groups["Z4xZ4"]
    return G, gl.compute_hs(G, (1, 4)).subgroup.elements


def test_dictator_influence(catalog_groups):
    G, hs_elements = hs_for_pair(catalog_groups)
    basis = gl.characters(G)
    nonconst = ~constant_on(basis, hs_elements)
    dictator0 = point_ranks(G, 2)[1][:, 0]
    table = FourierTable(G, 2, dictator0)
    for rho in range(1, 16):
        res = gl.modified_influence(table, rho, 0, 1, hs_elements)
        assert res.plain == pytest.approx(1.0, abs=1e-9)
        expect = 1.0 if nonconst[rho] else 0.0
        assert res.modified == pytest.approx(expect, abs=1e-9)
        other = gl.modified_influence(table, rho, 1, 1, hs_elements)
        assert other.plain == pytest.approx(0.0, abs=1e-12)
        assert other.modified == pytest.approx(0.0, abs=1e-12)
    assert nonconst.sum() == 12


def test_sum_function_influences(catalog_groups):
    # f(x) = x_1 + x_2 + x_3: the only coefficient has full weight, so any
    # degree bound below n kills the plain influence, and a subgroup-constant
    # character kills the modified influence at every degree
    G, hs_elements = hs_for_pair(catalog_groups)
    basis = gl.characters(G)
    const = constant_on(basis, hs_elements)
    n = 3
    _, digits = point_ranks(G, n)
    values = digits[:, 0]
    for i in range(1, n):
        values = G.op_table[values, digits[:, i]]
    table = FourierTable(G, n, values)
    rho_const = int(np.flatnonzero(const)[1])
    rho_free = int(np.flatnonzero(~const)[0])
    for coord in range(n):
        for d in range(n + 1):
            res = gl.modified_influence(table, rho_const, coord, d, hs_elements)
            assert res.modified == pytest.approx(0.0, abs=1e-9)
        low = gl.modified_influence(table, rho_free, coord, n - 1, hs_elements)
        assert low.plain == pytest.approx(0.0, abs=1e-9)
        full = gl.modified_influence(table, rho_free, coord, n, hs_elements)
        assert full.plain == pytest.approx(1.0, abs=1e-9)


def test_constant_function_influence(catalog_groups):
    G, hs_elements = hs_for_pair(catalog_groups)
    table = FourierTable(G, 2, np.full(256, 5, dtype=np.int64))
    for rho in (0, 1, 7):
        res = gl.modified_influence(table, rho, 0, 2, hs_elements)
        assert res.plain == pytest.approx(0.0, abs=1e-12)
        assert res.modified == pytest.approx(0.0, abs=1e-12)


def test_influence_boundary_subgroups(catalog_groups):
    G = catalog_groups["Z4xZ4"]
    rng = np.random.default_rng(8)
    table = FourierTable(G, 2, rng.integers(0, 16, size=256))
    for rho in (1, 5, 9):
        for coord in (0, 1):
            for d in (1, 2):
                whole = gl.modified_influence(table, rho, coord, d, tuple(range(16)))
                assert whole.modified == whole.plain
                triv = gl.modified_influence(table, rho, coord, d, (0,))
                assert triv.modified == 0.0


def test_nonconstant_implies_nontrivial(catalog_groups):
    for name in ABELIAN_NAMES:
        G = catalog_groups[name]
        basis = gl.characters(G)
        for sub in gl.subgroup_lattice(G):
            nonconst = ~constant_on(basis, sub.elements)
            assert not nonconst[0]
            # only the trivial character is constant on every subgroup chain
            assert (~nonconst | (np.arange(G.order) != 0)).all()


# ---------------------------------------------------------------------------
# folded functions
# ---------------------------------------------------------------------------


def test_random_folded_is_folded(catalog_groups):
    for name, n in (("Z4", 2), ("S3", 2), ("Z4xZ4", 1), ("Q8", 2), ("Z6", 3)):
        G = catalog_groups[name]
        f = FoldedFunction.random(G, n, seed=5)
        assert f.is_folded()
        assert len(f.rep_ranks) == G.order ** (n - 1)
        assert f.table.shape == (G.order**n,)


def test_folded_identity_on_orbits(catalog_groups):
    # spot check f(c*x) = c*f(x) with an independent python walk
    G = catalog_groups["S3"]
    f = FoldedFunction.random(G, 2, seed=1)
    _, digits = point_ranks(G, 2)
    rng = np.random.default_rng(2)
    for _ in range(50):
        r = int(rng.integers(0, 36))
        c = int(rng.integers(0, 6))
        moved = [G.op(c, int(x)) for x in digits[r]]
        r_moved = moved[0] * 6 + moved[1]
        assert f.table[r_moved] == G.op(c, int(f.table[r]))


def test_folded_constructor_errors(catalog_groups):
    G = catalog_groups["Z4"]
    with pytest.raises(ValueError):
        FoldedFunction(G, 0, {})
    with pytest.raises(ValueError):
        FoldedFunction(G, 1, {0: 0, 1: 0})
    f = FoldedFunction.random(G, 2, seed=0)
    reps = {int(r): 0 for r in f.rep_ranks}
    missing = dict(reps)
    missing.pop(next(iter(missing)))
    with pytest.raises(ValueError):
        FoldedFunction(G, 2, missing)
    bad_value = dict(reps)
    bad_value[int(f.rep_ranks[0])] = 4
    with pytest.raises(GroupError):
        FoldedFunction(G, 2, bad_value)


def test_folded_matrix_entries_drop_onedim_coefficients():
    # a matrix entry of a dim >= 2 irrep of a folded function has zero
    # correlation with every 1-dimensional character tuple
    catalog = gl.load_catalog()
    for gname in ("S3", "D4"):
        entry = catalog[gname]
        G = entry.group
        two = next(irr for irr in entry.irreps if irr.dim == 2)
        onedims = [irr for irr in entry.irreps if irr.dim == 1]
        h = FoldedFunction.random(G, 2, seed=3)
        _, digits = point_ranks(G, 2)
        total = G.order**2
        for i in range(2):
            for j in range(2):
                g_vals = np.array([two.matrices[v][i, j] for v in h.table])
                for ca in onedims:
                    for cb in onedims:
                        chi_a = np.array([ca.matrices[x][0, 0] for x in digits[:, 0]])
                        chi_b = np.array([cb.matrices[x][0, 0] for x in digits[:, 1]])
                        coeff = np.sum(g_vals * np.conj(chi_a * chi_b)) / total
                        assert abs(coeff) < 1e-9, (gname, i, j, ca.name, cb.name)


def test_folded_subgroup_constant_coefficients_vanish(catalog_groups):
    # abelian version: compose a folded function with a character that is not
    # constant on H_S; every coefficient indexed purely by H_S-constant
    # characters must vanish, and some mixed coefficient must not
    G, hs_elements = hs_for_pair(catalog_groups)
    basis = gl.characters(G)
    const = constant_on(basis, hs_elements)
    h = FoldedFunction.random(G, 2, seed=7)
    for rho in np.flatnonzero(~const)[:3]:
        coeff = gl.fourier_transform(G, 2, h.table, int(rho))
        block = coeff[np.ix_(const, const)]
        assert np.abs(block).max() < 1e-9
        assert np.abs(coeff).max() > 1e-6


def test_folded_constant_coefficients_no_vacuity(catalog_groups):
    # sanity for the previous test: a non-folded function does not show the
    # same vanishing pattern, so the assertion has teeth
    G, hs_elements = hs_for_pair(catalog_groups)
    basis = gl.characters(G)
    const = constant_on(basis, hs_elements)
    rng = np.random.default_rng(9)
    rho = int(np.flatnonzero(~const)[0])
    maxima = []
    for _ in range(5):
        values = rng.integers(0, 16, size=256)
        coeff = gl.fourier_transform(G, 2, values, rho)
        maxima.append(np.abs(coeff[np.ix_(const, const)]).max())
    assert max(maxima) > 1e-3
