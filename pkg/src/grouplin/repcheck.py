"""Representation-theoretic gap checks for target sets.

Two quantities certify that a target set S is useful: the epsilon gap keeps
every 1-dimensional character that is not constant on H_S bounded away from
modulus one on S, and the operator-norm gap does the same for the averaged
higher-dimensional irreducibles. The 1-dimensional characters come from the
abelianization of G with exact integer phases; the 2-dimensional
irreducibles ship as a data file of monomial matrices whose entries are
roots of unity, regenerable from hardcoded generator images.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources

import numpy as np

from .approx import quotient_by
from .fourier import characters
from .groups import commutator_subgroup, make_group
from .hs import compute_hs

CATALOG_RESOURCE = "data/irreps.json"

# generator images as monomial matrices; entry None is zero, entry k is
# exp(2j*pi*k/root_order)
_GENERATOR_IMAGES = {
    "S3": [
        ("trivial", 1, {3: [[0]], 2: [[0]]}),
        ("sign", 2, {3: [[0]], 2: [[1]]}),
        ("twodim", 3, {3: [[1, None], [None, 2]], 2: [[None, 0], [0, None]]}),
    ],
    "D4": [
        ("trivial", 1, {1: [[0]], 4: [[0]]}),
        ("chi_10", 2, {1: [[1]], 4: [[0]]}),
        ("chi_01", 2, {1: [[0]], 4: [[1]]}),
        ("chi_11", 2, {1: [[1]], 4: [[1]]}),
        ("twodim", 4, {1: [[1, None], [None, 3]], 4: [[None, 0], [0, None]]}),
    ],
    "Q8": [
        ("trivial", 1, {2: [[0]], 4: [[0]]}),
        ("chi_10", 2, {2: [[1]], 4: [[0]]}),
        ("chi_01", 2, {2: [[0]], 4: [[1]]}),
        ("chi_11", 2, {2: [[1]], 4: [[1]]}),
        ("twodim", 4, {2: [[1, None], [None, 3]], 4: [[None, 0], [2, None]]}),
    ],
}


@dataclass(frozen=True, eq=False)
class Irrep:
    """One irreducible representation: exact monomial entries plus the
    complex matrices, indexed by element ID."""

    name: str
    dim: int
    root_order: int
    exact: tuple
    matrices: np.ndarray


@dataclass(frozen=True, eq=False)
class IrrepCatalogEntry:
    group_name: str
    group: object
    irreps: tuple


class HypothesisNotMet(Exception):
    """The operator-norm bound was requested without its generating hypothesis."""


def _mono_mul(a, b, root_order):
    """Product of monomial matrices with exponent entries, exact."""
    dim = len(a)
    out = [[None] * dim for _ in range(dim)]
    for i in range(dim):
        for l in range(dim):
            if a[i][l] is None:
                continue
            for j in range(dim):
                if b[l][j] is None:
                    continue
                if out[i][j] is not None:
                    raise ValueError("product of monomial matrices gained a second term")
                out[i][j] = (a[i][l] + b[l][j]) % root_order
    return tuple(tuple(row) for row in out)


def _mono_identity(dim):
    return tuple(tuple(0 if i == j else None for j in range(dim)) for i in range(dim))


def exact_to_complex(exact, root_order):
    dim = len(exact)
    out = np.zeros((dim, dim), dtype=np.complex128)
    for i in range(dim):
        for j in range(dim):
            k = exact[i][j]
            if k is not None:
                out[i, j] = np.exp(2j * np.pi * k / root_order)
    return out


def _generate_irrep(group, name, root_order, images):
    """Extend generator images to the whole group by ρ(g*s) = ρ(g)ρ(s).

    Every multiplication is checked against previously reached elements, and
    the full homomorphism property is verified exactly afterwards.
    """
    dim = len(next(iter(images.values())))
    exact_images = {
        g: tuple(tuple(row) for row in mat) for g, mat in images.items()
    }
    known = {group.identity: _mono_identity(dim)}
    frontier = [group.identity]
    while frontier:
        nxt = []
        for g in frontier:
            for s, ms in exact_images.items():
                t = group.op(g, s)
                mat = _mono_mul(known[g], ms, root_order)
                if t in known:
                    if known[t] != mat:
                        raise ValueError(f"{name}: inconsistent images at element {t}")
                else:
                    known[t] = mat
                    nxt.append(t)
        frontier = nxt
    if len(known) != group.order:
        raise ValueError(f"{name}: generators do not reach the whole group")
    for a in range(group.order):
        for b in range(group.order):
            if known[group.op(a, b)] != _mono_mul(known[a], known[b], root_order):
                raise ValueError(f"{name}: not a homomorphism at ({a}, {b})")
    exact = tuple(known[g] for g in range(group.order))
    matrices = np.stack([exact_to_complex(m, root_order) for m in exact])
    return Irrep(name=name, dim=dim, root_order=root_order, exact=exact, matrices=matrices)


def build_reference_catalog():
    """Catalog rebuilt from generator images; the shipped data file must match."""
    catalog = {}
    for group_name, spec_list in _GENERATOR_IMAGES.items():
        group = make_group(group_name)
        irreps = tuple(
            _generate_irrep(group, name, root, images) for name, root, images in spec_list
        )
        catalog[group_name] = IrrepCatalogEntry(
            group_name=group_name, group=group, irreps=irreps
        )
    return catalog


def catalog_to_json(catalog):
    doc = {}
    for group_name, entry in sorted(catalog.items()):
        doc[group_name] = {
            "irreps": [
                {
                    "name": ir.name,
                    "dim": ir.dim,
                    "root_order": ir.root_order,
                    "matrices": [[list(row) for row in mat] for mat in ir.exact],
                }
                for ir in entry.irreps
            ]
        }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def load_catalog():
    """The shipped irrep catalog, with matrices realized as complex arrays."""
    text = resources.files("grouplin").joinpath(CATALOG_RESOURCE).read_text("utf-8")
    doc = json.loads(text)
    catalog = {}
    for group_name, body in doc.items():
        group = make_group(group_name)
        irreps = []
        for item in body["irreps"]:
            # one matrix per element, each a dim x dim nested tuple
            exact = tuple(
                tuple(tuple(None if v is None else int(v) for v in row) for row in mat)
                for mat in item["matrices"]
            )
            if len(exact) != group.order:
                raise ValueError(
                    f"{group_name}/{item['name']}: {len(exact)} matrices for a group "
                    f"of order {group.order}"
                )
            matrices = np.stack(
                [exact_to_complex(m, item["root_order"]) for m in exact]
            )
            irreps.append(
                Irrep(
                    name=item["name"],
                    dim=int(item["dim"]),
                    root_order=int(item["root_order"]),
                    exact=exact,
                    matrices=matrices,
                )
            )
        catalog[group_name] = IrrepCatalogEntry(
            group_name=group_name, group=group, irreps=tuple(irreps)
        )
    return catalog


@dataclass(frozen=True)
class CatalogCheck:
    """Numeric defects of a catalog entry; all should sit at rounding level."""

    hom_defect: float
    unitary_defect: float
    orthogonality_defect: float
    dims_complete: bool


def catalog_defects(entry):
    group = entry.group
    n = group.order
    hom = 0.0
    unitary = 0.0
    for ir in entry.irreps:
        mats = ir.matrices
        eye = np.eye(ir.dim)
        for a in range(n):
            unitary = max(unitary, float(np.abs(mats[a] @ mats[a].conj().T - eye).max()))
            prod = mats[a] @ mats
            hom = max(hom, float(np.abs(prod - mats[group.op_table[a]]).max()))
    chars = np.array([[np.trace(ir.matrices[g]) for g in range(n)] for ir in entry.irreps])
    gram = (chars @ chars.conj().T) / n
    orth = float(np.abs(gram - np.eye(len(entry.irreps))).max())
    dims_ok = sum(ir.dim**2 for ir in entry.irreps) == n
    return CatalogCheck(
        hom_defect=hom,
        unitary_defect=unitary,
        orthogonality_defect=orth,
        dims_complete=dims_ok,
    )


@dataclass(frozen=True, eq=False)
class Characters1D:
    """All 1-dimensional characters of G, pulled back from the abelianization.

    phase[c, g] is exact in units of 2*pi/lcm_order.
    """

    group: object
    lcm_order: int
    phase: np.ndarray
    values: np.ndarray

    @property
    def count(self):
        return self.phase.shape[0]


def enumerate_1dim_characters(group):
    comm = commutator_subgroup(group)
    ab = quotient_by(group, comm)
    basis = characters(ab.group)
    phase = basis.phase[:, ab.project_table]
    values = np.exp(2j * np.pi * phase / basis.lcm_order)
    return Characters1D(group=group, lcm_order=basis.lcm_order, phase=phase, values=values)


@dataclass(frozen=True)
class GapReport:
    """Result of one gap computation over a family of characters or irreps.

    items pairs each checked object with |E_{s in S} rho(s^-1)| (modulus or
    operator norm); gap = 1 - max over items. vacuous means nothing was
    checked. hypothesis_met reports the generating condition where one is
    required, None otherwise. formula_gap is the closed-form worst-case
    bound, for information only.
    """

    kind: str
    items: tuple
    max_value: float
    gap: float
    n_constant: int
    n_nonconstant: int
    vacuous: bool
    hypothesis_met: object = None
    formula_gap: float = None


def check_epsilon_gap(group, s_set):
    """Gap of 1-dimensional characters not constant on H_S, evaluated on S.

    For such a character the values on S cannot all agree (else it would be
    constant on H_S), so the gap is strictly positive whenever any character
    qualifies; with none the report is vacuous.
    """
    hs = compute_hs(group, s_set)
    chars = enumerate_1dim_characters(group)
    h_idx = np.array(hs.subgroup.elements, dtype=np.int64)
    const = (chars.phase[:, h_idx] == 0).all(axis=1)
    s_idx = np.array(sorted(set(int(s) for s in s_set)), dtype=np.int64)
    means = np.abs(chars.values[:, group.inv_table[s_idx]].mean(axis=1))
    items = tuple(
        (f"char{c}", float(means[c])) for c in range(chars.count) if not const[c]
    )
    vacuous = not items
    max_value = max((v for _, v in items), default=0.0)
    order = group.order
    formula = 1.0 - abs((order - 1 + np.exp(2j * np.pi / order)) / order)
    return GapReport(
        kind="epsilon",
        items=items,
        max_value=max_value,
        gap=1.0 - max_value,
        n_constant=int(const.sum()),
        n_nonconstant=int((~const).sum()),
        vacuous=vacuous,
        hypothesis_met=True,
        formula_gap=float(formula),
    )


def check_operator_norm_gap(entry, s_set, strict=False):
    """Gap of the catalog's dim >= 2 irreps averaged over S inverses.

    The strict bound needs S^-1 S to generate H_S; hypothesis_met records
    whether it does, and the gap is still reported when it does not. With
    strict=True a missing hypothesis raises HypothesisNotMet instead.
    """
    group = entry.group
    hs = compute_hs(group, s_set)
    if strict and not hs.generated_by_SinvS:
        raise HypothesisNotMet(
            "S^-1 S does not generate H_S, the operator-norm bound is not certified"
        )
    s_idx = np.array(sorted(set(int(s) for s in s_set)), dtype=np.int64)
    inv_idx = group.inv_table[s_idx]
    items = []
    for ir in entry.irreps:
        if ir.dim < 2:
            continue
        avg = ir.matrices[inv_idx].mean(axis=0)
        items.append((ir.name, float(np.linalg.norm(avg, 2))))
    items = tuple(items)
    vacuous = not items
    max_value = max((v for _, v in items), default=0.0)
    n_big = len(items)
    return GapReport(
        kind="operator-norm",
        items=items,
        max_value=max_value,
        gap=1.0 - max_value,
        n_constant=len(entry.irreps) - n_big,
        n_nonconstant=n_big,
        vacuous=vacuous,
        hypothesis_met=hs.generated_by_SinvS,
        formula_gap=None,
    )
