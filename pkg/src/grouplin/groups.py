"""Finite groups as immutable dense operation tables, with subgroup and quotient machinery.

Elements are integer IDs in [0, order). All structure (operation, inverses,
identity) lives in validated numpy tables, so downstream code treats every
group uniformly whether it came from a constructor or a Cayley-table file.
"""

from __future__ import annotations

import itertools
import os
import re
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .snf import smith_normal_form

MAX_ORDER = 256
_EXHAUSTIVE_ASSOC_LIMIT = 64
_ASSOC_SAMPLES = 20000


class GroupError(ValueError):
    """Base class for group construction and usage errors."""


class MalformedTableError(GroupError):
    pass


class NonAssociativeTableError(GroupError):
    pass


class MissingIdentityError(GroupError):
    pass


class MissingInverseError(GroupError):
    pass


class InvalidElementError(GroupError):
    pass


class NotNormalError(GroupError):
    pass


class UnknownGroupError(GroupError):
    pass


class FiniteGroup:
    """A finite group given by its multiplication table.

    op_table[a, b] is the ID of a*b. The identity and inverse table are
    derived and checked during construction; tables are frozen afterwards.
    """

    def __init__(self, op_table, name, element_labels=None):
        op = np.ascontiguousarray(np.asarray(op_table, dtype=np.int64))
        if op.ndim != 2 or op.shape[0] != op.shape[1]:
            raise MalformedTableError(f"operation table must be square, got shape {op.shape}")
        order = op.shape[0]
        if order == 0:
            raise MalformedTableError("group must have at least one element")
        if order > MAX_ORDER:
            raise MalformedTableError(f"group order {order} exceeds the supported maximum {MAX_ORDER}")
        if op.min() < 0 or op.max() >= order:
            raise MalformedTableError("operation table entries must be element IDs in [0, order)")
        self.order = order
        self.op_table = op
        self.name = name
        if element_labels is not None:
            if len(element_labels) != order:
                raise MalformedTableError("label count does not match group order")
            element_labels = tuple(str(l) for l in element_labels)
        self.element_labels = element_labels
        self.identity = self._find_identity()
        self.inv_table = self._build_inverses()
        self._check_associativity()
        self.op_table.flags.writeable = False
        self.inv_table.flags.writeable = False

    def _find_identity(self):
        rng = np.arange(self.order)
        for e in range(self.order):
            if np.array_equal(self.op_table[e], rng) and np.array_equal(self.op_table[:, e], rng):
                return e
        raise MissingIdentityError(f"table of order {self.order} has no two-sided identity")

    def _build_inverses(self):
        inv = np.full(self.order, -1, dtype=np.int64)
        rows, cols = np.nonzero(self.op_table == self.identity)
        for a, b in zip(rows, cols):
            if inv[a] == -1:
                inv[a] = b
        for a in range(self.order):
            b = inv[a]
            if b == -1 or self.op_table[b, a] != self.identity:
                raise MissingInverseError(f"element {a} has no two-sided inverse")
        return inv

    def _check_associativity(self):
        op = self.op_table
        n = self.order
        if n <= _EXHAUSTIVE_ASSOC_LIMIT:
            left = op[op, :]
            right = op[:, op]
            bad = np.argwhere(left != right)
            if len(bad):
                a, b, c = (int(v) for v in bad[0])
                raise NonAssociativeTableError(f"(a*b)*c != a*(b*c) for a={a}, b={b}, c={c}")
        else:
            rng = np.random.default_rng(0)
            a = rng.integers(0, n, _ASSOC_SAMPLES)
            b = rng.integers(0, n, _ASSOC_SAMPLES)
            c = rng.integers(0, n, _ASSOC_SAMPLES)
            bad = np.nonzero(op[op[a, b], c] != op[a, op[b, c]])[0]
            if len(bad):
                t = bad[0]
                raise NonAssociativeTableError(
                    f"(a*b)*c != a*(b*c) for a={a[t]}, b={b[t]}, c={c[t]}"
                )

    def op(self, a, b):
        return int(self.op_table[a, b])

    def inv(self, a):
        return int(self.inv_table[a])

    def elements(self):
        return range(self.order)

    def label(self, a):
        if self.element_labels is None:
            return str(a)
        return self.element_labels[a]

    def is_abelian(self):
        return bool(np.array_equal(self.op_table, self.op_table.T))

    def element_order(self, a):
        self.check_element(a)
        x = a
        k = 1
        while x != self.identity:
            x = self.op(x, a)
            k += 1
        return k

    def check_element(self, a):
        if not (isinstance(a, (int, np.integer)) and 0 <= a < self.order):
            raise InvalidElementError(f"{a!r} is not an element ID of {self.name} (order {self.order})")

    def __repr__(self):
        return f"FiniteGroup({self.name!r}, order={self.order})"


@dataclass(frozen=True)
class Subgroup:
    """A validated subgroup, stored as a sorted tuple of element IDs."""

    parent: FiniteGroup
    elements: tuple

    def __post_init__(self):
        elems = tuple(sorted(int(e) for e in set(self.elements)))
        object.__setattr__(self, "elements", elems)
        if not elems:
            raise InvalidElementError("a subgroup cannot be empty")
        for e in elems:
            self.parent.check_element(e)
        idx = np.array(elems, dtype=np.int64)
        mask = np.zeros(self.parent.order, dtype=np.bool_)
        mask[idx] = True
        if not mask[self.parent.identity]:
            raise InvalidElementError("subgroup does not contain the identity")
        if not mask[self.parent.op_table[np.ix_(idx, idx)]].all():
            raise InvalidElementError("element set is not closed under the group operation")
        object.__setattr__(self, "_mask", mask)

    @property
    def order(self):
        return len(self.elements)

    @property
    def mask(self):
        return self._mask

    def contains(self, a):
        return bool(self._mask[a])

    def __contains__(self, a):
        return self.contains(a)


class QuotientGroup:
    """The quotient G/H for a normal subgroup H, with canonical coset representatives.

    coset_reps[i] is the minimum element ID of coset i and the reps are sorted,
    so coset indices are deterministic. project maps element IDs to coset
    indices; group carries the quotient's own multiplication table. When the
    quotient is abelian, abelian_invariants lists cyclic orders d_1 | ... | d_m
    and iso_to_vec / iso_from_vec realize Q = Z_{d_1} x ... x Z_{d_m}.
    """

    def __init__(self, parent, normal_sub):
        if normal_sub.parent is not parent:
            raise InvalidElementError("subgroup belongs to a different group")
        if not normal_test(parent, normal_sub):
            raise NotNormalError("subgroup is not normal, quotient undefined")
        self.parent = parent
        self.normal_sub = normal_sub
        h_idx = np.array(normal_sub.elements, dtype=np.int64)
        # left coset of each element, identified by its minimum member
        coset_min = parent.op_table[:, h_idx].min(axis=1)
        reps = np.unique(coset_min)
        rep_index = {int(r): i for i, r in enumerate(reps)}
        self.coset_reps = [int(r) for r in reps]
        self.project_table = np.array([rep_index[int(r)] for r in coset_min], dtype=np.int64)
        q_op = self.project_table[parent.op_table[np.ix_(reps, reps)]]
        labels = [f"[{parent.label(int(r))}]" for r in reps]
        self.group = FiniteGroup(q_op, name=f"{parent.name}/H{normal_sub.order}", element_labels=labels)
        self.coset_elements = [
            tuple(int(x) for x in np.sort(parent.op_table[r, h_idx])) for r in reps
        ]
        if self.group.is_abelian():
            invs, to_vec, from_vec = _abelian_decomposition(self.group)
            self.abelian_invariants = invs
            self._to_vec = to_vec
            self._from_vec = from_vec
        else:
            self.abelian_invariants = None
            self._to_vec = None
            self._from_vec = None

    @property
    def order(self):
        return self.group.order

    def project(self, a):
        return int(self.project_table[a])

    def iso_to_vec(self, q):
        if self._to_vec is None:
            raise GroupError("quotient is not abelian, no invariant decomposition")
        return self._to_vec[q]

    def iso_from_vec(self, vec):
        if self._from_vec is None:
            raise GroupError("quotient is not abelian, no invariant decomposition")
        if len(vec) != len(self.abelian_invariants):
            raise InvalidElementError(f"expected a length-{len(self.abelian_invariants)} tuple")
        key = tuple(int(v) % d for v, d in zip(vec, self.abelian_invariants))
        return self._from_vec[key]


def _abelian_decomposition(group):
    """Invariant factors of an abelian group plus explicit isomorphism maps.

    Greedy generators, discrete logs by breadth-first search, then Smith
    normal form of the relation lattice of the generator presentation.
    """
    n = group.order
    if n == 1:
        return [], {0: ()}, {(): 0}
    gens = []
    generated = generated_subgroup(group, [])
    for g in range(n):
        if not generated.contains(g):
            gens.append(g)
            generated = generated_subgroup(group, gens)
            if generated.order == n:
                break
    r = len(gens)
    dlog = {group.identity: tuple([0] * r)}
    frontier = [group.identity]
    while frontier:
        nxt = []
        for x in frontier:
            base = dlog[x]
            for j, g in enumerate(gens):
                y = group.op(x, g)
                if y not in dlog:
                    vec = list(base)
                    vec[j] += 1
                    dlog[y] = tuple(vec)
                    nxt.append(y)
        frontier = nxt
    rows = set()
    for j, g in enumerate(gens):
        row = [0] * r
        row[j] = group.element_order(g)
        rows.add(tuple(row))
    for q in range(n):
        dq = dlog[q]
        for j, g in enumerate(gens):
            dgq = dlog[group.op(g, q)]
            row = tuple(dq[t] + (1 if t == j else 0) - dgq[t] for t in range(r))
            if any(row):
                rows.add(row)
    rel = [list(row) for row in sorted(rows)]
    _, d_mat, v_mat = smith_normal_form(rel)
    diag = [d_mat[j][j] for j in range(r)]
    size = 1
    for d in diag:
        size *= d
    if size != n:
        raise GroupError("relation lattice does not pin down the group, decomposition failed")
    kept = [j for j in range(r) if diag[j] > 1]
    invariants = [diag[j] for j in kept]
    to_vec = {}
    for q in range(n):
        x = dlog[q]
        img = [sum(x[t] * v_mat[t][j] for t in range(r)) % diag[j] for j in range(r)]
        to_vec[q] = tuple(img[j] for j in kept)
    from_vec = {vec: q for q, vec in to_vec.items()}
    if len(from_vec) != n:
        raise GroupError("invariant coordinate map is not injective, decomposition failed")
    return invariants, to_vec, from_vec


# ---------------------------------------------------------------------------
# subgroup operations
# ---------------------------------------------------------------------------


def generated_subgroup(G, gens):
    """Smallest subgroup of G containing the given element IDs."""
    seed = np.zeros(G.order, dtype=np.bool_)
    for g in gens:
        G.check_element(g)
        seed[g] = True
    mask = _kernels.closure_mask(G.op_table, seed)
    return Subgroup(G, tuple(int(x) for x in np.flatnonzero(mask)))


def commutator_subgroup(G):
    """Subgroup generated by all commutators a^-1 b^-1 a b."""
    inv = G.inv_table
    ab = G.op_table
    a_inv_b_inv = G.op_table[inv[:, None], inv[None, :]]
    comms = np.unique(G.op_table[a_inv_b_inv, ab])
    return generated_subgroup(G, [int(c) for c in comms])


def normal_test(G, H):
    """True iff g H g^-1 = H for every g in G."""
    idx = np.array(H.elements, dtype=np.int64)
    gh = G.op_table[:, idx]
    ghg = G.op_table[gh, G.inv_table[:, None]]
    return bool(H.mask[ghg].all())


def quotient(G, H):
    """Quotient group G/H for a normal subgroup H."""
    return QuotientGroup(G, H)


# ---------------------------------------------------------------------------
# constructors
# ---------------------------------------------------------------------------


def cyclic(n):
    """Cyclic group Z_n with addition mod n."""
    if n < 1:
        raise MalformedTableError(f"cyclic group needs order >= 1, got {n}")
    ids = np.arange(n)
    op = (ids[:, None] + ids[None, :]) % n
    return FiniteGroup(op, name=f"Z{n}", element_labels=[str(i) for i in range(n)])


def product(*factors):
    """Direct product; element ID is the mixed-radix combination of factor IDs.

    The first factor is the most significant digit, so for Z4 x Z4 the pair
    (a, b) has ID 4a + b.
    """
    if not factors:
        raise MalformedTableError("direct product needs at least one factor")
    order = 1
    for f in factors:
        order *= f.order
    if order > MAX_ORDER:
        raise MalformedTableError(f"product order {order} exceeds the supported maximum {MAX_ORDER}")
    strides = []
    s = order
    for f in factors:
        s //= f.order
        strides.append(s)
    ids = np.arange(order)
    op = np.zeros((order, order), dtype=np.int64)
    for f, stride in zip(factors, strides):
        dig = (ids // stride) % f.order
        op += stride * f.op_table[dig[:, None], dig[None, :]]
    labels = []
    for i in range(order):
        parts = [f.label((i // stride) % f.order) for f, stride in zip(factors, strides)]
        labels.append("(" + ",".join(parts) + ")")
    name = "x".join(f.name for f in factors)
    return FiniteGroup(op, name=name, element_labels=labels)


def dihedral(n):
    """Dihedral group D_n of order 2n; element a + n*b stands for r^a s^b."""
    if n < 1:
        raise MalformedTableError(f"dihedral group needs n >= 1, got {n}")
    order = 2 * n
    if order > MAX_ORDER:
        raise MalformedTableError(f"dihedral order {order} exceeds the supported maximum {MAX_ORDER}")
    op = np.zeros((order, order), dtype=np.int64)
    for a1 in range(n):
        for b1 in range(2):
            for a2 in range(n):
                for b2 in range(2):
                    a = (a1 + (a2 if b1 == 0 else -a2)) % n
                    b = (b1 + b2) % 2
                    op[a1 + n * b1, a2 + n * b2] = a + n * b
    labels = [f"r{a}" for a in range(n)] + [f"r{a}s" for a in range(n)]
    return FiniteGroup(op, name=f"D{n}", element_labels=labels)


def symmetric(n):
    """Symmetric group S_n (n <= 5), permutations in lexicographic one-line order.

    Composition is (p*q)(x) = p(q(x)), apply the right factor first.
    """
    if not 1 <= n <= 5:
        raise MalformedTableError(f"symmetric group supported for 1 <= n <= 5, got {n}")
    perms = sorted(itertools.permutations(range(n)))
    index = {p: i for i, p in enumerate(perms)}
    size = len(perms)
    op = np.zeros((size, size), dtype=np.int64)
    for i, p in enumerate(perms):
        for j, q in enumerate(perms):
            op[i, j] = index[tuple(p[q[x]] for x in range(n))]
    labels = ["(" + ",".join(map(str, p)) + ")" for p in perms]
    return FiniteGroup(op, name=f"S{n}", element_labels=labels)


def quaternion():
    """Quaternion group Q8 with elements 1, -1, i, -i, j, -j, k, -k."""
    # axis products with signs: table[a][b] = (sign, axis) for unit axes 1,i,j,k
    unit = {
        (0, 0): (1, 0), (0, 1): (1, 1), (0, 2): (1, 2), (0, 3): (1, 3),
        (1, 0): (1, 1), (1, 1): (-1, 0), (1, 2): (1, 3), (1, 3): (-1, 2),
        (2, 0): (1, 2), (2, 1): (-1, 3), (2, 2): (-1, 0), (2, 3): (1, 1),
        (3, 0): (1, 3), (3, 1): (1, 2), (3, 2): (-1, 1), (3, 3): (-1, 0),
    }
    def to_id(sign, axis):
        return 2 * axis + (0 if sign == 1 else 1)
    op = np.zeros((8, 8), dtype=np.int64)
    for ida in range(8):
        sa, aa = (1 if ida % 2 == 0 else -1), ida // 2
        for idb in range(8):
            sb, ab = (1 if idb % 2 == 0 else -1), idb // 2
            s, ax = unit[(aa, ab)]
            op[ida, idb] = to_id(s * sa * sb, ax)
    labels = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]
    return FiniteGroup(op, name="Q8", element_labels=labels)


_ATOM_RE = re.compile(r"^(Z|S|D)(\d+)$")


def make_group(descriptor):
    """Build a group from a descriptor like 'Z4', 'Z4xZ4', 'S3', 'D4', 'Q8' or 'file:path'."""
    descriptor = descriptor.strip()
    if not descriptor:
        raise UnknownGroupError("empty group descriptor")
    if descriptor.startswith("file:"):
        return read_cayley_file(descriptor[len("file:"):])
    factors = []
    for atom in descriptor.split("x"):
        if atom == "Q8":
            factors.append(quaternion())
            continue
        m = _ATOM_RE.match(atom)
        if not m:
            raise UnknownGroupError(f"unknown group descriptor {atom!r} in {descriptor!r}")
        kind, num = m.group(1), int(m.group(2))
        if kind == "Z":
            factors.append(cyclic(num))
        elif kind == "S":
            factors.append(symmetric(num))
        else:
            factors.append(dihedral(num))
    if len(factors) == 1:
        return factors[0]
    return product(*factors)


def read_cayley_file(path):
    """Parse a Cayley-table file: `order n`, optional `labels ...`, then n table rows."""
    with open(path, "r", encoding="utf-8") as fh:
        raw = fh.read()
    lines = []
    for lineno, line in enumerate(raw.splitlines(), start=1):
        text = line.split("#", 1)[0].strip()
        if text:
            lines.append((lineno, text))
    if not lines:
        raise MalformedTableError(f"{path}: empty Cayley-table file")
    lineno, first = lines[0]
    parts = first.split()
    if len(parts) != 2 or parts[0] != "order":
        raise MalformedTableError(f"{path}:{lineno}: expected 'order n', got {first!r}")
    try:
        order = int(parts[1])
    except ValueError:
        raise MalformedTableError(f"{path}:{lineno}: order is not an integer") from None
    if order < 1:
        raise MalformedTableError(f"{path}:{lineno}: order must be positive")
    rest = lines[1:]
    labels = None
    if rest and rest[0][1].split()[0] == "labels":
        tokens = rest[0][1].split()[1:]
        if len(tokens) != order:
            raise MalformedTableError(f"{path}:{rest[0][0]}: expected {order} labels, got {len(tokens)}")
        labels = tokens
        rest = rest[1:]
    if len(rest) != order:
        raise MalformedTableError(f"{path}: expected {order} table rows, got {len(rest)}")
    table = []
    for lineno, text in rest:
        row = text.split()
        if len(row) != order:
            raise MalformedTableError(f"{path}:{lineno}: expected {order} entries, got {len(row)}")
        try:
            table.append([int(x) for x in row])
        except ValueError:
            raise MalformedTableError(f"{path}:{lineno}: non-integer table entry") from None
    name = os.path.splitext(os.path.basename(path))[0]
    return FiniteGroup(np.array(table, dtype=np.int64), name=name, element_labels=labels)


def write_cayley_file(group, path):
    """Serialize a group to the Cayley-table file format."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"order {group.order}\n")
        if group.element_labels is not None and all(" " not in l for l in group.element_labels):
            fh.write("labels " + " ".join(group.element_labels) + "\n")
        for a in range(group.order):
            fh.write(" ".join(str(int(x)) for x in group.op_table[a]) + "\n")
