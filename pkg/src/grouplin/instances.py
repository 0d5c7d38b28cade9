"""Constraint instances: ordered products of shifted variables landing in S.

A constraint is a sequence of (shift, variable) pairs; an assignment
satisfies it when (a_1*x_{i_1})*(a_2*x_{i_2})*...*(a_k*x_{i_k}), evaluated
left to right, lands in the target set S. Instances carry a fixed arity k,
a variable count n, and a constraint list, and round-trip through a small
text format.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import _kernels
from .groups import FiniteGroup, make_group


class InstanceParseError(ValueError):
    """Raised for malformed instance files, with a line number in the message."""


class ElementRangeError(InstanceParseError):
    """Raised when an element ID falls outside 0..order-1."""


@dataclass(frozen=True, eq=False)
class Instance:
    """An arity-k constraint system over a finite group.

    constraints holds one tuple per constraint, each a k-tuple of
    (shift, variable) pairs. group_source is the descriptor string the
    group was built from, kept so serialization round-trips.
    """

    group: FiniteGroup
    group_source: str
    s_set: tuple
    arity: int
    num_vars: int
    constraints: tuple
    _shifts: np.ndarray = field(init=False, repr=False)
    _vars: np.ndarray = field(init=False, repr=False)
    _s_mask: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        order = self.group.order
        s_ids = tuple(sorted(set(int(s) for s in self.s_set)))
        if not s_ids:
            raise ValueError("target set S must be nonempty")
        for s in s_ids:
            if not 0 <= s < order:
                raise ElementRangeError(f"S contains element ID {s}, outside 0..{order - 1}")
        object.__setattr__(self, "s_set", s_ids)
        if self.arity < 2:
            raise ValueError(f"arity must be at least 2, got {self.arity}")
        if self.num_vars < 0:
            raise ValueError(f"variable count must be non-negative, got {self.num_vars}")
        rows = []
        for c_idx, con in enumerate(self.constraints):
            pairs = tuple((int(a), int(i)) for a, i in con)
            if len(pairs) != self.arity:
                raise ValueError(
                    f"constraint {c_idx} has {len(pairs)} terms, expected arity {self.arity}"
                )
            for a, i in pairs:
                if not 0 <= a < order:
                    raise ElementRangeError(
                        f"constraint {c_idx} has shift {a}, outside 0..{order - 1}"
                    )
                if not 0 <= i < self.num_vars:
                    raise ValueError(
                        f"constraint {c_idx} references variable {i}, "
                        f"but there are only {self.num_vars}"
                    )
            rows.append(pairs)
        object.__setattr__(self, "constraints", tuple(rows))
        m = len(rows)
        shifts = np.zeros((m, self.arity), dtype=np.int64)
        vars_ = np.zeros((m, self.arity), dtype=np.int64)
        for r, pairs in enumerate(rows):
            for j, (a, i) in enumerate(pairs):
                shifts[r, j] = a
                vars_[r, j] = i
        s_mask = np.zeros(order, dtype=np.bool_)
        s_mask[list(s_ids)] = True
        for arr in (shifts, vars_, s_mask):
            arr.flags.writeable = False
        object.__setattr__(self, "_shifts", shifts)
        object.__setattr__(self, "_vars", vars_)
        object.__setattr__(self, "_s_mask", s_mask)

    @property
    def num_constraints(self):
        return len(self.constraints)

    def __eq__(self, other):
        if not isinstance(other, Instance):
            return NotImplemented
        return (
            np.array_equal(self.group.op_table, other.group.op_table)
            and self.s_set == other.s_set
            and self.arity == other.arity
            and self.num_vars == other.num_vars
            and self.constraints == other.constraints
        )

    def __hash__(self):
        return hash((self.s_set, self.arity, self.num_vars, self.constraints))


def evaluate(instance, values):
    """Exact fraction of constraints satisfied by the assignment.

    An empty constraint list counts as fully satisfied.
    """
    vals = np.asarray(values, dtype=np.int64)
    if vals.shape != (instance.num_vars,):
        raise ValueError(
            f"assignment has shape {vals.shape}, expected ({instance.num_vars},)"
        )
    if vals.size and (vals.min() < 0 or vals.max() >= instance.group.order):
        raise ElementRangeError("assignment contains element IDs outside the group")
    if instance.num_constraints == 0:
        return Fraction(1)
    count = _kernels.count_satisfied(
        instance.group.op_table, vals, instance._shifts, instance._vars, instance._s_mask
    )
    return Fraction(int(count), instance.num_constraints)


def _planted_arrays(group, s_ids, arity, num_vars, num_constraints, rng):
    # distinct variables per constraint: sort random keys, keep first k columns
    order = group.order
    op = group.op_table
    inv = group.inv_table
    values = rng.integers(0, order, size=num_vars, dtype=np.int64)
    keys = rng.random((num_constraints, num_vars))
    vars_ = np.argsort(keys, axis=1)[:, :arity].astype(np.int64)
    shifts = np.zeros((num_constraints, arity), dtype=np.int64)
    shifts[:, : arity - 1] = rng.integers(
        0, order, size=(num_constraints, arity - 1), dtype=np.int64
    )
    targets = np.array(s_ids, dtype=np.int64)[
        rng.integers(0, len(s_ids), size=num_constraints)
    ]
    acc = op[shifts[:, 0], values[vars_[:, 0]]]
    for j in range(1, arity - 1):
        acc = op[acc, op[shifts[:, j], values[vars_[:, j]]]]
    # last shift forces the product onto the sampled target
    shifts[:, arity - 1] = op[op[inv[acc], targets], inv[values[vars_[:, arity - 1]]]]
    return shifts, vars_, values


def _arrays_to_constraints(shifts, vars_):
    return tuple(
        tuple((int(a), int(i)) for a, i in zip(srow, vrow))
        for srow, vrow in zip(shifts, vars_)
    )


def _check_generate_args(group, s_set, arity, num_vars, num_constraints):
    s_ids = sorted(set(int(s) for s in s_set))
    if not s_ids:
        raise ValueError("target set S must be nonempty")
    for s in s_ids:
        group.check_element(s)
    if arity < 2:
        raise ValueError(f"arity must be at least 2, got {arity}")
    if num_vars < arity:
        raise ValueError(
            f"need at least {arity} variables for distinct indices, got {num_vars}"
        )
    if num_constraints < 0:
        raise ValueError(f"constraint count must be non-negative, got {num_constraints}")
    return s_ids


def generate_planted(group, s_set, arity, num_vars, num_constraints, seed, name=None):
    """A random instance plus an assignment that satisfies every constraint.

    Each constraint samples k distinct variables and k-1 uniform shifts, then
    solves for the last shift so the planted assignment hits a uniformly
    chosen target in S.
    """
    s_ids = _check_generate_args(group, s_set, arity, num_vars, num_constraints)
    rng = np.random.default_rng(seed)
    shifts, vars_, values = _planted_arrays(
        group, s_ids, arity, num_vars, num_constraints, rng
    )
    inst = Instance(
        group=group,
        group_source=name if name is not None else group.name,
        s_set=tuple(s_ids),
        arity=arity,
        num_vars=num_vars,
        constraints=_arrays_to_constraints(shifts, vars_),
    )
    return inst, values


def generate_noisy(group, s_set, arity, num_vars, num_constraints, noise, seed, name=None):
    """A planted instance where each constraint is corrupted with probability
    noise by redrawing all of its shifts uniformly."""
    if not 0.0 <= noise <= 1.0:
        raise ValueError(f"noise must lie in [0, 1], got {noise}")
    s_ids = _check_generate_args(group, s_set, arity, num_vars, num_constraints)
    rng = np.random.default_rng(seed)
    shifts, vars_, _ = _planted_arrays(group, s_ids, arity, num_vars, num_constraints, rng)
    corrupt = rng.random(num_constraints) < noise
    fresh = rng.integers(0, group.order, size=(num_constraints, arity), dtype=np.int64)
    shifts = np.where(corrupt[:, None], fresh, shifts)
    return Instance(
        group=group,
        group_source=name if name is not None else group.name,
        s_set=tuple(s_ids),
        arity=arity,
        num_vars=num_vars,
        constraints=_arrays_to_constraints(shifts, vars_),
    )


def _meaningful_lines(text):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


def parse_instance(text, base_dir="."):
    """Parse the instance text format.

    Layout: a `group` line (name or file:path, the latter resolved against
    base_dir), an `S` line of element IDs, a `k .. n .. m ..` line, then
    exactly m constraint rows of alternating shift and variable tokens.
    Comments (#) and blank lines are skipped.
    """
    lines = list(_meaningful_lines(text))
    pos = 0

    def take(expect):
        nonlocal pos
        if pos >= len(lines):
            raise InstanceParseError(f"unexpected end of input, expected {expect} line")
        lineno, line = lines[pos]
        pos += 1
        return lineno, line

    lineno, line = take("group")
    parts = line.split()
    if len(parts) != 2 or parts[0] != "group":
        raise InstanceParseError(f"line {lineno}: expected 'group <descriptor>'")
    source = parts[1]
    if source.startswith("file:") and not os.path.isabs(source[5:]):
        group = make_group("file:" + os.path.join(base_dir, source[5:]))
    else:
        group = make_group(source)

    lineno, line = take("S")
    parts = line.split()
    if len(parts) < 2 or parts[0] != "S":
        raise InstanceParseError(f"line {lineno}: expected 'S <id> [<id> ...]'")
    try:
        s_ids = [int(tok) for tok in parts[1:]]
    except ValueError:
        raise InstanceParseError(f"line {lineno}: S entries must be integers") from None
    for s in s_ids:
        if not 0 <= s < group.order:
            raise ElementRangeError(
                f"line {lineno}: S contains element ID {s}, outside 0..{group.order - 1}"
            )

    lineno, line = take("k/n/m")
    parts = line.split()
    if len(parts) != 6 or parts[0] != "k" or parts[2] != "n" or parts[4] != "m":
        raise InstanceParseError(f"line {lineno}: expected 'k <int> n <int> m <int>'")
    try:
        arity, num_vars, num_constraints = int(parts[1]), int(parts[3]), int(parts[5])
    except ValueError:
        raise InstanceParseError(f"line {lineno}: k, n, m must be integers") from None

    constraints = []
    for _ in range(num_constraints):
        lineno, line = take("constraint")
        toks = line.split()
        if len(toks) != 2 * arity:
            raise InstanceParseError(
                f"line {lineno}: expected {2 * arity} tokens for an arity-{arity} "
                f"constraint, got {len(toks)}"
            )
        try:
            nums = [int(t) for t in toks]
        except ValueError:
            raise InstanceParseError(f"line {lineno}: constraint tokens must be integers") from None
        pairs = []
        for j in range(arity):
            a, i = nums[2 * j], nums[2 * j + 1]
            if not 0 <= a < group.order:
                raise ElementRangeError(
                    f"line {lineno}: shift {a} outside 0..{group.order - 1}"
                )
            if not 0 <= i < num_vars:
                raise InstanceParseError(
                    f"line {lineno}: variable index {i} outside 0..{num_vars - 1}"
                )
            pairs.append((a, i))
        constraints.append(tuple(pairs))
    if pos < len(lines):
        lineno, _ = lines[pos]
        raise InstanceParseError(f"line {lineno}: trailing content after {num_constraints} constraints")

    try:
        return Instance(
            group=group,
            group_source=source,
            s_set=tuple(s_ids),
            arity=arity,
            num_vars=num_vars,
            constraints=tuple(constraints),
        )
    except ElementRangeError:
        raise
    except ValueError as exc:
        raise InstanceParseError(str(exc)) from None


def serialize_instance(instance):
    lines = [
        f"group {instance.group_source}",
        "S " + " ".join(str(s) for s in instance.s_set),
        f"k {instance.arity} n {instance.num_vars} m {instance.num_constraints}",
    ]
    for con in instance.constraints:
        lines.append(" ".join(f"{a} {i}" for a, i in con))
    return "\n".join(lines) + "\n"


def read_instance_file(path):
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    return parse_instance(text, base_dir=os.path.dirname(os.path.abspath(path)))


def write_instance_file(instance, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize_instance(instance))
