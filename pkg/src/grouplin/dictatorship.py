"""Three-query acceptance test that dictators pass with probability one.

The tester draws x, y uniformly from G^n and a target vector s from S^n,
sets z_i = y_i^-1 * x_i^-1 * s_i, and accepts a strategy f when
f(x)*f(y)*f(z) lands in S. A dictator f(x) = x_j always passes because the
coordinate products telescope to s_j. Lifted and random strategies pass at
their per-constraint rates, which the test estimates with a Wilson interval.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .approx import quotient_by
from .hs import compute_hs

CHUNK = 1 << 14
MAX_TABLE = 1 << 16
Z_95 = 1.959963984540054


@dataclass(frozen=True)
class TestConfig:
    """Test parameters: the group, target set, arity of the strategy input,
    sample count, RNG seed, and per-coordinate resampling noise."""

    group: object
    s_set: tuple
    num_vars: int
    samples: int
    seed: int
    noise: float = 0.0


@dataclass(frozen=True)
class TestResult:
    accepted: int
    samples: int
    estimate: float
    ci_low: float
    ci_high: float


def wilson_interval(hits, total, z=Z_95):
    """Wilson score interval for a binomial proportion."""
    if total == 0:
        return 0.0, 1.0
    p = hits / total
    denom = 1.0 + z * z / total
    center = (p + z * z / (2 * total)) / denom
    half = z * math.sqrt(p * (1.0 - p) / total + z * z / (4.0 * total * total)) / denom
    return max(0.0, center - half), min(1.0, center + half)


class DictatorStrategy:
    """f(x) = x_j for a fixed coordinate j."""

    def __init__(self, coord):
        self.coord = coord

    def build(self, group, s_set, num_vars, rng):
        if not 0 <= self.coord < num_vars:
            raise ValueError(f"dictator coordinate {self.coord} outside 0..{num_vars - 1}")
        coord = self.coord
        return lambda pts: pts[:, coord].copy()


class TableStrategy:
    """f given by an explicit table over all of G^n in big-endian rank order."""

    def __init__(self, values):
        self.values = np.asarray(values, dtype=np.int64)

    def build(self, group, s_set, num_vars, rng):
        total = group.order**num_vars
        if total > MAX_TABLE:
            raise ValueError(f"table strategy limited to {MAX_TABLE} points, got {total}")
        if self.values.shape != (total,):
            raise ValueError(f"table has shape {self.values.shape}, expected ({total},)")
        table = self.values
        powers = group.order ** np.arange(num_vars - 1, -1, -1, dtype=np.int64)
        return lambda pts: table[pts @ powers]


class UniformRandomStrategy:
    """f drawn uniformly at random from all functions G^n -> G, memoized."""

    def build(self, group, s_set, num_vars, rng):
        total = group.order**num_vars
        if total <= MAX_TABLE:
            table = rng.integers(0, group.order, size=total, dtype=np.int64)
            powers = group.order ** np.arange(num_vars - 1, -1, -1, dtype=np.int64)
            return lambda pts: table[pts @ powers]
        memo = {}

        def evaluate(pts):
            out = np.empty(len(pts), dtype=np.int64)
            for r, row in enumerate(map(tuple, pts.tolist())):
                v = memo.get(row)
                if v is None:
                    v = int(rng.integers(0, group.order))
                    memo[row] = v
                out[r] = v
            return out

        return evaluate


class QuotientLiftStrategy:
    """f(x) = rep([x_1 + ... + x_n]_Q) * h(x) with h(x) uniform in H_S.

    The coset of the coordinate sum in Q = G/H_S determines the
    representative; the fresh H_S element is memoized per point so f is a
    well-defined function.
    """

    def build(self, group, s_set, num_vars, rng):
        hs = compute_hs(group, s_set)
        quot = quotient_by(group, hs.subgroup)
        op = group.op_table
        q_op = quot.group.op_table
        proj = quot.project_table
        reps = np.array(quot.coset_reps, dtype=np.int64)
        h_elems = np.array(hs.subgroup.elements, dtype=np.int64)
        total = group.order**num_vars
        if total <= MAX_TABLE:
            powers = group.order ** np.arange(num_vars - 1, -1, -1, dtype=np.int64)
            ranks = np.arange(total, dtype=np.int64)
            digits = (ranks[:, None] // powers[None, :]) % group.order
            qsum = proj[digits[:, 0]]
            for j in range(1, num_vars):
                qsum = q_op[qsum, proj[digits[:, j]]]
            lifts = h_elems[rng.integers(0, len(h_elems), size=total)]
            table = op[reps[qsum], lifts]
            return lambda pts: table[pts @ powers]
        memo = {}

        def evaluate(pts):
            out = np.empty(len(pts), dtype=np.int64)
            for r, row in enumerate(map(tuple, pts.tolist())):
                v = memo.get(row)
                if v is None:
                    q = proj[row[0]]
                    for g in row[1:]:
                        q = q_op[q, proj[g]]
                    h = h_elems[int(rng.integers(0, len(h_elems)))]
                    v = int(op[reps[q], h])
                    memo[row] = v
                out[r] = v
            return out

        return evaluate


def make_strategy(name, coord=0):
    if name == "dictator":
        return DictatorStrategy(coord)
    if name == "quotient_lift":
        return QuotientLiftStrategy()
    if name == "uniform_random":
        return UniformRandomStrategy()
    raise ValueError(f"unknown strategy {name!r}")


def run_test(config, strategy):
    """Estimate the strategy's acceptance probability by Monte Carlo.

    The per-sample draw order is fixed (x, y, s, then noise resampling), so
    results are reproducible for a given seed across backends.
    """
    G = config.group
    s_ids = sorted(set(int(s) for s in config.s_set))
    if not s_ids:
        raise ValueError("target set S must be nonempty")
    for s in s_ids:
        G.check_element(s)
    if config.num_vars < 1:
        raise ValueError("the strategy needs at least one input coordinate")
    if not 0.0 <= config.noise <= 1.0:
        raise ValueError(f"noise must lie in [0, 1], got {config.noise}")
    if config.samples < 1:
        raise ValueError("need at least one sample")
    order = G.order
    op = G.op_table
    inv = G.inv_table
    s_arr = np.array(s_ids, dtype=np.int64)
    s_mask = np.zeros(order, dtype=np.bool_)
    s_mask[s_arr] = True
    rng = np.random.default_rng(config.seed)
    strategy_rng = np.random.default_rng(rng.integers(0, 2**63))
    evaluate = strategy.build(G, tuple(s_ids), config.num_vars, strategy_rng)
    accepted = 0
    remaining = config.samples
    n = config.num_vars
    while remaining:
        t = min(CHUNK, remaining)
        remaining -= t
        x = rng.integers(0, order, size=(t, n), dtype=np.int64)
        y = rng.integers(0, order, size=(t, n), dtype=np.int64)
        s = s_arr[rng.integers(0, len(s_arr), size=(t, n))]
        z = op[op[inv[y], inv[x]], s]
        if config.noise > 0.0:
            mask = rng.random((t, n)) < config.noise
            x = np.where(mask, rng.integers(0, order, size=(t, n), dtype=np.int64), x)
            y = np.where(mask, rng.integers(0, order, size=(t, n), dtype=np.int64), y)
            z = np.where(mask, rng.integers(0, order, size=(t, n), dtype=np.int64), z)
        fx = evaluate(x)
        fy = evaluate(y)
        fz = evaluate(z)
        accepted += int(_kernels.triple_product_in_set(op, fx, fy, fz, s_mask))
    low, high = wilson_interval(accepted, config.samples)
    return TestResult(
        accepted=accepted,
        samples=config.samples,
        estimate=accepted / config.samples,
        ci_low=low,
        ci_high=high,
    )
