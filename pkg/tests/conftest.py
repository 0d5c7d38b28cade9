"""Shared fixtures: the small-group catalog and compiled-kernel warmup."""

import numpy as np
import pytest

import grouplin as gl

CATALOG_NAMES = ("Z2", "Z3", "Z4", "Z6", "Z4xZ4", "S3", "D4", "Q8")


@pytest.fixture(scope="session")
def catalog_groups():
    return {name: gl.make_group(name) for name in CATALOG_NAMES}


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    # compile the hot kernels once so timed tests measure runtime, not compilation
    group = gl.cyclic(3)
    inst, _ = gl.generate_planted(group, (1,), 2, 3, 4, seed=0)
    gl.solve_pipeline(inst, seed=0)
    gl.brute_force(inst)
    gl.baseline_random(inst)
    cfg = gl.TestConfig(group=group, s_set=(1,), num_vars=2, samples=64, seed=0)
    gl.run_test(cfg, gl.make_strategy("dictator"))


def random_subset(rng, order):
    while True:
        mask = rng.random(order) < rng.uniform(0.1, 0.9)
        ids = tuple(int(i) for i in np.flatnonzero(mask))
        if ids:
            return ids
