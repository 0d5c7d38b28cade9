"""Approximation toolkit for product constraints over finite groups.

The library builds finite groups as dense operation tables, computes the
minimal coset-normal subgroup H_S of a target set, projects constraint
instances to the abelian quotient, solves the resulting linear systems
exactly, and lifts solutions back with a derandomized rounding step. A
dictatorship-test simulator and representation-theoretic gap checks round
out the toolkit.
"""

from .abelian import AbelianSolution, AbelianSystem, solve, solve_via_snf, verify
from .approx import (
    SolveReport,
    baseline_random,
    brute_force,
    derandomize,
    project_instance,
    quotient_by,
    round_solution,
    solve_pipeline,
)
from .dictatorship import TestConfig, TestResult, make_strategy, run_test, wilson_interval
from .fourier import (
    FoldedFunction,
    FourierTable,
    InfluenceResult,
    characters,
    fourier_transform,
    modified_influence,
)
from .groups import (
    FiniteGroup,
    GroupError,
    QuotientGroup,
    Subgroup,
    commutator_subgroup,
    cyclic,
    dihedral,
    generated_subgroup,
    make_group,
    normal_test,
    product,
    quaternion,
    quotient,
    read_cayley_file,
    symmetric,
    write_cayley_file,
)
from .hs import HsResult, brute_force_hs, compute_hs, subgroup_lattice
from .instances import (
    Instance,
    InstanceParseError,
    evaluate,
    generate_noisy,
    generate_planted,
    parse_instance,
    read_instance_file,
    serialize_instance,
    write_instance_file,
)
from .repcheck import (
    GapReport,
    HypothesisNotMet,
    build_reference_catalog,
    catalog_defects,
    check_epsilon_gap,
    check_operator_norm_gap,
    enumerate_1dim_characters,
    load_catalog,
)
from .snf import smith_normal_form

__version__ = "0.1.0"

__all__ = [
    "AbelianSolution",
    "AbelianSystem",
    "FiniteGroup",
    "FoldedFunction",
    "FourierTable",
    "GapReport",
    "GroupError",
    "HsResult",
    "HypothesisNotMet",
    "InfluenceResult",
    "Instance",
    "InstanceParseError",
    "QuotientGroup",
    "SolveReport",
    "Subgroup",
    "TestConfig",
    "TestResult",
    "baseline_random",
    "brute_force",
    "brute_force_hs",
    "build_reference_catalog",
    "catalog_defects",
    "characters",
    "check_epsilon_gap",
    "check_operator_norm_gap",
    "commutator_subgroup",
    "compute_hs",
    "cyclic",
    "derandomize",
    "dihedral",
    "enumerate_1dim_characters",
    "evaluate",
    "fourier_transform",
    "generate_noisy",
    "generate_planted",
    "generated_subgroup",
    "load_catalog",
    "make_group",
    "make_strategy",
    "modified_influence",
    "normal_test",
    "parse_instance",
    "product",
    "project_instance",
    "quaternion",
    "quotient",
    "quotient_by",
    "read_cayley_file",
    "read_instance_file",
    "round_solution",
    "run_test",
    "serialize_instance",
    "smith_normal_form",
    "solve",
    "solve_pipeline",
    "solve_via_snf",
    "subgroup_lattice",
    "symmetric",
    "verify",
    "wilson_interval",
    "write_cayley_file",
    "write_instance_file",
]
