"""Command-line front end: one subcommand per library operation.

Exit codes: 0 on success, 1 on a domain error (bad instance, oversized
brute force, unknown group), 2 on a usage error. Machine-readable output is
available with --report json where a text form exists; simulate and
check-reps always emit JSON. bench writes a CSV with one row per
(instance, mode) pair.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
import time

from . import approx, dictatorship, instances, repcheck
from .groups import make_group
from .hs import compute_hs

_MODES = ("derand", "rand", "baseline", "brute")


def _fraction_fields(prefix, value):
    return {f"{prefix}_num": value.numerator, f"{prefix}_den": value.denominator}


def _report_to_dict(report):
    out = {}
    out.update(_fraction_fields("value", report.value))
    out.update(_fraction_fields("guarantee", report.guarantee))
    out["assignment"] = list(report.assignment)
    out["mode"] = report.mode
    out["quotient_unsat"] = report.quotient_unsat
    out["vacuous"] = report.vacuous
    return out


def _print_json(doc):
    print(json.dumps(doc, indent=2, sort_keys=True))


def _run_mode(instance, mode, seed):
    if mode == "derand":
        return approx.solve_pipeline(instance, seed=seed, randomized=False)
    if mode == "rand":
        return approx.solve_pipeline(instance, seed=seed, randomized=True)
    if mode == "baseline":
        return approx.baseline_random(instance, seed=seed)
    return approx.brute_force(instance)


def _print_solve(instance, report, fmt):
    if fmt == "json":
        _print_json(_report_to_dict(report))
        return
    print(
        f"instance over {instance.group.name} "
        f"(k={instance.arity} n={instance.num_vars} m={instance.num_constraints})"
    )
    print(f"mode: {report.mode}")
    print(f"value: {report.value.numerator}/{report.value.denominator}")
    print(f"guarantee: {report.guarantee.numerator}/{report.guarantee.denominator}")
    print(f"quotient_unsat: {str(report.quotient_unsat).lower()}")
    print(f"vacuous: {str(report.vacuous).lower()}")
    print("assignment: " + " ".join(str(v) for v in report.assignment))


def _cmd_hs(args):
    group = make_group(args.group)
    result = compute_hs(group, args.S)
    if args.report == "json":
        doc = {
            "group": group.name,
            "order": group.order,
            "S": sorted(set(args.S)),
            "hs_elements": list(result.subgroup.elements),
            "hs_order": result.subgroup.order,
            "coset_rep": result.coset_rep,
            "generated_by_SinvS": result.generated_by_SinvS,
        }
        doc.update(_fraction_fields("ratio", result.ratio))
        if args.labels:
            doc["labels"] = {str(i): group.label(i) for i in range(group.order)}
        _print_json(doc)
        return 0
    print(f"group {group.name} order {group.order}")
    print("S: " + " ".join(str(s) for s in sorted(set(args.S))))
    print(
        f"H_S (order {result.subgroup.order}): "
        + " ".join(str(e) for e in result.subgroup.elements)
    )
    print(f"coset_rep: {result.coset_rep}")
    ratio = result.ratio
    print(f"ratio: {ratio.numerator}/{ratio.denominator}")
    print(f"generated_by_SinvS: {str(result.generated_by_SinvS).lower()}")
    if args.labels:
        print("labels:")
        for i in range(group.order):
            print(f"  {i} {group.label(i)}")
    return 0


def _cmd_solve(args):
    instance = instances.read_instance_file(args.instance)
    report = _run_mode(instance, args.mode, args.seed)
    _print_solve(instance, report, args.report)
    return 0


def _cmd_generate(args):
    group = make_group(args.group)
    planted = None
    if args.noise > 0.0:
        inst = instances.generate_noisy(
            group, args.S, args.k, args.n, args.m, args.noise, args.seed, name=args.group
        )
    else:
        inst, values = instances.generate_planted(
            group, args.S, args.k, args.n, args.m, args.seed, name=args.group
        )
        planted = [int(v) for v in values]
    instances.write_instance_file(inst, args.out)
    if args.report == "json":
        _print_json({"path": args.out, "planted": planted})
        return 0
    print(f"wrote {args.out} (k={inst.arity} n={inst.num_vars} m={inst.num_constraints})")
    if planted is not None:
        print("planted: " + " ".join(str(v) for v in planted))
    return 0


def _cmd_brute(args):
    instance = instances.read_instance_file(args.instance)
    report = approx.brute_force(instance)
    _print_solve(instance, report, args.report)
    return 0


def _cmd_baseline(args):
    instance = instances.read_instance_file(args.instance)
    report = approx.baseline_random(instance, seed=args.seed, derandomized=not args.randomized)
    _print_solve(instance, report, args.report)
    return 0


def _cmd_simulate(args):
    group = make_group(args.group)
    strategy = dictatorship.make_strategy(args.strategy, coord=args.coord)
    config = dictatorship.TestConfig(
        group=group,
        s_set=tuple(args.S),
        num_vars=args.n,
        samples=args.samples,
        seed=args.seed,
        noise=args.noise,
    )
    result = dictatorship.run_test(config, strategy)
    _print_json(
        {
            "estimate": result.estimate,
            "ci_low": result.ci_low,
            "ci_high": result.ci_high,
            "samples": result.samples,
        }
    )
    return 0


def _gap_to_dict(report):
    return {
        "kind": report.kind,
        "items": [[name, value] for name, value in report.items],
        "max_value": report.max_value,
        "gap": report.gap,
        "n_constant": report.n_constant,
        "n_nonconstant": report.n_nonconstant,
        "vacuous": report.vacuous,
        "hypothesis_met": report.hypothesis_met,
        "formula_gap": report.formula_gap,
    }


def _cmd_check_reps(args):
    group = make_group(args.group)
    epsilon = repcheck.check_epsilon_gap(group, args.S)
    doc = {"group": group.name, "epsilon": _gap_to_dict(epsilon)}
    catalog = repcheck.load_catalog()
    entry = catalog.get(args.group)
    if entry is not None:
        defects = repcheck.catalog_defects(entry)
        doc["operator_norm"] = _gap_to_dict(
            repcheck.check_operator_norm_gap(entry, args.S)
        )
        doc["catalog"] = {
            "hom_defect": defects.hom_defect,
            "unitary_defect": defects.unitary_defect,
            "orthogonality_defect": defects.orthogonality_defect,
            "dims_complete": defects.dims_complete,
        }
    else:
        doc["operator_norm"] = None
        doc["catalog"] = None
    _print_json(doc)
    return 0


def _cmd_bench(args):
    modes = [m.strip() for m in args.modes.split(",") if m.strip()]
    for mode in modes:
        if mode not in _MODES:
            raise ValueError(f"unknown mode {mode!r}, choose from {', '.join(_MODES)}")
    names = sorted(
        f for f in os.listdir(args.corpus) if os.path.isfile(os.path.join(args.corpus, f))
    )
    if not names:
        raise ValueError(f"no instance files found in {args.corpus}")
    loaded = [(name, instances.read_instance_file(os.path.join(args.corpus, name))) for name in names]
    # warm up compiled kernels so the first row is not charged for compilation
    for mode in modes:
        try:
            _run_mode(loaded[0][1], mode, args.seed)
        except ValueError:
            pass
    rows = 0
    with open(args.out, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["instance", "mode", "value_num", "value_den", "guar_num", "guar_den", "time_ms", "seed"]
        )
        for name, instance in loaded:
            for mode in modes:
                start = time.perf_counter()
                try:
                    report = _run_mode(instance, mode, args.seed)
                except ValueError as exc:
                    print(f"skipping {name} mode {mode}: {exc}", file=sys.stderr)
                    continue
                elapsed_ms = (time.perf_counter() - start) * 1000.0
                writer.writerow(
                    [
                        name,
                        report.mode,
                        report.value.numerator,
                        report.value.denominator,
                        report.guarantee.numerator,
                        report.guarantee.denominator,
                        f"{elapsed_ms:.3f}",
                        args.seed,
                    ]
                )
                rows += 1
    print(f"wrote {args.out} ({rows} rows)")
    return 0


def _add_group_s(p):
    p.add_argument("--group", required=True, help="group descriptor, e.g. Z4xZ4, S3, file:path")
    p.add_argument("--S", required=True, nargs="+", type=int, help="target set element IDs")


def _add_report(p):
    p.add_argument("--report", choices=("text", "json"), default="text", help="output format")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="grouplin",
        description="Approximation toolkit for product constraints over finite groups.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("hs", help="compute H_S, its coset representative, and |S|/|H_S|")
    _add_group_s(p)
    p.add_argument("--labels", action="store_true", help="also print the element label map")
    _add_report(p)
    p.set_defaults(func=_cmd_hs)

    p = sub.add_parser("solve", help="run a solver mode on an instance file")
    p.add_argument("--instance", required=True, help="instance file path")
    p.add_argument("--mode", choices=_MODES, default="derand")
    p.add_argument("--seed", type=int, default=0)
    _add_report(p)
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("generate", help="write a planted or noisy random instance")
    _add_group_s(p)
    p.add_argument("--k", required=True, type=int, help="constraint arity")
    p.add_argument("--n", required=True, type=int, help="variable count")
    p.add_argument("--m", required=True, type=int, help="constraint count")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--noise", type=float, default=0.0, help="per-constraint corruption probability")
    p.add_argument("--out", required=True, help="output instance path")
    _add_report(p)
    p.set_defaults(func=_cmd_generate)

    p = sub.add_parser("brute", help="exact optimum by enumeration (bounded)")
    p.add_argument("--instance", required=True)
    _add_report(p)
    p.set_defaults(func=_cmd_brute)

    p = sub.add_parser("baseline", help="uniform baseline with guarantee |S|/|G|")
    p.add_argument("--instance", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument(
        "--randomized", action="store_true", help="draw a random assignment instead of sweeping"
    )
    _add_report(p)
    p.set_defaults(func=_cmd_baseline)

    p = sub.add_parser("simulate", help="estimate a strategy's acceptance in the three-query test")
    _add_group_s(p)
    p.add_argument("--n", required=True, type=int, help="input coordinates of the strategy")
    p.add_argument(
        "--strategy",
        required=True,
        choices=("dictator", "quotient_lift", "uniform_random"),
    )
    p.add_argument("--samples", type=int, default=100000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--noise", type=float, default=0.0, help="per-coordinate resampling probability")
    p.add_argument("--coord", type=int, default=0, help="dictator coordinate")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("check-reps", help="character and irrep gap report for a target set")
    _add_group_s(p)
    p.set_defaults(func=_cmd_check_reps)

    p = sub.add_parser("bench", help="time solver modes over a corpus directory")
    p.add_argument("--corpus", required=True, help="directory of instance files")
    p.add_argument("--out", required=True, help="CSV output path")
    p.add_argument("--modes", default="derand,baseline", help="comma-separated mode list")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_bench)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
