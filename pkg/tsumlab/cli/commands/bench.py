"""
bench: probe counts of every registered solution on seeded random instances
"""

import time

import numpy as np

from ...config import get_settings
from ...models.reports import BenchRow
from ...services.groups import check_cap, parse_group
from ...services.solutions.registry import available_solutions, prepare
from ...services.tsum import random_instance, sweep_solution
from ..io import RunConfig, emit_table


def register(subparsers) -> None:
    parser = subparsers.add_parser("bench", help="probe-count benchmark of the solution family")
    parser.add_argument("--group", required=True)
    parser.add_argument("--n", required=True, type=int)
    parser.add_argument("--instances", type=int, default=3)
    parser.add_argument("--solutions", help="comma-separated names (default: all)")
    parser.add_argument("--timing", action="store_true", help="add wall-clock seconds")
    parser.set_defaults(handler=run)


def run(args, config: RunConfig) -> int:
    group = parse_group(args.group)
    check_cap(group, get_settings().max_group_order)
    names = args.solutions.split(",") if args.solutions else available_solutions()
    rng = np.random.default_rng(config.seed)
    instances = [random_instance(group, args.n, rng) for _ in range(args.instances)]
    rows = []
    for name in names:
        started = time.perf_counter()
        probes = 0.0
        worst = 0
        violations = 0
        solution = None
        for instance in instances:
            prepared = prepare(name, instance, w=config.word_bits, seed=config.seed)
            solution = prepared.solution
            report = sweep_solution(solution, prepared.memory, instance)
            probes += report.mean_probes
            worst = max(worst, report.max_probes)
            violations += len(report.violations)
        if solution is None:
            continue
        rows.append(
            BenchRow(
                schema_version=get_settings().schema_version,
                solution=name,
                group=group.label(),
                n=args.n,
                instances=len(instances),
                S=solution.S,
                w=solution.w,
                T=solution.T,
                mean_probes=probes / len(instances),
                max_probes=worst,
                violations=violations,
                seconds=time.perf_counter() - started if args.timing else None,
            )
        )
    emit_table(rows, BenchRow, config.out)
    return 1 if any(row.violations for row in rows) else 0
