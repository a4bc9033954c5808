"""
verify: sweep a solution against the brute-force oracle
"""

from ...services.solutions.registry import available_solutions, prepare
from ...services.tsum import sweep_solution
from ..io import RunConfig, emit_report, load_ids, load_instance


def register(subparsers) -> None:
    parser = subparsers.add_parser("verify", help="check a solution on every query")
    parser.add_argument("--instance", required=True, help="instance JSON file")
    parser.add_argument("--solution", required=True, choices=available_solutions())
    parser.add_argument("--queries-file", help="JSON list of query ids (default: the whole group)")
    parser.set_defaults(handler=run)


def run(args, config: RunConfig) -> int:
    instance = load_instance(args.instance)
    queries = load_ids(args.queries_file) if args.queries_file else None
    prepared = prepare(args.solution, instance, w=config.word_bits, seed=config.seed)
    report = sweep_solution(prepared.solution, prepared.memory, instance, queries)
    emit_report(report, config.out)
    return 0 if report.ok else 1
