"""
bitprobe: audit two-probe bit schemes
"""

from ...config import get_settings
from ...exceptions import DegreeTooSmall
from ...models.reports import BitprobeAudit
from ...services.bitprobe import (
    TwoProbeScheme,
    empirical_refute,
    find_refutation_witness,
    girth_bound_check,
    query_graph,
    trivial_scheme,
)
from ...services.groups import check_cap, parse_group
from ..io import RunConfig, emit_report, load_model


def register(subparsers) -> None:
    parser = subparsers.add_parser("bitprobe", help="two-probe bit scheme auditor")
    actions = parser.add_subparsers(dest="action", required=True)

    audit = actions.add_parser("audit", help="look for a refutation witness")
    audit.add_argument("--scheme-file", required=True)
    audit.add_argument("--n", type=int, help="set size for the realizations (default: |Q|)")
    audit.add_argument("--refute", action="store_true", help="realize every pattern of the witness")
    audit.set_defaults(handler=run_audit)

    trivial = actions.add_parser("trivial", help="emit the one-cell-per-element scheme")
    trivial.add_argument("--group", required=True)
    trivial.set_defaults(handler=run_trivial)


def run_audit(args, config: RunConfig) -> int:
    scheme = load_model(args.scheme_file, TwoProbeScheme)
    verdict = find_refutation_witness(scheme, args.n)
    graph = query_graph(scheme)
    try:
        girth = girth_bound_check(scheme.cells, graph.number_of_edges(), graph)
    except DegreeTooSmall:
        girth = None
    outcome = None
    if args.refute and verdict.kind != "NotRefuted":
        outcome = empirical_refute(scheme, verdict.queries, verdict.n_param, verdict=verdict.kind)
    report = BitprobeAudit(
        schema_version=get_settings().schema_version,
        cells=scheme.cells,
        queries=len(scheme.queries),
        girth=girth,
        verdict=verdict,
        outcome=outcome,
    )
    emit_report(report, config.out)
    return 0 if report.ok else 1


def run_trivial(args, config: RunConfig) -> int:
    group = parse_group(args.group)
    check_cap(group, get_settings().max_group_order)
    emit_report(trivial_scheme(group), config.out)
    return 0
