"""
adversary: realizations of the independence distribution and their audit
"""

from pathlib import Path

from ...config import get_settings
from ...exceptions import InvalidParameters
from ...models.instance import SubsetRealization
from ...models.reports import AdversaryAudit
from ...services.adversarial import entropy_audit, is_fully_independent, realize_all, sample_realization
from ...services.groups import check_cap, parse_group
from ..io import RunConfig, emit_report, load_ids, load_model, parse_id_list, to_json, write_text


def register(subparsers) -> None:
    parser = subparsers.add_parser("adversary", help="adversarial input distribution")
    actions = parser.add_subparsers(dest="action", required=True)

    gen = actions.add_parser("gen", help="realize subsets of a query set")
    gen.add_argument("--group", required=True)
    gen.add_argument("--n", required=True, type=int)
    gen.add_argument("--q", help="comma-separated query ids")
    gen.add_argument("--q-file", help="JSON list of query ids")
    gen.add_argument("--all", action="store_true", help="realize every subset into --out-dir")
    gen.add_argument("--out-dir", type=Path)
    gen.set_defaults(handler=run_gen)

    audit = actions.add_parser("audit", help="entropy and independence of a realization directory")
    audit.add_argument("--dir", required=True, type=Path)
    audit.set_defaults(handler=run_audit)


def run_gen(args, config: RunConfig) -> int:
    group = parse_group(args.group)
    check_cap(group, get_settings().max_group_order)
    if args.q_file:
        Q = load_ids(args.q_file)
    elif args.q:
        Q = parse_id_list(args.q)
    else:
        raise InvalidParameters("a query set is required (--q or --q-file)")
    if not args.all:
        emit_report(sample_realization(group, Q, args.n, config.seed), config.out)
        return 0
    if args.out_dir is None:
        raise InvalidParameters("--all writes one file per subset and needs --out-dir")
    realizations = realize_all(group, Q, args.n)
    width = len(str(len(realizations) - 1))
    for mask, realization in enumerate(realizations):
        write_text(args.out_dir / f"realization_{mask:0{width}d}.json", to_json(realization))
    return 0


def run_audit(args, config: RunConfig) -> int:
    paths = sorted(args.dir.glob("realization_*.json"))
    if not paths:
        raise InvalidParameters("no realization files found", dir=str(args.dir))
    realizations = [load_model(path, SubsetRealization) for path in paths]
    Q = realizations[0].Q
    report = AdversaryAudit(
        schema_version=get_settings().schema_version,
        entropy=entropy_audit(Q, realizations),
        independence=is_fully_independent(Q, realizations),
    )
    emit_report(report, config.out)
    return 0 if report.ok else 1
