"""
reduce: compile butterfly reachability and blocked LSD into 3SUM-Indexing
"""

from pathlib import Path
from typing import List, Tuple

import numpy as np
from pydantic import TypeAdapter

from ...config import get_settings
from ...exceptions import InvalidParameters
from ...models.instance import ButterflyInstance, LsdInstance
from ...models.reports import EncodedQuery, QueryList
from ...services.butterfly import ButterflyMode, check_equivalence, encode_instance, parse_edges, query_table
from ...services.lsd import (
    LsdMode,
    bob_instance,
    decide_disjointness,
    encode_alice,
    encode_bob,
    random_lsd_instance,
    simulate_protocol,
)
from ...services.solutions.registry import available_solutions, prepare
from ..io import RunConfig, emit_report, emit_table, load_json_value, load_model, read_text, to_json, write_text

_Pairs = TypeAdapter(List[Tuple[int, int]])
_Values = TypeAdapter(List[int])


def register(subparsers) -> None:
    parser = subparsers.add_parser("reduce", help="reductions to 3SUM-Indexing")
    reductions = parser.add_subparsers(dest="reduction", required=True)

    butterfly = reductions.add_parser("butterfly", help="butterfly reachability")
    butterfly.add_argument("--B", required=True, type=int)
    butterfly.add_argument("--d", required=True, type=int)
    butterfly.add_argument("--mode", choices=[m.value for m in ButterflyMode], default="cyclic")
    butterfly.add_argument("--edges", default="full", help="full, empty, random or a 0/1 string")
    butterfly.add_argument("--edges-file", help="0/1 edge string, or a graph.json written by --out-dir")
    butterfly.add_argument("--check", action="store_true", help="sweep every (s, t) against the oracle")
    butterfly.add_argument("--out-dir", type=Path, help="write instance.json and queries.json here")
    butterfly.set_defaults(handler=run_butterfly)

    lsd = reductions.add_parser("lsd", help="blocked lopsided set disjointness")
    lsd.add_argument("--N", type=int)
    lsd.add_argument("--B", type=int)
    lsd.add_argument("--ell", type=int, default=1)
    lsd.add_argument("--mode", choices=[m.value for m in LsdMode], default="cyclic")
    lsd.add_argument("--x-file", help="JSON list of Bob's [block, value] pairs")
    lsd.add_argument("--y-file", help="JSON list of Alice's N values")
    lsd.add_argument("--lsd-file", help="an lsd.json written by --out-dir")
    lsd.add_argument("--pairs", type=int, default=0, help="random Bob pairs when no files are given")
    lsd.add_argument("--solution", choices=available_solutions(), default="sumset")
    lsd.add_argument("--out-dir", type=Path, help="write instance, queries and comm.csv here")
    lsd.set_defaults(handler=run_lsd)


def run_butterfly(args, config: RunConfig) -> int:
    rng = np.random.default_rng(config.seed)
    graph = _load_graph(args) if args.edges_file else parse_edges(args.B, args.d, args.edges, rng)
    mode = ButterflyMode(args.mode)
    encoded = encode_instance(graph, mode)
    if args.out_dir:
        queries = QueryList(
            schema_version=get_settings().schema_version,
            reduction="butterfly",
            group=encoded.group.label(),
            queries=[EncodedQuery(label=f"{s},{t}", z=z) for (s, t), z in query_table(args.B, args.d, mode).items()],
        )
        write_text(args.out_dir / "graph.json", to_json(graph))
        write_text(args.out_dir / "instance.json", to_json(encoded))
        write_text(args.out_dir / "queries.json", to_json(queries))
    if not args.check:
        emit_report(encoded, config.out)
        return 0
    report = check_equivalence(graph, mode)
    emit_report(report, config.out)
    return 0 if report.ok else 1


def _load_graph(args) -> ButterflyInstance:
    text = read_text(args.edges_file).strip()
    if not text.startswith("{"):
        return parse_edges(args.B, args.d, text)
    graph = load_model(args.edges_file, ButterflyInstance)
    if (graph.B, graph.d) != (args.B, args.d):
        raise InvalidParameters("graph file does not match --B/--d", B=graph.B, d=graph.d)
    return graph


def _lsd_instance(args, config: RunConfig) -> LsdInstance:
    if args.lsd_file:
        instance = load_model(args.lsd_file, LsdInstance)
        if args.N not in (None, instance.N) or args.B not in (None, instance.B):
            raise InvalidParameters("lsd file does not match --N/--B", N=instance.N, B=instance.B)
        return instance
    if args.N is None or args.B is None:
        raise InvalidParameters("--N and --B are required without --lsd-file")
    if args.x_file or args.y_file:
        if not (args.x_file and args.y_file):
            raise InvalidParameters("--x-file and --y-file go together")
        return LsdInstance(
            N=args.N,
            B=args.B,
            X=load_json_value(args.x_file, _Pairs),
            Y=load_json_value(args.y_file, _Values),
        )
    return random_lsd_instance(args.N, args.B, args.pairs, np.random.default_rng(config.seed))


def run_lsd(args, config: RunConfig) -> int:
    instance = _lsd_instance(args, config)
    mode = LsdMode(args.mode)
    tsum_instance = bob_instance(encode_bob(instance, args.ell, mode))
    ds = prepare(args.solution, tsum_instance, w=config.word_bits, seed=config.seed)
    decision = decide_disjointness(instance, args.ell, ds, mode)
    stats = simulate_protocol(instance, args.ell, ds, mode)
    if args.out_dir:
        queries = QueryList(
            schema_version=get_settings().schema_version,
            reduction="lsd",
            group=tsum_instance.group.label(),
            queries=[
                EncodedQuery(label=f"group {i}", z=z)
                for i, z in enumerate(encode_alice(instance, args.ell, mode))
            ],
        )
        write_text(args.out_dir / "lsd.json", to_json(instance))
        write_text(args.out_dir / "instance.json", to_json(tsum_instance))
        write_text(args.out_dir / "queries.json", to_json(queries))
        emit_table([stats], type(stats), args.out_dir / "comm.csv")
    emit_report(decision, config.out)
    return 0 if decision.consistent and stats.consistent else 1
