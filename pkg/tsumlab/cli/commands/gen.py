"""
gen: random 3SUM-Indexing instances
"""

import numpy as np

from ...config import get_settings
from ...services.groups import check_cap, parse_group
from ...services.tsum import random_instance
from ..io import RunConfig, emit_report


def register(subparsers) -> None:
    parser = subparsers.add_parser("gen", help="generate a random instance")
    parser.add_argument("--group", required=True, help="cyclic:m, xor:k or product(g,h)")
    parser.add_argument("--n", required=True, type=int, help="set size")
    parser.set_defaults(handler=run)


def run(args, config: RunConfig) -> int:
    group = parse_group(args.group)
    check_cap(group, get_settings().max_group_order)
    instance = random_instance(group, args.n, np.random.default_rng(config.seed))
    emit_report(instance, config.out)
    return 0
