"""
owf: preprocessing attacks on the immunized function
"""

from ...config import get_settings
from ...services.groups import check_cap, parse_group
from ...services.owf import ADVERSARIES, build_adversary, run_experiment
from ...services.solutions.registry import available_solutions
from ..io import RunConfig, emit_report


def register(subparsers) -> None:
    parser = subparsers.add_parser("owf", help="one-way function experiments")
    actions = parser.add_subparsers(dest="action", required=True)

    attack = actions.add_parser("attack", help="measure an adversary's inversion rate")
    attack.add_argument("--N", required=True, type=int, help="oracle domain size")
    attack.add_argument("--group", required=True)
    attack.add_argument("--adversary", required=True, choices=list(ADVERSARIES))
    attack.add_argument("--trials", type=int)
    attack.add_argument("--m", type=int, help="Hellman chains")
    attack.add_argument("--t", type=int, help="Hellman chain length")
    attack.add_argument("--solution", choices=available_solutions(), default="sumset")
    attack.add_argument("--format", choices=["csv", "json"], default="csv")
    attack.add_argument("--no-exact", action="store_true", help="skip the exact success computation")
    attack.set_defaults(handler=run_attack)


def run_attack(args, config: RunConfig) -> int:
    settings = get_settings()
    group = parse_group(args.group)
    check_cap(group, settings.max_group_order)
    adversary = build_adversary(
        args.adversary,
        seed=config.seed,
        w=config.word_bits,
        m=args.m,
        t=args.t,
        solution=args.solution,
    )
    report = run_experiment(
        adversary,
        args.N,
        group,
        args.trials or settings.owf_trials,
        config.seed,
        exact=not args.no_exact,
    )
    emit_report(report, config.out, fmt=args.format)
    return 0 if report.false_inversions == 0 else 1
