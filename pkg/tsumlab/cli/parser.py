"""
Argument parser for the tsumlab command line
"""

import argparse
from pathlib import Path

from .. import __version__
from ..exceptions import UsageError
from .commands import adversary, bench, bitprobe, gen, owf, reduce, verify

COMMANDS = (gen, reduce, verify, adversary, bitprobe, owf, bench)


class TsumLabParser(argparse.ArgumentParser):
    """Raises UsageError instead of exiting so errors can be reported as JSON"""

    def error(self, message: str):
        raise UsageError(message, usage=self.format_usage().strip())


def build_parser() -> argparse.ArgumentParser:
    parser = TsumLabParser(prog="tsumlab", description="3SUM-Indexing laboratory")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--seed", type=int, help="RNG seed (default: TSUMLAB_DEFAULT_SEED)")
    parser.add_argument("--out", type=Path, help="report file (default: stdout)")
    parser.add_argument("--metrics-out", type=Path, help="write Prometheus metrics here after the run")
    parser.add_argument("--unsafe", action="store_true", help="lift the desk-scale size caps")
    parser.add_argument("--word-bits", type=int, help="cell width w")
    parser.add_argument("--log-level", help="override TSUMLAB_LOG_LEVEL")
    parser.add_argument("--progress", action="store_true", help="progress bars on stderr")
    subparsers = parser.add_subparsers(dest="command", required=True, parser_class=TsumLabParser)
    for command in COMMANDS:
        command.register(subparsers)
    return parser
