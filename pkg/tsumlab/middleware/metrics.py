"""
Command metrics middleware
"""

from typing import Callable, TypeVar

from ..monitoring.metrics import ACTIVE_COMMANDS, MetricsCollector, MetricsTimer

T = TypeVar("T")


def measure_command(command: str, handler: Callable[[], T]) -> T:
    """Count, time and track a running command"""
    ACTIVE_COMMANDS.inc()
    try:
        with MetricsTimer(MetricsCollector, command):
            return handler()
    finally:
        ACTIVE_COMMANDS.dec()
