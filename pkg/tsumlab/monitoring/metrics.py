"""
Metrics collection and Prometheus integration
"""

import time
from pathlib import Path
from typing import Optional, Union

from prometheus_client import Counter, Gauge, Histogram, generate_latest

from ..config import get_settings
from ..exceptions import ReportIOError

# Cell-probe query metrics
QUERIES_TOTAL = Counter(
    'tsumlab_queries_total',
    'Total number of cell-probe queries executed',
    ['solution']
)

PROBES_TOTAL = Counter(
    'tsumlab_probes_total',
    'Total number of memory cells read by queries',
    ['solution']
)

PROBES_PER_QUERY = Histogram(
    'tsumlab_probes_per_query',
    'Cells read per query',
    ['solution'],
    buckets=(0, 1, 2, 4, 8, 16, 32, 64, 128, 256, 1024, 4096)
)

# Inversion metrics
ORACLE_CALLS_TOTAL = Counter(
    'tsumlab_oracle_calls_total',
    'Total number of oracle evaluations in online phases',
    ['adversary']
)

INVERSION_ATTEMPTS_TOTAL = Counter(
    'tsumlab_inversion_attempts_total',
    'Total number of inversion attempts',
    ['adversary', 'outcome']
)

# Verification metrics
VIOLATIONS_TOTAL = Counter(
    'tsumlab_violations_total',
    'Total number of oracle disagreements found by checks',
    ['check']
)

# Command metrics
COMMANDS_TOTAL = Counter(
    'tsumlab_commands_total',
    'Total number of CLI commands run',
    ['command', 'status']
)

COMMAND_DURATION = Histogram(
    'tsumlab_command_duration_seconds',
    'CLI command duration in seconds',
    ['command']
)

ACTIVE_COMMANDS = Gauge(
    'tsumlab_active_commands',
    'Number of commands currently running'
)


def _enabled() -> bool:
    return get_settings().enable_metrics


class MetricsCollector:
    """Metrics collection utility"""

    @staticmethod
    def record_query(solution: str, probes: int):
        """Record one executed query and its probe count"""
        if not _enabled():
            return
        QUERIES_TOTAL.labels(solution=solution).inc()
        PROBES_TOTAL.labels(solution=solution).inc(probes)
        PROBES_PER_QUERY.labels(solution=solution).observe(probes)

    @staticmethod
    def record_oracle_calls(adversary: str, calls: int):
        if _enabled() and calls:
            ORACLE_CALLS_TOTAL.labels(adversary=adversary).inc(calls)

    @staticmethod
    def record_inversion(adversary: str, success: bool):
        """Record an inversion attempt"""
        if not _enabled():
            return
        outcome = 'success' if success else 'failure'
        INVERSION_ATTEMPTS_TOTAL.labels(adversary=adversary, outcome=outcome).inc()

    @staticmethod
    def record_violations(check: str, count: int):
        if _enabled() and count:
            VIOLATIONS_TOTAL.labels(check=check).inc(count)

    @staticmethod
    def record_command(command: str, success: bool, duration: float):
        """Record CLI command metrics"""
        if not _enabled():
            return
        status = 'success' if success else 'failure'
        COMMANDS_TOTAL.labels(command=command, status=status).inc()
        COMMAND_DURATION.labels(command=command).observe(duration)


def write_metrics(path: Union[str, Path]) -> None:
    """Write the Prometheus text exposition to a file"""
    try:
        Path(path).write_bytes(generate_latest())
    except OSError as e:
        raise ReportIOError(f"cannot write metrics: {e}", path=str(path))


class MetricsTimer:
    """Context manager for timing a command"""

    def __init__(self, collector: MetricsCollector, command: str):
        self.collector = collector
        self.command = command
        self.start_time: Optional[float] = None
        self.duration: float = 0.0

    def __enter__(self):
        self.start_time = time.time()
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        if self.start_time:
            self.duration = time.time() - self.start_time
            self.collector.record_command(self.command, exc_type is None, self.duration)
