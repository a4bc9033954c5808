"""
Command logging middleware
"""

import time
import uuid
from typing import Callable, TypeVar

import structlog

logger = structlog.get_logger()

T = TypeVar("T")


def log_command(command: str, handler: Callable[[], T], **fields) -> T:
    """Run a command handler between start/finish log lines sharing a run id"""
    run_id = str(uuid.uuid4())
    log = logger.bind(run_id=run_id, command=command)
    start_time = time.time()
    log.info("Command started", **fields)
    try:
        result = handler()
    except Exception as e:
        log.error(
            "Command failed",
            error=str(e),
            error_type=type(e).__name__,
            process_time=time.time() - start_time,
        )
        raise
    log.info("Command completed", process_time=time.time() - start_time)
    return result
