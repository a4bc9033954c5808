"""
tsumlab - command-line entry point
"""

import json
import logging
import sys
from typing import Any, Dict, List, Optional, Tuple

import structlog
from pydantic import ValidationError

from .cli.io import RunConfig
from .cli.parser import build_parser
from .config import Settings, get_settings, settings_scope
from .exceptions import TsumLabError, UsageError
from .middleware.logging import log_command
from .middleware.metrics import measure_command
from .monitoring.metrics import write_metrics

logger = structlog.get_logger()

# Exit codes
EXIT_OK = 0
EXIT_FAILED_CHECK = 1
EXIT_USAGE = 2

UNSAFE_CAP = 2**256

LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


def configure_logging(settings: Settings) -> None:
    """Structured logs on stderr; stdout is reserved for reports"""
    logging.basicConfig(stream=sys.stderr, level=settings.log_level, format="%(message)s", force=True)
    renderer = (
        structlog.processors.JSONRenderer()
        if settings.log_format == "json"
        else structlog.dev.ConsoleRenderer(colors=False)
    )
    structlog.configure(
        processors=[
            structlog.stdlib.filter_by_level,
            structlog.stdlib.add_logger_name,
            structlog.stdlib.add_log_level,
            structlog.stdlib.PositionalArgumentsFormatter(),
            structlog.processors.TimeStamper(fmt="iso"),
            structlog.processors.StackInfoRenderer(),
            structlog.processors.format_exc_info,
            structlog.processors.UnicodeDecoder(),
            renderer,
        ],
        context_class=dict,
        logger_factory=structlog.stdlib.LoggerFactory(),
        wrapper_class=structlog.stdlib.BoundLogger,
        cache_logger_on_first_use=True,
    )


def apply_overrides(settings: Settings, args) -> Tuple[Settings, RunConfig]:
    """Copy the settings with the global flags folded in, and build the run config"""
    updates: Dict[str, Any] = {}
    if args.log_level:
        level = args.log_level.upper()
        if level not in LOG_LEVELS:
            raise UsageError(f"log level must be one of {list(LOG_LEVELS)}", level=args.log_level)
        updates["log_level"] = level
    if args.progress:
        updates["progress"] = True
    if args.unsafe:
        updates.update(max_group_order=UNSAFE_CAP, max_set_size=UNSAFE_CAP, max_chain_work=UNSAFE_CAP)
    return settings.model_copy(update=updates), RunConfig(
        command=command_name(args),
        seed=settings.default_seed if args.seed is None else args.seed,
        out=args.out,
        metrics_out=args.metrics_out,
        unsafe=args.unsafe,
        word_bits=args.word_bits,
    )


def command_name(args) -> str:
    parts = [args.command]
    for attribute in ("reduction", "action"):
        value = getattr(args, attribute, None)
        if value:
            parts.append(value)
    return " ".join(parts)


def report_error(payload: dict) -> None:
    sys.stderr.write(json.dumps(payload, sort_keys=True) + "\n")


def validation_payload(error: ValidationError) -> dict:
    first = error.errors()[0]
    return {
        "error": "ValidationError",
        "message": first["msg"],
        "context": {"location": ".".join(str(part) for part in first.get("loc", ())), "errors": error.error_count()},
    }


def main(argv: Optional[List[str]] = None) -> int:
    settings = get_settings()
    configure_logging(settings)
    try:
        args = build_parser().parse_args(argv)
        settings, config = apply_overrides(settings, args)
    except (UsageError, ValueError) as e:
        report_error(e.to_dict() if isinstance(e, TsumLabError) else {"error": "UsageError", "message": str(e)})
        return EXIT_USAGE
    configure_logging(settings)

    with settings_scope(settings):
        return _run(args, config)


def _run(args, config: RunConfig) -> int:
    try:
        code = log_command(
            config.command,
            lambda: measure_command(config.command, lambda: args.handler(args, config)),
            seed=config.seed,
        )
    except ValidationError as e:
        report_error(validation_payload(e))
        code = EXIT_USAGE
    except TsumLabError as e:
        report_error(e.to_dict())
        code = EXIT_USAGE
    except Exception as e:
        logger.error("Unexpected error", error=str(e), exc_info=True)
        report_error({"error": type(e).__name__, "message": str(e)})
        code = EXIT_FAILED_CHECK

    if config.metrics_out:
        try:
            write_metrics(config.metrics_out)
        except TsumLabError as e:
            report_error(e.to_dict())
            code = code or EXIT_USAGE
    return code
