"""
Report emission and input file loading for the CLI
"""

import csv
import io
import sys
from pathlib import Path
from typing import List, Optional, Sequence, Type, TypeVar, Union

import structlog
from pydantic import BaseModel, ConfigDict, Field, TypeAdapter, ValidationError

from ..exceptions import InstanceFormatError, ReportIOError
from ..models.group import BigInt
from ..models.instance import TsumInstance
from ..models.reports import QueryList, Report

logger = structlog.get_logger()

M = TypeVar("M", bound=BaseModel)

# bare id lists, or the query lists written by reduce
_IdFile = TypeAdapter(Union[List[BigInt], QueryList])


class RunConfig(BaseModel):
    """Options shared by every subcommand"""

    model_config = ConfigDict(frozen=True)

    command: str
    seed: int = Field(default=0, ge=0, lt=2**64)
    out: Optional[Path] = None
    metrics_out: Optional[Path] = None
    unsafe: bool = False
    word_bits: Optional[int] = Field(default=None, ge=1)


def to_json(model: BaseModel) -> str:
    return model.model_dump_json(indent=2) + "\n"


def to_csv(rows: Sequence[Report], model: Type[Report]) -> str:
    """Rows in the model's column order; an empty sequence gives just the header"""
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=list(model.csv_columns), lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(row.csv_row())
    return buffer.getvalue()


def write_text(path: Path, text: str) -> None:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
    except OSError as e:
        raise ReportIOError(f"cannot write {path}: {e}", path=str(path))
    logger.debug("Artifact written", path=str(path), size=len(text))


def emit_report(report: BaseModel, out: Optional[Path] = None, fmt: str = "json") -> None:
    """JSON by default; CSV when asked for or when out ends in .csv"""
    if fmt == "csv" or (out is not None and out.suffix == ".csv"):
        text = to_csv([report], type(report))
    else:
        text = to_json(report)
    if out is None:
        sys.stdout.write(text)
    else:
        write_text(out, text)


def emit_table(rows: Sequence[Report], model: Type[Report], out: Optional[Path] = None) -> None:
    text = to_csv(rows, model)
    if out is None:
        sys.stdout.write(text)
    else:
        write_text(out, text)


def _location(path: Path, error: ValidationError) -> str:
    first = error.errors()[0]
    loc = ".".join(str(part) for part in first.get("loc", ()))
    return f"{path}:{loc}" if loc else str(path)


def read_text(path: Path) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise InstanceFormatError(f"cannot read input: {e.strerror}", location=str(path))


def load_model(path: Path, model: Type[M]) -> M:
    """Parse a JSON file into a model; failures carry the offending location"""
    return load_json_value(path, TypeAdapter(model))


def load_instance(path: Path) -> TsumInstance:
    return load_model(path, TsumInstance)


def load_ids(path: Path) -> List[int]:
    value = load_json_value(path, _IdFile)
    if isinstance(value, QueryList):
        return [query.z for query in value.queries]
    return value


def load_json_value(path: Path, adapter: TypeAdapter):
    text = read_text(path)
    try:
        return adapter.validate_json(text)
    except ValidationError as e:
        raise InstanceFormatError(e.errors()[0]["msg"], location=_location(path, e))


def parse_id_list(text: str) -> List[int]:
    """Comma-separated decimal ids"""
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise InstanceFormatError("ids must be decimal integers", location=text)
