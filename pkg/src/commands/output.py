import json
import sys
from fractions import Fraction
from typing import Any, List, NamedTuple, Optional, TextIO, Union

from pydantic import BaseModel

from src.errors import InvalidParameter
from src.utils.rationals import format_rational


class CommandResult(NamedTuple):
    report: BaseModel
    exit_code: int = 0


def emit(report: BaseModel, output_format: str = "json", stream: Optional[TextIO] = None) -> None:
    """Write a report to stdout as JSON or as ``key: value`` lines."""
    stream = stream or sys.stdout
    data = report.model_dump(mode="json", exclude_none=True)
    if output_format == "plain":
        for key, value in data.items():
            text = value if isinstance(value, str) else json.dumps(value)
            stream.write(f"{key}: {text}\n")
    else:
        stream.write(json.dumps(data, indent=2) + "\n")
    stream.flush()


def rate_text(rate: Union[Fraction, float]) -> str:
    if isinstance(rate, Fraction):
        return format_rational(rate)
    return repr(rate)


def parse_csv_ints(text: str) -> List[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError as exc:
        raise InvalidParameter(f"Expected comma-separated integers, got {text!r}") from exc


def parse_csv_names(text: str) -> List[str]:
    return [part.strip() for part in text.split(",") if part.strip()]


def attr(args: Any, name: str) -> Any:
    return getattr(args, name, None)
