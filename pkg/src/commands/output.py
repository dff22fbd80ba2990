import argparse
import sys
from typing import Callable, List, Optional, Sequence

from pydantic import BaseModel

EXIT_OK = 0
EXIT_VERIFICATION_FAILED = 1
EXIT_INPUT_ERROR = 2


def emit(report: BaseModel, as_json: bool, render: Callable[[BaseModel], str]) -> None:
    """Write the whole report in one go: JSON for scripts, an aligned table for people"""
    text = report.model_dump_json(indent=2) if as_json else render(report)
    sys.stdout.write(text + "\n")
    sys.stdout.flush()


def format_probability(value: float) -> str:
    return f"{value:.14f}"


def format_optional(value, fmt: str = "{:.12f}") -> str:
    return "-" if value is None else fmt.format(value)


def format_table(headers: Sequence[str], rows: Sequence[Sequence[str]]) -> str:
    widths = [len(header) for header in headers]
    for row in rows:
        widths = [max(width, len(cell)) for width, cell in zip(widths, row)]
    lines: List[str] = ["  ".join(h.ljust(w) for h, w in zip(headers, widths)).rstrip()]
    lines.append("  ".join("-" * w for w in widths))
    for row in rows:
        lines.append("  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip())
    return "\n".join(lines)


def describe_scenario(scenario) -> str:
    systems = " (x) ".join(system.text for system in scenario.systems)
    return f"D={scenario.dimension}  systems: {systems}  measured: {scenario.measured}"


def at_least(minimum: int, maximum: Optional[int] = None):
    """argparse type: an int no smaller than minimum, and no larger than maximum when given"""

    def parse(text: str) -> int:
        value = int(text)
        if value < minimum:
            raise argparse.ArgumentTypeError(f"must be at least {minimum}, got {value}")
        if maximum is not None and value > maximum:
            raise argparse.ArgumentTypeError(f"must be at most {maximum}, got {value}")
        return value

    return parse
