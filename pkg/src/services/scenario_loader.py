import json
import logging
from pathlib import Path
from typing import Optional, Union

from pydantic import ValidationError

from core.exceptions import ScenarioError
from schemas.scenario import ScenarioFile
from services.gbell import GBellLabel, MultiEntangledSpec
from services.oracle_harness import SwapLayout

logger = logging.getLogger(__name__)


def _location(error: dict) -> str:
    parts = [str(part) for part in error.get("loc", ())]
    return "field " + ".".join(parts) if parts else "scenario"


def parse_scenario(text: str, source: str = "<scenario>") -> ScenarioFile:
    """Parse and validate scenario JSON; errors carry a line or field diagnostic"""
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(exc.msg, f"{source}: line {exc.lineno} column {exc.colno}") from exc
    try:
        return ScenarioFile.model_validate(payload)
    except ValidationError as exc:
        first = exc.errors()[0]
        message = first.get("msg", "invalid value")
        raise ScenarioError(message, f"{source}: {_location(first)}") from exc


def load_scenario(path: Union[str, Path]) -> ScenarioFile:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ScenarioError(f"cannot read scenario file: {exc.strerror}", str(path)) from exc
    scenario = parse_scenario(text, str(path))
    logger.info("loaded scenario %s: D=%d, %d systems", path, scenario.dimension, len(scenario.systems))
    return scenario


def build_layout(scenario: ScenarioFile) -> SwapLayout:
    systems = tuple(
        MultiEntangledSpec(dimension=scenario.dimension, l=system.l, k=tuple(system.k))
        for system in scenario.systems
    )
    measured = tuple(tuple(group) for group in scenario.measured_local())
    try:
        return SwapLayout(dimension=scenario.dimension, systems=systems, measured=measured)
    except ValidationError as exc:
        raise ScenarioError(exc.errors()[0].get("msg", "invalid layout")) from exc


def outcome_label(scenario: ScenarioFile) -> Optional[GBellLabel]:
    if scenario.outcome is None:
        return None
    return GBellLabel(dimension=scenario.dimension, r=scenario.outcome.r, s=tuple(scenario.outcome.s))
