"""
Projective measurement of an ordered subset of qudits in the generalized Bell basis.

The first listed particle carries the phase r, the (t+1)-th listed particle the
offset s_t. Post-measurement states cover the unmeasured particles in ascending
global index order.
"""

import logging
import math
from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator

from core.config import PROBABILITY_FLOOR
from core.exceptions import IncompatibleOperandsError, ScenarioError
from services.gbell import GBellLabel, enumerate_basis
from services.qudit_state import StateVector, check_size, digit_weights
from services.weyl import roots_of_unity

logger = logging.getLogger(__name__)

SEED_LIMIT = 2 ** 64


class MeasurementSpec(BaseModel):
    """Ordered global indices of the measured particles"""

    model_config = ConfigDict(frozen=True)

    particles: tuple[int, ...]

    @field_validator("particles")
    @classmethod
    def _distinct(cls, particles: tuple[int, ...]) -> tuple[int, ...]:
        if not particles:
            raise ValueError("at least one particle must be measured")
        if len(set(particles)) != len(particles):
            raise ValueError(f"measured particles must be distinct: {list(particles)}")
        if min(particles) < 0:
            raise ValueError(f"particle indices must be non-negative: {list(particles)}")
        return particles

    @property
    def count(self) -> int:
        return len(self.particles)


@dataclass(frozen=True)
class CollapseResult:
    label: GBellLabel
    probability: float
    post_state: Optional[StateVector]

    @property
    def feasible(self) -> bool:
        return self.post_state is not None


class OutcomeDistribution:
    """Outcome probabilities keyed by label, in enumeration order"""

    def __init__(self, probabilities: Dict[GBellLabel, float]):
        self._probabilities = dict(probabilities)

    def __getitem__(self, label: GBellLabel) -> float:
        return self._probabilities[label]

    def __len__(self) -> int:
        return len(self._probabilities)

    def __iter__(self) -> Iterator[GBellLabel]:
        return iter(self._probabilities)

    def items(self):
        return self._probabilities.items()

    def labels(self) -> List[GBellLabel]:
        return list(self._probabilities)

    def values(self) -> np.ndarray:
        return np.fromiter(self._probabilities.values(), dtype=float, count=len(self._probabilities))

    def total(self) -> float:
        return float(self.values().sum())

    def feasible(self, floor: float = PROBABILITY_FLOOR) -> List[GBellLabel]:
        return [label for label, p in self._probabilities.items() if p > floor]


def unmeasured_particles(num_qudits: int, spec: MeasurementSpec) -> List[int]:
    measured = set(spec.particles)
    return [p for p in range(num_qudits) if p not in measured]


def _split(state: StateVector, spec: MeasurementSpec) -> np.ndarray:
    """Amplitudes as a (D^A, D^U) matrix: measured digits in listed order by rows"""
    if max(spec.particles) >= state.num_qudits:
        raise IndexError(
            f"measured particle {max(spec.particles)} out of range for {state.num_qudits} qudits"
        )
    rest = unmeasured_particles(state.num_qudits, spec)
    moved = np.transpose(state.as_tensor(), list(spec.particles) + rest)
    return moved.reshape(state.dimension ** spec.count, state.dimension ** len(rest))


def _check_label(state: StateVector, spec: MeasurementSpec, label: GBellLabel) -> None:
    if label.dimension != state.dimension:
        raise IncompatibleOperandsError(
            f"label dimension {label.dimension} does not match state dimension {state.dimension}"
        )
    if label.num_particles != spec.count:
        raise IncompatibleOperandsError(
            f"label {label.render()} covers {label.num_particles} particles, "
            f"measurement covers {spec.count}"
        )


def _support_rows(dimension: int, offsets: np.ndarray) -> np.ndarray:
    """
    Row indices of |t>|t - s_1>...|t - s_{A-1}> for every t.

    offsets has shape (..., A) with a leading zero column; the result has shape
    (..., D).
    """
    t = np.arange(dimension)
    digits = (t[:, None] - offsets[..., None, :]) % dimension
    return digits @ digit_weights(dimension, offsets.shape[-1])


def _collapse(label: GBellLabel, post: np.ndarray, dimension: int, remaining: int, floor: float) -> CollapseResult:
    probability = float(np.vdot(post, post).real)
    if probability <= floor:
        return CollapseResult(label, probability, None)
    return CollapseResult(label, probability, StateVector(dimension, remaining, post / math.sqrt(probability)))


def project(
    state: StateVector,
    spec: MeasurementSpec,
    label: GBellLabel,
    floor: float = PROBABILITY_FLOOR,
) -> CollapseResult:
    _check_label(state, spec, label)
    dimension = state.dimension
    matrix = _split(state, spec)
    rows = _support_rows(dimension, np.asarray(label.full_s, dtype=np.int64))
    t = np.arange(dimension)
    coefficients = roots_of_unity(dimension)[(-label.r * t) % dimension] / math.sqrt(dimension)
    remaining = state.num_qudits - spec.count
    return _collapse(label, coefficients @ matrix[rows], dimension, remaining, floor)


def _offset_table(dimension: int, count: int) -> np.ndarray:
    """All flat offset vectors (0, s_1..s_{A-1}), s_1 most significant"""
    size = dimension ** (count - 1)
    codes = np.arange(size, dtype=np.int64)
    table = np.zeros((size, count), dtype=np.int64)
    for position in range(1, count):
        table[:, position] = (codes // dimension ** (count - 1 - position)) % dimension
    return table


def projection_table(
    state: StateVector,
    spec: MeasurementSpec,
    max_amplitudes: Optional[int] = None,
) -> np.ndarray:
    """
    Unnormalized post states for every label, shape (D^A, D^U), rows in enumeration order.

    For fixed offsets the Bell coefficients are a DFT over the reference digit t,
    so all D phases r come out of one FFT.
    """
    dimension = state.dimension
    check_size(dimension, spec.count, max_amplitudes)
    matrix = _split(state, spec)
    offsets = _offset_table(dimension, spec.count)
    gathered = matrix[_support_rows(dimension, offsets)]
    posts = np.fft.fft(gathered, axis=1) / math.sqrt(dimension)
    return posts.transpose(1, 0, 2).reshape(dimension ** spec.count, -1)


def collapse_all(
    state: StateVector,
    spec: MeasurementSpec,
    floor: float = PROBABILITY_FLOOR,
    max_amplitudes: Optional[int] = None,
) -> List[CollapseResult]:
    table = projection_table(state, spec, max_amplitudes)
    labels = enumerate_basis(state.dimension, spec.count)
    remaining = state.num_qudits - spec.count
    return [_collapse(label, row, state.dimension, remaining, floor) for label, row in zip(labels, table)]


def distribution(
    state: StateVector,
    spec: MeasurementSpec,
    max_amplitudes: Optional[int] = None,
) -> OutcomeDistribution:
    table = projection_table(state, spec, max_amplitudes)
    probabilities = np.sum(np.abs(table) ** 2, axis=1)
    labels = enumerate_basis(state.dimension, spec.count)
    return OutcomeDistribution({label: float(p) for label, p in zip(labels, probabilities)})


def draw_label(outcomes: OutcomeDistribution, seed: int, floor: float = PROBABILITY_FLOOR) -> GBellLabel:
    """
    Inverse-CDF draw over labels in enumeration order.

    The uniform variate comes from numpy's PCG64 bit generator seeded with
    `seed`, so a seed maps to the same label on every platform.
    """
    if not 0 <= seed < SEED_LIMIT:
        raise ScenarioError(f"seed must lie in [0, 2^64), got {seed}")
    weights = np.where(outcomes.values() > floor, outcomes.values(), 0.0)
    cumulative = np.cumsum(weights)
    if cumulative[-1] <= 0.0:
        raise ValueError("no feasible outcome to sample")
    u = np.random.Generator(np.random.PCG64(seed)).random() * cumulative[-1]
    index = min(int(np.searchsorted(cumulative, u, side="right")), len(cumulative) - 1)
    return outcomes.labels()[index]


def sample(
    state: StateVector,
    spec: MeasurementSpec,
    seed: int,
    max_amplitudes: Optional[int] = None,
) -> CollapseResult:
    label = draw_label(distribution(state, spec, max_amplitudes), seed)
    logger.debug("seed %d drew %s", seed, label.render())
    return project(state, spec, label)
