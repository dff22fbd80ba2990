"""
Brute-force verification of the closed-form swap predictions.

The composite state is built from the input systems, every Bell label is
projected exactly, and each oracle post state is compared with the predicted
maximally entangled state.
"""

import logging
import time
from concurrent.futures import ProcessPoolExecutor
from enum import Enum
from typing import Callable, List, Optional, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from core.config import PROBABILITY_FLOOR, VERIFICATION_TOLERANCE, configure_settings, get_settings
from core.exceptions import ScenarioError
from schemas.report import (
    LabelModel,
    LabelRecord,
    ScenarioDescriptor,
    SpecModel,
    VerificationReport,
    VerificationSummary,
)
from services.gbell import GBellLabel, MultiEntangledSpec, make_entangled, relabel
from services.measurement import MeasurementSpec, collapse_all
from services.qudit_state import StateVector, fidelity_up_to_phase, tensor_all
from services.swap_predict import Prediction, SwapScenario, predict_general

logger = logging.getLogger(__name__)

Predictor = Callable[[SwapScenario, GBellLabel], Optional[Prediction]]


class SwapLayout(BaseModel):
    """Input systems plus the measured particles of each, local indices in listed order"""

    model_config = ConfigDict(frozen=True)

    dimension: int = Field(..., ge=2)
    systems: tuple[MultiEntangledSpec, ...]
    measured: tuple[tuple[int, ...], ...]

    @model_validator(mode="after")
    def _validate(self) -> "SwapLayout":
        if not self.systems or len(self.measured) != len(self.systems):
            raise ValueError("one measured-particle list is required per system")
        for index, (system, chosen) in enumerate(zip(self.systems, self.measured)):
            if system.dimension != self.dimension:
                raise ValueError(f"system {index} has dimension {system.dimension}, expected {self.dimension}")
            if not chosen:
                raise ValueError("each system must contribute at least one measured particle")
            if len(set(chosen)) != len(chosen) or any(not 0 <= p < system.num_particles for p in chosen):
                raise ValueError(f"system {index}: invalid measured particles {list(chosen)}")
        return self

    @classmethod
    def from_scenario(cls, scenario: SwapScenario) -> "SwapLayout":
        measured = tuple(
            tuple(range(system.num_particles - count, system.num_particles))
            for system, count in zip(scenario.systems, scenario.measured_counts)
        )
        return cls(dimension=scenario.dimension, systems=scenario.systems, measured=measured)

    @property
    def total_qudits(self) -> int:
        return sum(system.num_particles for system in self.systems)

    def system_starts(self) -> List[int]:
        starts, position = [], 0
        for system in self.systems:
            starts.append(position)
            position += system.num_particles
        return starts

    def global_measured(self) -> List[List[int]]:
        return [[start + p for p in chosen] for start, chosen in zip(self.system_starts(), self.measured)]

    def measurement_spec(self) -> MeasurementSpec:
        return MeasurementSpec(particles=tuple(p for group in self.global_measured() for p in group))

    def composite(self) -> StateVector:
        return tensor_all([make_entangled(system) for system in self.systems])

    def canonical(self) -> Optional[SwapScenario]:
        """
        Each system relabeled as (unmeasured ascending, measured in listed order),
        so the measured particles are last; None when a system is measured entirely.
        """
        systems, counts = [], []
        for system, chosen in zip(self.systems, self.measured):
            kept = [p for p in range(system.num_particles) if p not in chosen]
            if not kept:
                return None
            systems.append(relabel(system, kept + list(chosen)))
            counts.append(len(chosen))
        return SwapScenario(dimension=self.dimension, systems=tuple(systems), measured_counts=tuple(counts))

    def descriptor(self) -> ScenarioDescriptor:
        return ScenarioDescriptor(
            dimension=self.dimension,
            systems=[SpecModel.from_spec(system) for system in self.systems],
            measured=self.global_measured(),
        )


class ScenarioLimits(BaseModel):
    min_dimension: int = 2
    max_dimension: int = 3
    min_systems: int = 1
    max_systems: int = 3
    max_total_qudits: int = 8
    max_amplitudes: Optional[int] = None


class ModularTerm(str, Enum):
    """Terms of the closed form that a negative control can knock off by one"""

    PHASE = "phase"
    BRIDGE = "bridge"
    CARRIED = "carried"
    OFFSET = "offset"


def _perturb(scenario: SwapScenario, prediction: Prediction, term: ModularTerm) -> Prediction:
    roles = []
    for j, (system, count) in enumerate(zip(scenario.systems, scenario.measured_counts)):
        if j:
            roles.append(("bridge", j))
        roles.extend(("carried", j) for _ in range(len(system.k) - count))
    k = list(prediction.result.k)
    l = prediction.result.l
    offsets = list(prediction.offsets)
    if term is ModularTerm.PHASE:
        l += 1
    elif term is ModularTerm.OFFSET:
        if scenario.q > 1:
            offsets[1] += 1
            k = [v - 1 if system == 1 else v for v, (_, system) in zip(k, roles)]
    else:
        wanted = "bridge" if term is ModularTerm.BRIDGE else "carried"
        for position, (role, _) in enumerate(roles):
            if role == wanted:
                k[position] += 1
                break
    result = MultiEntangledSpec(dimension=scenario.dimension, l=l, k=tuple(k))
    return Prediction(result=result, offsets=tuple(v % scenario.dimension for v in offsets))


def perturbed_predictor(term: ModularTerm) -> Predictor:
    """predict_general with one modular term shifted by one"""
    term = ModularTerm(term)

    def predictor(scenario: SwapScenario, label: GBellLabel) -> Optional[Prediction]:
        prediction = predict_general(scenario, label)
        if prediction is None:
            return None
        return _perturb(scenario, prediction, term)

    return predictor


def verify_layout(
    layout: SwapLayout,
    predictor: Predictor = predict_general,
    max_amplitudes: Optional[int] = None,
) -> VerificationReport:
    canonical = layout.canonical()
    if canonical is None:
        raise ScenarioError("every system must keep at least one particle unmeasured to be verified")

    started = time.perf_counter()
    outcomes = collapse_all(layout.composite(), layout.measurement_spec(), max_amplitudes=max_amplitudes)
    expected = 1.0 / layout.dimension ** len(layout.systems)

    records = []
    fidelity_deviation = 0.0
    probability_deviation = 0.0
    infeasible_leak = False
    for outcome in outcomes:
        prediction = predictor(canonical, outcome.label)
        record = LabelRecord(
            label=LabelModel.from_label(outcome.label),
            feasible=prediction is not None,
            oracle_probability=outcome.probability,
        )
        if prediction is None:
            probability_deviation = max(probability_deviation, abs(outcome.probability))
            infeasible_leak = infeasible_leak or outcome.probability > PROBABILITY_FLOOR
        else:
            fidelity = 0.0
            if outcome.post_state is not None:
                fidelity = fidelity_up_to_phase(outcome.post_state, make_entangled(prediction.result))
            record.predicted = SpecModel.from_spec(prediction.result)
            record.fidelity = fidelity
            fidelity_deviation = max(fidelity_deviation, abs(1.0 - fidelity))
            probability_deviation = max(probability_deviation, abs(outcome.probability - expected))
        records.append(record)

    total = float(np.sum([outcome.probability for outcome in outcomes]))
    passed = (
        fidelity_deviation <= VERIFICATION_TOLERANCE
        and probability_deviation <= VERIFICATION_TOLERANCE
        and abs(total - 1.0) <= VERIFICATION_TOLERANCE
        and not infeasible_leak
    )
    summary = VerificationSummary(
        label_count=len(records),
        feasible_count=sum(record.feasible for record in records),
        expected_probability=expected,
        total_probability=total,
        max_fidelity_deviation=fidelity_deviation,
        max_probability_deviation=probability_deviation,
        passed=passed,
        wall_time_seconds=time.perf_counter() - started,
    )
    logger.info(
        "verified %d qudits, %d labels, %d feasible: passed=%s in %.3fs",
        layout.total_qudits,
        summary.label_count,
        summary.feasible_count,
        passed,
        summary.wall_time_seconds,
    )
    return VerificationReport(scenario=layout.descriptor(), records=records, summary=summary)


def verify_scenario(
    scenario: SwapScenario,
    predictor: Predictor = predict_general,
    max_amplitudes: Optional[int] = None,
) -> VerificationReport:
    return verify_layout(SwapLayout.from_scenario(scenario), predictor, max_amplitudes)


def random_scenario(seed: int, limits: Optional[ScenarioLimits] = None) -> SwapScenario:
    """Deterministic in seed; draws D, q, sizes, measured counts and labels within limits"""
    limits = limits or ScenarioLimits()
    if limits.min_dimension < 2 or limits.max_dimension < limits.min_dimension:
        raise ScenarioError(f"unsatisfiable dimension range [{limits.min_dimension}, {limits.max_dimension}]")
    if limits.min_systems < 1 or limits.max_systems < limits.min_systems:
        raise ScenarioError(f"unsatisfiable system range [{limits.min_systems}, {limits.max_systems}]")

    rng = np.random.Generator(np.random.PCG64(seed))
    budget = limits.max_amplitudes if limits.max_amplitudes is not None else get_settings().max_amplitudes
    dimension = int(rng.integers(limits.min_dimension, limits.max_dimension + 1))
    qudit_cap = limits.max_total_qudits
    while qudit_cap > 0 and dimension ** qudit_cap > budget:
        qudit_cap -= 1
    if qudit_cap < 2 * limits.min_systems:
        raise ScenarioError(
            f"{limits.min_systems} systems need {2 * limits.min_systems} qudits, "
            f"only {qudit_cap} fit for dimension {dimension}"
        )

    q = int(rng.integers(limits.min_systems, min(limits.max_systems, qudit_cap // 2) + 1))
    total = int(rng.integers(2 * q, qudit_cap + 1))
    sizes = [2] * q
    for _ in range(total - 2 * q):
        sizes[int(rng.integers(q))] += 1

    systems, counts = [], []
    for size in sizes:
        m = size - 1
        counts.append(int(rng.integers(1, m + 1)))
        l = int(rng.integers(dimension))
        k = tuple(int(v) for v in rng.integers(dimension, size=m))
        systems.append(MultiEntangledSpec(dimension=dimension, l=l, k=k))
    return SwapScenario(dimension=dimension, systems=tuple(systems), measured_counts=tuple(counts))


def _configure_worker(max_amplitudes: int) -> None:
    configure_settings(max_amplitudes=max_amplitudes)


def _verify_seed(job) -> VerificationReport:
    seed, limits = job
    return verify_scenario(random_scenario(seed, limits), max_amplitudes=limits.max_amplitudes)


def run_campaign(
    seeds: Sequence[int],
    limits: Optional[ScenarioLimits] = None,
    workers: Optional[int] = None,
) -> List[VerificationReport]:
    """Verify one random scenario per seed; reports come back in seed order"""
    limits = limits or ScenarioLimits()
    if limits.max_amplitudes is None:
        limits = limits.model_copy(update={"max_amplitudes": get_settings().max_amplitudes})
    workers = workers or get_settings().workers
    jobs = [(seed, limits) for seed in seeds]
    if workers > 1:
        # workers start from a fresh interpreter under spawn/forkserver
        with ProcessPoolExecutor(
            max_workers=workers, initializer=_configure_worker, initargs=(limits.max_amplitudes,)
        ) as pool:
            return list(pool.map(_verify_seed, jobs))
    return [_verify_seed(job) for job in jobs]
