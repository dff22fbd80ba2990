"""
Closed-form post-measurement states for entanglement swapping.

Canonical form: system j (m_j + 1 particles) has its last a_j particles
measured; the flat measured list runs system by system, ascending within each
system, and its first entry is the phase reference of the Bell basis. The
first measured particle of system j then sits at flat position
A_{j-1} = a_1 + ... + a_{j-1}.

Solving the support conditions gives n^j = n^1 + delta_j with

    delta_j = -(k^1_{m_1-a_1+1} + s_{A_{j-1}} - k^j_{m_j-a_j+1})  (mod D),

and the unmeasured particles form psi(l~; k~) with l~ = sum_j l^j - r,
k~^j_i = k^j_i - delta_j and the bridging entry in front of system j+1 equal
to -delta_{j+1}.
"""

from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from core.config import get_settings
from core.exceptions import IncompatibleOperandsError, SizeGuardError
from services.gbell import GBellLabel, MultiEntangledSpec
from services.measurement import MeasurementSpec



class SwapScenario(BaseModel):
    """q maximally entangled systems, the last a_j particles of system j measured"""

    model_config = ConfigDict(frozen=True)

    dimension: int = Field(..., ge=2)
    systems: tuple[MultiEntangledSpec, ...]
    measured_counts: tuple[int, ...]

    @model_validator(mode="after")
    def _validate(self) -> "SwapScenario":
        if not self.systems:
            raise ValueError("a scenario needs at least one system")
        if len(self.measured_counts) != len(self.systems):
            raise ValueError(
                f"{len(self.measured_counts)} measured counts for {len(self.systems)} systems"
            )
        for index, (system, count) in enumerate(zip(self.systems, self.measured_counts)):
            if system.dimension != self.dimension:
                raise ValueError(f"system {index} has dimension {system.dimension}, expected {self.dimension}")
            if system.num_particles < 2:
                raise ValueError(f"system {index} must hold at least two particles")
            if count < 1:
                raise ValueError("each system must contribute at least one measured particle")
            if count > len(system.k):
                raise ValueError(
                    f"system {index} must keep at least one particle unmeasured "
                    f"({count} of {system.num_particles} measured)"
                )
        limit = get_settings().max_amplitudes
        if self.dimension ** self.total_qudits > limit:
            raise ValueError(str(SizeGuardError(self.dimension, self.total_qudits, limit)))
        return self

    @property
    def q(self) -> int:
        return len(self.systems)

    @property
    def m(self) -> tuple[int, ...]:
        return tuple(len(system.k) for system in self.systems)

    @property
    def total_qudits(self) -> int:
        return sum(system.num_particles for system in self.systems)

    @property
    def measured_total(self) -> int:
        return sum(self.measured_counts)

    @property
    def unmeasured_total(self) -> int:
        return self.total_qudits - self.measured_total

    def system_starts(self) -> list[int]:
        """Global index of each system's reference particle"""
        starts, position = [], 0
        for system in self.systems:
            starts.append(position)
            position += system.num_particles
        return starts

    def block_starts(self) -> list[int]:
        """Flat label position of each system's first measured particle"""
        starts, position = [], 0
        for count in self.measured_counts:
            starts.append(position)
            position += count
        return starts

    def measurement_spec(self) -> MeasurementSpec:
        particles = []
        for start, system, count in zip(self.system_starts(), self.systems, self.measured_counts):
            last = start + system.num_particles
            particles.extend(range(last - count, last))
        return MeasurementSpec(particles=tuple(particles))


class Prediction(BaseModel):
    model_config = ConfigDict(frozen=True)

    result: MultiEntangledSpec
    offsets: tuple[int, ...]


def predict_pairs(dimension: int, l: int, k: int, l2: int, k2: int, r: int, s: int) -> tuple[int, int]:
    """
    psi(l,k)_01 (x) psi(l2,k2)_23 with particles 1 and 2 Bell-measured as bell(r; s):
    particles 0 and 3 are left in psi(l + l2 - r; k + k2 + s).
    """
    return (l + l2 - r) % dimension, (k + k2 + s) % dimension


def _check_label(scenario: SwapScenario, label: GBellLabel) -> None:
    if label.dimension != scenario.dimension or label.num_particles != scenario.measured_total:
        raise IncompatibleOperandsError(
            f"label {label.render()} does not fit {scenario.measured_total} measured qudits "
            f"of dimension {scenario.dimension}"
        )


def is_feasible(scenario: SwapScenario, label: GBellLabel) -> bool:
    """
    Within one system the measured digits are n^j - k^j_i, so their offsets
    relative to the block's first measured particle are fixed by the k^j_i.
    """
    _check_label(scenario, label)
    dimension = scenario.dimension
    offsets = label.full_s
    for system, count, block in zip(scenario.systems, scenario.measured_counts, scenario.block_starts()):
        full_k = system.full_k
        first = len(system.k) - count + 1
        for u in range(1, count):
            if (offsets[block + u] - offsets[block]) % dimension != (full_k[first + u] - full_k[first]) % dimension:
                return False
    return True


def feasible_labels(scenario: SwapScenario):
    """
    The D^q feasible labels in enumeration order: r and the q-1 bridging
    offsets are free, every other offset is fixed by its block.
    """
    dimension = scenario.dimension
    blocks = scenario.block_starts()
    for r in range(dimension):
        for code in range(dimension ** (scenario.q - 1)):
            free = [0] + [(code // dimension ** (scenario.q - 2 - j)) % dimension for j in range(scenario.q - 1)]
            offsets = [0] * scenario.measured_total
            for j, (system, count, block) in enumerate(zip(scenario.systems, scenario.measured_counts, blocks)):
                full_k = system.full_k
                first = len(system.k) - count + 1
                for u in range(count):
                    offsets[block + u] = (free[j] + full_k[first + u] - full_k[first]) % dimension
            yield GBellLabel(dimension=dimension, r=r, s=tuple(offsets[1:]))


def predict_two_systems(
    dimension: int,
    spec1: MultiEntangledSpec,
    spec2: MultiEntangledSpec,
    a1: int,
    a2: int,
    label: GBellLabel,
) -> Optional[Prediction]:
    """Last a1 particles of system 1 and last a2 of system 2 measured; None if infeasible"""
    scenario = SwapScenario(dimension=dimension, systems=(spec1, spec2), measured_counts=(a1, a2))
    if not is_feasible(scenario, label):
        return None
    m1, m2 = len(spec1.k), len(spec2.k)
    k, k_prime = spec1.full_k, spec2.full_k
    delta_k = (k[m1 - a1 + 1] + label.full_s[a1] - k_prime[m2 - a2 + 1]) % dimension
    k_tilde = [k[i] for i in range(1, m1 - a1 + 1)]
    k_tilde += [(k_prime[i] + delta_k) % dimension for i in range(0, m2 - a2 + 1)]
    result = MultiEntangledSpec(
        dimension=dimension,
        l=spec1.l + spec2.l - label.r,
        k=tuple(k_tilde),
    )
    return Prediction(result=result, offsets=(0, (-delta_k) % dimension))


def predict_general(scenario: SwapScenario, label: GBellLabel) -> Optional[Prediction]:
    """Post-measurement state of all unmeasured particles; None if the label is infeasible"""
    if not is_feasible(scenario, label):
        return None
    dimension = scenario.dimension
    offsets = label.full_s
    firsts = [len(system.k) - count + 1 for system, count in zip(scenario.systems, scenario.measured_counts)]
    anchor = scenario.systems[0].full_k[firsts[0]]
    deltas = [
        (-(anchor + offsets[block] - system.full_k[first])) % dimension if j else 0
        for j, (system, first, block) in enumerate(zip(scenario.systems, firsts, scenario.block_starts()))
    ]
    k_tilde = []
    for j, (system, first) in enumerate(zip(scenario.systems, firsts)):
        if j:
            k_tilde.append((-deltas[j]) % dimension)
        k_tilde.extend((system.full_k[i] - deltas[j]) % dimension for i in range(1, first))
    result = MultiEntangledSpec(
        dimension=dimension,
        l=sum(system.l for system in scenario.systems) - label.r,
        k=tuple(k_tilde),
    )
    return Prediction(result=result, offsets=tuple(deltas))
