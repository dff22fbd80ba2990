from typing import Annotated, List, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, model_validator

SEED_MAX = 2 ** 64 - 1


class SystemEntry(BaseModel):
    model_config = ConfigDict(extra="forbid")

    l: int = Field(..., ge=0, description="Phase index of the system")
    k: List[int] = Field(..., min_length=1, description="Offsets k_1..k_m of particles 1..m")


class LastMeasurement(BaseModel):
    model_config = ConfigDict(extra="forbid")

    mode: Literal["last"]
    counts: List[int] = Field(..., description="Number of trailing particles measured per system")


class ExplicitMeasurement(BaseModel):
    model_config = ConfigDict(extra="forbid")

    mode: Literal["explicit"]
    particles: List[List[int]] = Field(..., description="Global indices measured per system, in listed order")


class OutcomeEntry(BaseModel):
    model_config = ConfigDict(extra="forbid")

    r: int = Field(..., ge=0)
    s: List[int] = Field(default_factory=list)


class ScenarioFile(BaseModel):
    """On-disk scenario: systems, measured particles, optional outcome and seed"""

    model_config = ConfigDict(extra="forbid")

    schema_version: Literal["1"] = "1"
    dimension: int = Field(..., ge=2)
    systems: List[SystemEntry] = Field(..., min_length=1)
    measure: Annotated[Union[LastMeasurement, ExplicitMeasurement], Field(discriminator="mode")]
    outcome: Optional[OutcomeEntry] = None
    seed: Optional[int] = Field(None, ge=0, le=SEED_MAX)

    @model_validator(mode="after")
    def _check_consistency(self) -> "ScenarioFile":
        dimension = self.dimension
        for index, system in enumerate(self.systems):
            values = [system.l] + system.k
            if any(not 0 <= v < dimension for v in values):
                raise ValueError(f"systems[{index}]: l and k entries must lie in [0, {dimension})")

        self._check_measure()

        if self.outcome is not None:
            total = sum(len(chosen) for chosen in self.measured_local())
            if len(self.outcome.s) != total - 1:
                raise ValueError(
                    f"outcome needs {total - 1} offsets for {total} measured particles, got {len(self.outcome.s)}"
                )
            if any(not 0 <= v < dimension for v in [self.outcome.r] + self.outcome.s):
                raise ValueError(f"outcome entries must lie in [0, {dimension})")
        return self

    def system_starts(self) -> List[int]:
        starts, position = [], 0
        for system in self.systems:
            starts.append(position)
            position += len(system.k) + 1
        return starts

    def _check_measure(self) -> None:
        groups = self.measure.counts if isinstance(self.measure, LastMeasurement) else self.measure.particles
        if len(groups) != len(self.systems):
            raise ValueError(f"measure lists {len(groups)} systems but the scenario has {len(self.systems)}")
        for index, (start, system, group) in enumerate(zip(self.system_starts(), self.systems, groups)):
            size = len(system.k) + 1
            if isinstance(self.measure, LastMeasurement):
                if group < 1:
                    raise ValueError("each system must contribute at least one measured particle")
                if group > size:
                    raise ValueError(f"system {index}: cannot measure {group} of {size} particles")
                continue
            if not group:
                raise ValueError("each system must contribute at least one measured particle")
            if len(set(group)) != len(group):
                raise ValueError(f"system {index}: measured particles must be distinct")
            outside = [p for p in group if not start <= p < start + size]
            if outside:
                raise ValueError(f"system {index}: particles {outside} do not belong to this system")

    def measured_local(self) -> List[List[int]]:
        """Measured particles per system as indices local to that system"""
        if isinstance(self.measure, LastMeasurement):
            return [
                list(range(len(system.k) + 1 - count, len(system.k) + 1))
                for system, count in zip(self.systems, self.measure.counts)
            ]
        return [
            [p - start for p in group]
            for start, group in zip(self.system_starts(), self.measure.particles)
        ]
