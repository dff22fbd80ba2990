from datetime import datetime
from typing import Dict, List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field

from services.gbell import GBellLabel, MultiEntangledSpec
from services.qudit_state import StateVector

SCHEMA_VERSION = "1"


class SpecModel(BaseModel):
    l: int
    k: List[int]
    text: str

    @classmethod
    def from_spec(cls, spec: MultiEntangledSpec) -> "SpecModel":
        return cls(l=spec.l, k=list(spec.k), text=spec.render())


class LabelModel(BaseModel):
    r: int
    s: List[int]
    text: str

    @classmethod
    def from_label(cls, label: GBellLabel) -> "LabelModel":
        return cls(r=label.r, s=list(label.s), text=label.render())


class AmplitudeDump(BaseModel):
    num_qudits: int
    amplitudes: List[Tuple[float, float]] = Field(..., description="[re, im] pairs, big-endian index order")

    @classmethod
    def from_state(cls, state: StateVector) -> "AmplitudeDump":
        return cls(
            num_qudits=state.num_qudits,
            amplitudes=[(float(a.real), float(a.imag)) for a in state.amplitudes],
        )


class ScenarioDescriptor(BaseModel):
    dimension: int
    systems: List[SpecModel]
    measured: List[List[int]] = Field(..., description="Global indices of measured particles per system, in listed order")


class LabelRecord(BaseModel):
    label: LabelModel
    feasible: bool
    oracle_probability: float
    predicted: Optional[SpecModel] = None
    fidelity: Optional[float] = None


class VerificationSummary(BaseModel):
    label_count: int
    feasible_count: int
    expected_probability: float
    total_probability: float
    max_fidelity_deviation: float
    max_probability_deviation: float
    passed: bool
    wall_time_seconds: float


class VerificationReport(BaseModel):
    schema_version: str = SCHEMA_VERSION
    kind: Literal["verification"] = "verification"
    scenario: ScenarioDescriptor
    records: List[LabelRecord]
    summary: VerificationSummary


class MeasureReport(BaseModel):
    schema_version: str = SCHEMA_VERSION
    kind: Literal["measurement"] = "measurement"
    scenario: ScenarioDescriptor
    mode: Literal["explicit", "sampled"]
    seed: Optional[int] = None
    label: LabelModel
    feasible: bool
    probability: float
    predicted: Optional[SpecModel] = None
    fidelity: Optional[float] = None
    post_state: Optional[AmplitudeDump] = None


class DistributionRow(BaseModel):
    label: LabelModel
    probability: float
    feasible: bool
    predicted: Optional[SpecModel] = None
    post_state: Optional[AmplitudeDump] = None


class EnumerationReport(BaseModel):
    schema_version: str = SCHEMA_VERSION
    kind: Literal["enumeration"] = "enumeration"
    scenario: ScenarioDescriptor
    unmeasured: List[int]
    total_probability: float
    feasible_count: int
    rows: List[DistributionRow]


class BasisEntry(BaseModel):
    label: LabelModel
    support: List[List[int]] = Field(..., description="Digit strings of the D nonzero kets")
    amplitudes: List[Tuple[float, float]]


class BasisReport(BaseModel):
    schema_version: str = SCHEMA_VERSION
    kind: Literal["basis"] = "basis"
    dimension: int
    particles: int
    entries: List[BasisEntry]


class CampaignRun(BaseModel):
    seed: int
    scenario: ScenarioDescriptor
    summary: VerificationSummary


class CampaignReport(BaseModel):
    schema_version: str = SCHEMA_VERSION
    kind: Literal["campaign"] = "campaign"
    passed: bool
    failed_seeds: List[int]
    runs: List[CampaignRun]


class RunSummary(BaseModel):
    id: int
    scenario_hash: str
    source: Optional[str] = None
    dimension: int
    system_count: int
    total_qudits: int
    label_count: int
    feasible_count: int
    passed: bool
    max_fidelity_deviation: float
    max_probability_deviation: float
    wall_time_seconds: float
    created_at: Optional[datetime] = None

    model_config = ConfigDict(from_attributes=True)


class HistorySummary(BaseModel):
    total_runs: int
    passed: int = 0
    failed: int = 0
    by_dimension: Dict[int, int] = Field(default_factory=dict)
    mean_wall_time_seconds: Optional[float] = None
    first_run_at: Optional[datetime] = None
    last_run_at: Optional[datetime] = None


class HistoryReport(BaseModel):
    schema_version: str = SCHEMA_VERSION
    kind: Literal["history"] = "history"
    total: int
    runs: List[RunSummary]
    summary: HistorySummary
