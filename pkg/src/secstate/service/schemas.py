"""Request and response shapes of the HTTP service."""

from __future__ import annotations

from typing import Any, Literal

from pydantic import BaseModel, ConfigDict, Field


class ScenarioRequest(BaseModel):
    """Load a scenario from an inline document or a server-side file path."""

    model_config = ConfigDict(extra="forbid")

    document: dict[str, Any] | None = None
    path: str | None = None
    log_path: str | None = None


class ReplayRequest(BaseModel):
    """Rebuild the engine from a persisted run log."""

    model_config = ConfigDict(extra="forbid")

    path: str
    log_path: str | None = None


class StepRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    count: int = Field(default=1, ge=1, le=10_000)


class RunRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    until: float | None = Field(default=None, ge=0.0)


class EventRequest(BaseModel):
    """An event document; kind-specific payload fields ride along as extras.

    Without a time the event is scheduled at the current clock.
    """

    model_config = ConfigDict(extra="allow")

    kind: str
    time: float | None = Field(default=None, ge=0.0)
    nf: str | None = None


class IntentRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    id: str
    scope: Literal["network", "domain", "nf"] = "network"
    scope_id: str | None = None
    threshold: float = Field(ge=0.0, le=1.0)


class IntentPatchRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    threshold: float = Field(ge=0.0, le=1.0)


class MeasuresModel(BaseModel):
    noncompliant_ratio: float
    impact: float
    patch_delay: float
    criticality: float
    neighborhood: float
    local_score: float


class SnapshotModel(BaseModel):
    """Posture of one scope; per-NF snapshots carry the detail fields."""

    scope: str
    id: str | None = None
    time: float
    controls: float
    misconfig: float
    surface: float
    composite: float
    surface_by_category: dict[str, float] | None = None
    measures: MeasuresModel | None = None


class StateModel(BaseModel):
    clock: float
    scan_count: int
    digest: str
    network: SnapshotModel
    domains: dict[str, SnapshotModel]
    nfs: dict[str, SnapshotModel]
    states: dict[str, str]
    intents: list[dict[str, Any]]
    at: float | None = None


class TransitionModel(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    time: float
    from_state: str = Field(alias="from")
    trigger: str
    to_state: str = Field(alias="to")
    event_id: int | None = None


class FsmRecordModel(BaseModel):
    nf: str
    current: str
    history: list[TransitionModel]


class ReportModel(BaseModel):
    seq: int
    intent: str
    scope: str
    id: str | None = None
    time: float
    threshold: float
    observed: float
    shortfall: float
    contributions: dict[str, float]
    top_contributor: str


class ReportsResponse(BaseModel):
    cursor: int
    reports: list[ReportModel]


class LogResponse(BaseModel):
    cursor: int
    records: list[dict[str, Any]]


class StepResultModel(BaseModel):
    kind: str
    time: float
    event_id: int | None = None


class StepResponse(BaseModel):
    results: list[StepResultModel]
    clock: float
    digest: str


class RunResponse(BaseModel):
    until: float
    events: int
    ticks: int
    clock: float
    digest: str


class ScenarioInfoModel(BaseModel):
    name: str
    clock: float
    digest: str
    domains: int
    nfs: int
    scheduled_events: int
    intents: int


class EventAccepted(BaseModel):
    event: dict[str, Any]
    clock: float


class IntentModel(BaseModel):
    id: str
    scope: str
    scope_id: str | None = None
    threshold: float
    parent: str | None = None


class IntentListResponse(BaseModel):
    intents: list[IntentModel]


class PendingEventsResponse(BaseModel):
    clock: float
    events: list[dict[str, Any]]


class HealthModel(BaseModel):
    status: str
    loaded: bool
    version: str
