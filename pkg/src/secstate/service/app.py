"""HTTP surface of the engine: scoring reads, event injection, intent CRUD."""

from __future__ import annotations

from typing import Any

from fastapi import FastAPI, Query, Request
from fastapi.responses import JSONResponse

from .. import __version__
from ..errors import (
    CapacityExceededError,
    EmptyDomainError,
    ExhaustedScenarioError,
    NoDomainsError,
    NotLoadedError,
    SecStateError,
    UnknownIdError,
    ValidationError,
)
from ..fsm import transition_table_document
from .host import EngineHost
from .schemas import (
    EventAccepted,
    EventRequest,
    FsmRecordModel,
    HealthModel,
    IntentListResponse,
    IntentModel,
    IntentPatchRequest,
    IntentRequest,
    LogResponse,
    PendingEventsResponse,
    ReplayRequest,
    ReportsResponse,
    RunRequest,
    RunResponse,
    ScenarioInfoModel,
    ScenarioRequest,
    SnapshotModel,
    StateModel,
    StepRequest,
    StepResponse,
)

#: Error classes checked in order; first match decides the HTTP status.
_STATUS_BY_ERROR: list[tuple[type[SecStateError], int]] = [
    (UnknownIdError, 404),
    (CapacityExceededError, 409),
    (ExhaustedScenarioError, 409),
    (NotLoadedError, 409),
    (EmptyDomainError, 409),
    (NoDomainsError, 409),
]


def _status_for(exc: SecStateError) -> int:
    for cls, status in _STATUS_BY_ERROR:
        if isinstance(exc, cls):
            return status
    return 422


def create_app(host: EngineHost | None = None) -> FastAPI:
    engine = host if host is not None else EngineHost()
    app = FastAPI(
        title="secstate",
        version=__version__,
        description="Security posture scoring and simulation for mobile networks",
    )
    app.state.host = engine

    @app.exception_handler(SecStateError)
    async def engine_error(request: Request, exc: SecStateError) -> JSONResponse:
        return JSONResponse(
            status_code=_status_for(exc),
            content={"detail": str(exc), "error": type(exc).__name__},
        )

    @app.get("/health", response_model=HealthModel)
    def health() -> dict[str, Any]:
        return {"status": "ok", "loaded": engine.loaded, "version": __version__}

    # -- scenario lifecycle

    @app.post("/scenario", response_model=ScenarioInfoModel)
    def load_scenario(body: ScenarioRequest) -> dict[str, Any]:
        if (body.document is None) == (body.path is None):
            raise ValidationError("provide exactly one of document or path")
        if body.document is not None:
            return engine.load(body.document, log_path=body.log_path)
        assert body.path is not None
        return engine.load_path(body.path, log_path=body.log_path)

    @app.get("/scenario")
    def scenario_document() -> dict[str, Any]:
        return engine.scenario_document()

    @app.post("/scenario/replay", response_model=ScenarioInfoModel)
    def replay_scenario(body: ReplayRequest) -> dict[str, Any]:
        return engine.restore(body.path, log_path=body.log_path)

    # -- scores and lifecycle state

    @app.get("/state", response_model=StateModel)
    def full_state(at: float | None = Query(default=None, ge=0.0)) -> dict[str, Any]:
        return engine.state(at=at)

    @app.get("/state/network", response_model=SnapshotModel)
    def network_state(at: float | None = Query(default=None, ge=0.0)) -> dict[str, Any]:
        return engine.scope_state("network", at=at)

    @app.get("/state/domain/{domain_id}", response_model=SnapshotModel)
    def domain_state(
        domain_id: str, at: float | None = Query(default=None, ge=0.0)
    ) -> dict[str, Any]:
        return engine.scope_state("domain", domain_id, at=at)

    @app.get("/state/nf/{nf_id}", response_model=SnapshotModel)
    def nf_state(nf_id: str, at: float | None = Query(default=None, ge=0.0)) -> dict[str, Any]:
        return engine.scope_state("nf", nf_id, at=at)

    # -- lifecycle machine (the static /fsm/table route must precede /fsm/{nf_id})

    @app.get("/fsm/table")
    def fsm_table() -> dict[str, Any]:
        return transition_table_document()

    @app.get("/fsm")
    def fsm_all() -> dict[str, Any]:
        return engine.fsm_records()

    @app.get("/fsm/{nf_id}", response_model=FsmRecordModel)
    def fsm_one(nf_id: str) -> dict[str, Any]:
        return engine.fsm_record(nf_id)

    # -- events

    @app.post("/events", response_model=EventAccepted, status_code=202)
    def inject_event(body: EventRequest) -> dict[str, Any]:
        return engine.inject(body.model_dump(exclude_none=True))

    @app.get("/events/pending", response_model=PendingEventsResponse)
    def pending_events() -> dict[str, Any]:
        return engine.pending_events()

    # -- intents

    @app.post("/intents", response_model=IntentModel, status_code=201)
    def create_intent(body: IntentRequest) -> dict[str, Any]:
        doc: dict[str, Any] = {"id": body.id, "scope": body.scope, "threshold": body.threshold}
        if body.scope_id is not None:
            doc["scope_id"] = body.scope_id
        return engine.register_intent(doc)

    @app.get("/intents", response_model=IntentListResponse)
    def list_intents(children: bool = Query(default=False)) -> dict[str, Any]:
        return {"intents": engine.intents(children=children)}

    @app.patch("/intents/{intent_id}", response_model=IntentModel)
    def patch_intent(intent_id: str, body: IntentPatchRequest) -> dict[str, Any]:
        return engine.update_intent(intent_id, body.threshold)

    @app.delete("/intents/{intent_id}")
    def delete_intent(intent_id: str) -> dict[str, Any]:
        return engine.remove_intent(intent_id)

    # -- record feeds

    @app.get("/reports", response_model=ReportsResponse)
    def reports(since: int = Query(default=-1, ge=-1)) -> dict[str, Any]:
        return engine.reports(since=since)

    @app.get("/log", response_model=LogResponse)
    def log_feed(
        since: int = Query(default=-1, ge=-1),
        kinds: str | None = Query(default=None),
        limit: int = Query(default=1000, ge=1, le=100_000),
    ) -> dict[str, Any]:
        kind_set = {k.strip() for k in kinds.split(",") if k.strip()} if kinds else None
        return engine.log_records(since=since, kinds=kind_set, limit=limit)

    # -- stepping

    @app.post("/sim/step", response_model=StepResponse)
    def sim_step(body: StepRequest | None = None) -> dict[str, Any]:
        return engine.step(count=body.count if body is not None else 1)

    @app.post("/sim/run", response_model=RunResponse)
    def sim_run(body: RunRequest | None = None) -> dict[str, Any]:
        return engine.run(until=body.until if body is not None else None)

    return app


app = create_app()
