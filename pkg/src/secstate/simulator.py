"""Deterministic discrete-event engine driving metrics, lifecycle and intents.

Scheduled events are processed in (time, id) order; scan ticks fire implicitly
at every multiple of the scan period, after scheduled events carrying the same
timestamp. Every externally visible effect is appended to a JSON-lines run log
whose bytes are identical across runs of the same scenario, and from which a
run (including injected events and intent edits) can be replayed exactly.
"""

from __future__ import annotations

import bisect
import hashlib
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Any, Iterable

from .aggregation import NetworkScorecard, ScopeKind, ScoreWeights, score_network
from .errors import (
    CapacityExceededError,
    ExhaustedScenarioError,
    ParseError,
    ScopeMismatchError,
    UnknownEventKindError,
    UnknownIdError,
    ValidationError,
)
from .events import Event, EventKind, parse_event
from .fsm import SecurityState, SecurityStateRecord, Trigger, classify_event, transition
from .intent import Intent, IntentRegistry, parse_intent, report_cycle
from .metrics.misconfig import ScanConfig, advance_patch_timers
from .model import EntryPoint, Network, NetworkFunction, OmContext, OmKind, PenaltyContext, load_topology

logger = logging.getLogger(__name__)

_CONFIG_KEYS = {"scan_period", "time_to_patch_limit", "effectiveness_threshold", "weights"}
_SCENARIO_KEYS = {
    "name",
    "domains",
    "network_functions",
    "links",
    "config",
    "intents",
    "events",
    "until",
}


@dataclass(frozen=True)
class SimConfig:
    """Run parameters: scan cadence, verification threshold and score weights."""

    scan: ScanConfig = field(default_factory=ScanConfig)
    effectiveness_threshold: float = 0.8
    weights: ScoreWeights = field(default_factory=ScoreWeights)

    def validate(self) -> None:
        self.scan.validate()
        if not 0.0 <= self.effectiveness_threshold <= 1.0:
            raise ValidationError(
                f"effectiveness threshold {self.effectiveness_threshold} outside [0, 1]"
            )

    def to_document(self) -> dict[str, Any]:
        return {
            "scan_period": self.scan.scan_period,
            "time_to_patch_limit": self.scan.time_to_patch_limit,
            "effectiveness_threshold": self.effectiveness_threshold,
            "weights": self.weights.as_mapping(),
        }

    @classmethod
    def from_document(cls, doc: dict[str, Any]) -> "SimConfig":
        if not isinstance(doc, dict):
            raise ValidationError("config must be an object")
        unknown = set(doc) - _CONFIG_KEYS
        if unknown:
            raise ValidationError(f"unknown config fields: {sorted(unknown)}")
        weights_doc = doc.get("weights")
        if weights_doc is None:
            weights = ScoreWeights()
        elif isinstance(weights_doc, dict):
            extra = set(weights_doc) - {"controls", "misconfig", "surface"}
            if extra:
                raise ValidationError(f"unknown weight fields: {sorted(extra)}")
            weights = ScoreWeights(
                controls=float(weights_doc.get("controls", 1.0 / 3.0)),
                misconfig=float(weights_doc.get("misconfig", 1.0 / 3.0)),
                surface=float(weights_doc.get("surface", 1.0 / 3.0)),
            )
        else:
            weights = ScoreWeights.from_sequence(weights_doc)
        cfg = cls(
            scan=ScanConfig(
                scan_period=float(doc.get("scan_period", 1.0)),
                time_to_patch_limit=float(doc.get("time_to_patch_limit", 90.0)),
            ),
            effectiveness_threshold=float(doc.get("effectiveness_threshold", 0.8)),
            weights=weights,
        )
        cfg.validate()
        return cfg


@dataclass
class Scenario:
    """A parsed scenario document: topology, config, intents and event schedule."""

    name: str
    document: dict[str, Any]
    config: SimConfig
    intents: list[Intent]
    events: list[Event]
    horizon: float | None = None

    def build_network(self) -> Network:
        """Fresh mutable topology; each run gets its own copy."""
        return load_topology(self.document)


def validate_intent_scope(intent: Intent, network: Network) -> None:
    """Check that an intent's scope target exists and is of the right kind."""
    target = intent.scope.target
    if intent.scope.kind is ScopeKind.DOMAIN:
        assert target is not None
        if target in network.domains:
            return
        if target in network.nfs:
            raise ScopeMismatchError(
                f"intent {intent.intent_id!r}: {target!r} is a network function, not a domain"
            )
        raise UnknownIdError(f"intent {intent.intent_id!r} targets unknown domain {target!r}")
    if intent.scope.kind is ScopeKind.NF:
        assert target is not None
        if target in network.nfs:
            return
        if target in network.domains:
            raise ScopeMismatchError(
                f"intent {intent.intent_id!r}: {target!r} is a domain, not a network function"
            )
        raise UnknownIdError(f"intent {intent.intent_id!r} targets unknown NF {target!r}")


def load_scenario(document: str | dict[str, Any]) -> Scenario:
    """Parse and validate a scenario document (JSON text or parsed mapping).

    Events are sorted stably by time and numbered 1..n in firing order, so
    equal-time events keep their file order and injected events (numbered
    beyond n) come after them.
    """
    if isinstance(document, (str, bytes)):
        try:
            doc = json.loads(document)
        except json.JSONDecodeError as exc:
            raise ParseError(f"scenario document is not valid JSON: {exc}") from exc
    else:
        doc = document
    if not isinstance(doc, dict):
        raise ParseError("scenario document must be a JSON object")
    unknown = set(doc) - _SCENARIO_KEYS
    if unknown:
        raise ValidationError(f"unknown scenario fields: {sorted(unknown)}")

    network = load_topology(doc)
    config = SimConfig.from_document(doc.get("config") or {})

    intents: list[Intent] = []
    seen_intents: set[str] = set()
    for intent_doc in doc.get("intents", []):
        intent = parse_intent(intent_doc)
        if intent.intent_id in seen_intents:
            raise ValidationError(f"duplicate intent id {intent.intent_id!r}")
        seen_intents.add(intent.intent_id)
        validate_intent_scope(intent, network)
        intents.append(intent)

    events: list[Event] = []
    for index, event_doc in enumerate(doc.get("events", [])):
        event = parse_event(event_doc, index)
        if event.nf_id is not None and event.nf_id not in network.nfs:
            raise ValidationError(
                f"event #{index} ({event.kind.value}) targets unknown NF {event.nf_id!r}"
            )
        events.append(event)
    events.sort(key=lambda ev: ev.time)
    for position, event in enumerate(events):
        event.event_id = position + 1

    horizon: float | None = None
    if doc.get("until") is not None:
        horizon = float(doc["until"])
        if horizon <= 0:
            raise ValidationError(f"scenario horizon must be positive, got {horizon}")

    return Scenario(
        name=str(doc.get("name", "scenario")),
        document=doc,
        config=config,
        intents=intents,
        events=events,
        horizon=horizon,
    )


# --- event application -------------------------------------------------------


def _count_of(payload: dict[str, Any]) -> int:
    count = int(payload.get("count", 1))
    if count < 1:
        raise ValidationError(f"count must be >= 1, got {count}")
    return count


def _radio_context(nf: NetworkFunction, ep_id: str) -> OmContext:
    ep = nf.entry_point(ep_id)
    if ep.om_context.kind is not OmKind.RADIO:
        raise ValidationError(f"entry point {ep_id!r} on {nf.nf_id!r} is not a radio cell")
    return ep.om_context


def _penalty_contexts(nf: NetworkFunction, ep_id: str) -> list[PenaltyContext]:
    """Penalty contexts tied to one cell; kept in lockstep with its UE counters."""
    found = []
    for req in nf.control_sets:
        for slot in req.controls:
            if slot.context is not None and slot.context.cell_ep_id == ep_id:
                found.append(slot.context)
    return found


def _apply_ue_attached(nf: NetworkFunction, payload: dict[str, Any]) -> None:
    ep_id = str(payload["ep"])
    ctx = _radio_context(nf, ep_id)
    count = _count_of(payload)
    contexts = _penalty_contexts(nf, ep_id)
    if ctx.ue_capacity is not None and ctx.ue_connected + count > ctx.ue_capacity:
        raise CapacityExceededError(
            f"cell {ep_id!r} on {nf.nf_id!r}: {ctx.ue_connected + count} UEs "
            f"exceed capacity {ctx.ue_capacity}"
        )
    for pen in contexts:
        if pen.ue_connected + count > pen.ue_capacity:
            raise CapacityExceededError(
                f"cell {ep_id!r} on {nf.nf_id!r}: {pen.ue_connected + count} UEs "
                f"exceed capacity {pen.ue_capacity}"
            )
    ctx.ue_connected += count
    if payload.get("potential_attacker"):
        ctx.ue_potential_attackers += count
    for pen in contexts:
        pen.ue_connected += count


def _apply_ue_detached(nf: NetworkFunction, payload: dict[str, Any]) -> None:
    ep_id = str(payload["ep"])
    ctx = _radio_context(nf, ep_id)
    count = _count_of(payload)
    ctx.ue_connected = max(0, ctx.ue_connected - count)
    if payload.get("potential_attacker"):
        ctx.ue_potential_attackers = max(0, ctx.ue_potential_attackers - count)
    # detaching ordinary UEs can still shrink the attacker pool bound
    ctx.ue_potential_attackers = min(ctx.ue_potential_attackers, ctx.ue_connected)
    for pen in _penalty_contexts(nf, ep_id):
        pen.ue_connected = max(0, pen.ue_connected - count)


def _apply_cell_added(nf: NetworkFunction, payload: dict[str, Any]) -> None:
    doc = payload["entry_point"]
    if not isinstance(doc, dict):
        raise ValidationError("CellAdded entry_point must be an object")
    ep = EntryPoint.from_document(doc, f"nf.{nf.nf_id}.ep")
    if any(existing.ep_id == ep.ep_id for existing in nf.entry_points):
        raise ValidationError(f"NF {nf.nf_id!r} already has entry point {ep.ep_id!r}")
    if len(nf.entry_points) >= nf.ep_max:
        raise CapacityExceededError(
            f"NF {nf.nf_id!r} already has ep_max={nf.ep_max} entry points"
        )
    nf.entry_points.append(ep)


def _apply_cell_removed(nf: NetworkFunction, payload: dict[str, Any]) -> None:
    ep = nf.entry_point(str(payload["ep"]))
    nf.entry_points.remove(ep)
    # orphaned penalty contexts lose their cell and with it the utilization
    for pen in _penalty_contexts(nf, ep.ep_id):
        pen.cell_ep_id = None
        pen.ue_connected = 0


def _apply_config_changed(nf: NetworkFunction, payload: dict[str, Any]) -> None:
    rule = nf.rule(str(payload["rule"]))
    value = int(payload["noncompliant_attributes"])
    if not 0 <= value <= rule.total_attributes:
        raise ValidationError(
            f"rule {rule.rule_id!r} on {nf.nf_id!r}: noncompliant_attributes {value} "
            f"outside [0, {rule.total_attributes}]"
        )
    if value > 0 and nf.om_context is None:
        # The impact metric refuses to weigh non-compliance without an NF
        # om_context; reject before mutating so scoring stays total.
        raise ValidationError(
            f"rule {rule.rule_id!r} on {nf.nf_id!r} cannot become non-compliant: "
            "the NF has no om_context to weigh the impact"
        )
    rule.noncompliant_attributes = value
    if rule.compliant:
        rule.noncompliant_scans = 0
        rule.patch_timer = 0.0


def _apply_feature_added(nf: NetworkFunction, payload: dict[str, Any]) -> None:
    ep = nf.entry_point(str(payload["ep"]))
    add_total = int(payload["add_data_items"])
    add_exposed = int(payload.get("add_exposed", 0))
    if add_total < 0 or add_exposed < 0:
        raise ValidationError("FeatureAdded additions must be non-negative")
    if ep.data_items_exposed + add_exposed > ep.data_items_total + add_total:
        raise ValidationError(
            f"entry point {ep.ep_id!r}: exposed items would exceed the total"
        )
    ep.data_items_total += add_total
    ep.data_items_exposed += add_exposed


def _link_pairs(raw: Any, where: str) -> list[tuple[str, str]]:
    pairs = []
    for pair in raw or []:
        if not isinstance(pair, (list, tuple)) or len(pair) != 2:
            raise ValidationError(f"{where}: link {pair!r} must be a pair of NF ids")
        pairs.append((str(pair[0]), str(pair[1])))
    return pairs


def _apply_topology_changed(net: Network, payload: dict[str, Any]) -> None:
    added = _link_pairs(payload.get("add_links"), "TopologyChanged.add_links")
    removed = _link_pairs(payload.get("remove_links"), "TopologyChanged.remove_links")
    for a, b in added + removed:
        net.nf(a)
        net.nf(b)
        if a == b:
            raise ValidationError(f"link {a!r}-{b!r}: NF cannot neighbor itself")
    for a, b in added:
        net.add_link(a, b)
    for a, b in removed:
        net.remove_link(a, b)


def _apply_vulnerability_detected(nf: NetworkFunction, payload: dict[str, Any]) -> None:
    ep_id = payload.get("ep")
    expose = int(payload.get("expose_data_items", 0))
    if ep_id is None:
        if expose:
            raise ValidationError("expose_data_items requires an ep")
        return
    ep = nf.entry_point(str(ep_id))
    if expose < 0:
        raise ValidationError("expose_data_items must be non-negative")
    if ep.data_items_exposed + expose > ep.data_items_total:
        raise ValidationError(
            f"entry point {ep.ep_id!r}: cannot expose {expose} more of "
            f"{ep.data_items_total} data items"
        )
    ep.data_items_exposed += expose


def _apply_attack_detected(nf: NetworkFunction, payload: dict[str, Any]) -> None:
    ep_id = payload.get("ep")
    has_count = "potential_attackers" in payload
    if ep_id is None and not has_count:
        return  # purely a lifecycle signal
    if ep_id is None or not has_count:
        raise ValidationError("AttackDetected needs both ep and potential_attackers, or neither")
    ctx = _radio_context(nf, str(ep_id))
    value = int(payload["potential_attackers"])
    if not 0 <= value <= ctx.ue_connected:
        raise ValidationError(
            f"potential_attackers {value} outside [0, {ctx.ue_connected}] on cell {ep_id!r}"
        )
    ctx.ue_potential_attackers = value


def _apply_control_applied(nf: NetworkFunction, payload: dict[str, Any]) -> None:
    req = nf.requirement(str(payload["requirement"]))
    name = str(payload["control"])
    slot = next((s for s in req.controls if s.name == name), None)
    if slot is None:
        raise UnknownIdError(
            f"unknown control {name!r} in requirement {req.requirement_id!r} on {nf.nf_id!r}"
        )
    if payload.get("correctness") is not None:
        value = float(payload["correctness"])
        if not 0.0 <= value <= 1.0:
            raise ValidationError(f"correctness {value} outside [0, 1]")
        slot.correctness = value
    slot.implemented = True
    if payload.get("clear_null_preference") and slot.context is not None:
        slot.context.null_scheme_preferred = False


def apply_event(net: Network, event: Event) -> None:
    """Mutate the network per one event; validates before committing."""
    kind = event.kind
    if kind is EventKind.SCAN_TICK:
        return
    if event.nf_id is None:
        raise ValidationError(f"{kind.value} event must name a target NF")
    nf = net.nf(event.nf_id)
    payload = event.payload
    if kind is EventKind.UE_ATTACHED:
        _apply_ue_attached(nf, payload)
    elif kind is EventKind.UE_DETACHED:
        _apply_ue_detached(nf, payload)
    elif kind is EventKind.CELL_ADDED:
        _apply_cell_added(nf, payload)
    elif kind is EventKind.CELL_REMOVED:
        _apply_cell_removed(nf, payload)
    elif kind is EventKind.CONFIG_CHANGED:
        _apply_config_changed(nf, payload)
    elif kind is EventKind.FEATURE_ADDED:
        _apply_feature_added(nf, payload)
    elif kind is EventKind.TOPOLOGY_CHANGED:
        _apply_topology_changed(net, payload)
    elif kind is EventKind.VULNERABILITY_DETECTED:
        _apply_vulnerability_detected(nf, payload)
    elif kind is EventKind.ATTACK_DETECTED:
        _apply_attack_detected(nf, payload)
    elif kind is EventKind.CONTROL_APPLIED:
        _apply_control_applied(nf, payload)
    else:
        raise UnknownEventKindError(f"no handler for event kind {kind!r}")


# --- run log -----------------------------------------------------------------


def format_record(record: dict[str, Any]) -> str:
    return json.dumps(record, separators=(",", ":"))


class RunLog:
    """Append-only JSON-lines stream of everything a run did.

    Records carry consecutive ``seq`` numbers. When a path is given every
    record is flushed to disk immediately, so a crashed service can be
    replayed from the file.
    """

    def __init__(self, path: str | Path | None = None) -> None:
        self.records: list[dict[str, Any]] = []
        self.path = Path(path) if path is not None else None
        self._fh: IO[str] | None = None
        if self.path is not None:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            self._fh = self.path.open("w", encoding="utf-8")

    def append(self, record_type: str, time: float, payload: dict[str, Any]) -> dict[str, Any]:
        record: dict[str, Any] = {"seq": len(self.records), "type": record_type, "time": time}
        record.update(payload)
        self.records.append(record)
        if self._fh is not None:
            self._fh.write(format_record(record) + "\n")
            self._fh.flush()
        return record

    def since(self, seq: int, kinds: set[str] | None = None) -> list[dict[str, Any]]:
        """Records after the given cursor, optionally filtered by type."""
        picked = self.records[seq + 1 :] if seq >= 0 else list(self.records)
        if kinds is not None:
            picked = [r for r in picked if r["type"] in kinds]
        return picked

    def lines(self) -> list[str]:
        return [format_record(r) for r in self.records]

    def text(self) -> str:
        return "".join(line + "\n" for line in self.lines())

    def close(self) -> None:
        if self._fh is not None:
            self._fh.close()
            self._fh = None


# --- the engine --------------------------------------------------------------


@dataclass(frozen=True)
class StepResult:
    kind: str  # "event" or "tick"
    time: float
    event_id: int | None = None


@dataclass(frozen=True)
class RunSummary:
    until: float
    events: int
    ticks: int

    def to_document(self) -> dict[str, Any]:
        return {"until": self.until, "events": self.events, "ticks": self.ticks}


def _copy_event(event: Event) -> Event:
    return Event(
        event_id=event.event_id,
        time=event.time,
        kind=event.kind,
        nf_id=event.nf_id,
        payload=dict(event.payload),
    )


class Simulator:
    """Single-writer engine: owns the network, the clock, the FSMs and the log."""

    def __init__(self, scenario: Scenario, *, log_path: str | Path | None = None) -> None:
        scenario.config.validate()
        self.scenario = scenario
        self.config = scenario.config
        self.network = scenario.build_network()
        self.clock = 0.0
        self.scan_count = 0
        self.registry = IntentRegistry()
        self.fsm: dict[str, SecurityStateRecord] = {
            nf_id: SecurityStateRecord(nf_id) for nf_id in sorted(self.network.nfs)
        }
        self._queue: list[Event] = [_copy_event(ev) for ev in scenario.events]
        self._cursor = 0
        self._next_event_id = len(self._queue) + 1
        self.log = RunLog(log_path)
        self.log.append("scenario", 0.0, {"name": scenario.name, "document": scenario.document})
        for intent in scenario.intents:
            self.registry.register(intent)
            self.log.append("intent", 0.0, {"action": "register", "intent": intent.to_document()})
        self.scorecard: NetworkScorecard = score_network(
            self.network, time=0.0, weights=self.config.weights
        )
        self.baselines: dict[str, float] = {
            nf_id: snap.surface for nf_id, snap in self.scorecard.nfs.items()
        }
        for nf_id in sorted(self.scorecard.nfs):
            self.log.append("snapshot", 0.0, self.scorecard.nfs[nf_id].to_record())
        for domain_id in sorted(self.scorecard.domains):
            self.log.append("snapshot", 0.0, self.scorecard.domains[domain_id].to_record())
        self.log.append("snapshot", 0.0, self.scorecard.network.to_record())

    # -- schedule inspection

    def _next_event(self) -> Event | None:
        if self._cursor < len(self._queue):
            return self._queue[self._cursor]
        return None

    def _next_tick_time(self) -> float:
        return (self.scan_count + 1) * self.config.scan.scan_period

    def next_time(self) -> float:
        """Timestamp of the next unit of work (there is always a next tick)."""
        event = self._next_event()
        tick = self._next_tick_time()
        if event is not None and event.time <= tick:
            return event.time
        return tick

    def pending_events(self) -> list[Event]:
        return self._queue[self._cursor :]

    # -- external operations

    def inject(self, document: dict[str, Any]) -> Event:
        """Schedule an extra event at or after the current clock.

        The injection itself is logged immediately (the fire is logged later
        as a normal event record), so replay re-queues events that had not
        fired yet when the log was cut.
        """
        event = parse_event(document, self._next_event_id)
        if event.time < self.clock:
            raise ValidationError(
                f"cannot schedule at {event.time}: clock is already at {self.clock}"
            )
        if event.nf_id is not None and event.nf_id not in self.network.nfs:
            raise UnknownIdError(f"unknown network function {event.nf_id!r}")
        bisect.insort(
            self._queue,
            event,
            lo=self._cursor,
            key=lambda ev: (ev.time, ev.event_id),
        )
        self._next_event_id += 1
        self.log.append("inject", self.clock, {"event": event.to_document()})
        return event

    def register_intent(self, intent: Intent, *, at_time: float | None = None) -> Intent:
        validate_intent_scope(intent, self.network)
        self.registry.register(intent)
        when = self.clock if at_time is None else at_time
        self.log.append("intent", when, {"action": "register", "intent": intent.to_document()})
        return intent

    def update_intent(
        self, intent_id: str, threshold: float, *, at_time: float | None = None
    ) -> Intent:
        updated = self.registry.update_threshold(intent_id, threshold)
        when = self.clock if at_time is None else at_time
        self.log.append("intent", when, {"action": "update", "intent": updated.to_document()})
        return updated

    def remove_intent(self, intent_id: str, *, at_time: float | None = None) -> Intent:
        removed = self.registry.remove(intent_id)
        when = self.clock if at_time is None else at_time
        self.log.append("intent", when, {"action": "remove", "id": intent_id})
        return removed

    # -- stepping

    def step(self) -> StepResult:
        """Process the next scheduled event or scan tick, whichever is earlier.

        Honors the scenario horizon: stepping past it raises
        ExhaustedScenarioError. ``run`` with an explicit target is not bound
        by the horizon.
        """
        if self.scenario.horizon is not None and self.next_time() > self.scenario.horizon:
            raise ExhaustedScenarioError(
                f"scenario horizon {self.scenario.horizon} reached (clock {self.clock})"
            )
        return self._advance_one()

    def run(self, until: float | None = None) -> RunSummary:
        """Process everything up to and including ``until``, then log a marker.

        Without an argument the scenario horizon is used. The clock lands
        exactly on the target so later injections cannot slip into the past.
        """
        limit = self.scenario.horizon if until is None else float(until)
        if limit is None:
            raise ValidationError("no run target: scenario sets no horizon and until not given")
        if limit < self.clock:
            raise ValidationError(f"cannot run to {limit}: clock is already at {self.clock}")
        events = ticks = 0
        while self.next_time() <= limit:
            result = self._advance_one()
            if result.kind == "event":
                events += 1
            else:
                ticks += 1
        self.clock = limit
        summary = RunSummary(until=limit, events=events, ticks=ticks)
        # The marker carries only the target time: counts depend on how much
        # earlier stepping consumed, which a replay reproduces differently.
        self.log.append("run", limit, {"until": limit})
        logger.info(
            "run to t=%s: %d events, %d ticks, %d log records",
            limit,
            events,
            ticks,
            len(self.log.records),
        )
        return summary

    def _advance_one(self) -> StepResult:
        event = self._next_event()
        tick_time = self._next_tick_time()
        if event is not None and event.time <= tick_time:
            self._cursor += 1
            self._process_event(event)
            return StepResult(kind="event", time=event.time, event_id=event.event_id)
        self._process_tick(tick_time)
        return StepResult(kind="tick", time=tick_time)

    def _process_event(self, event: Event) -> None:
        self.clock = event.time
        self.log.append("event", event.time, {"event": event.to_document()})
        apply_event(self.network, event)
        self.scorecard = score_network(self.network, time=event.time, weights=self.config.weights)
        assert event.nf_id is not None
        snapshot = self.scorecard.nfs[event.nf_id]
        self.log.append("snapshot", event.time, snapshot.to_record())
        record = self.fsm[event.nf_id]
        trigger = classify_event(
            event,
            snapshot,
            record.current,
            effectiveness_threshold=self.config.effectiveness_threshold,
            surface_baseline=self.baselines[event.nf_id],
        )
        self._apply_trigger(record, trigger, event.time, event.event_id)

    def _process_tick(self, tick_time: float) -> None:
        self.clock = tick_time
        self.scan_count += 1
        for nf_id in sorted(self.network.nfs):
            advance_patch_timers(self.network.nfs[nf_id], self.config.scan)
        self.scorecard = score_network(self.network, time=tick_time, weights=self.config.weights)
        for domain_id in sorted(self.scorecard.domains):
            self.log.append("snapshot", tick_time, self.scorecard.domains[domain_id].to_record())
        self.log.append("snapshot", tick_time, self.scorecard.network.to_record())
        tick_event = Event(event_id=0, time=tick_time, kind=EventKind.SCAN_TICK, nf_id=None)
        for nf_id in sorted(self.fsm):
            record = self.fsm[nf_id]
            trigger = classify_event(
                tick_event,
                self.scorecard.nfs[nf_id],
                record.current,
                effectiveness_threshold=self.config.effectiveness_threshold,
                surface_baseline=self.baselines[nf_id],
            )
            self._apply_trigger(record, trigger, tick_time, None)
        reports = report_cycle(
            self.registry,
            self.network,
            self.scorecard,
            time=tick_time,
            weights=self.config.weights,
        )
        for report in reports:
            self.log.append("report", tick_time, report.to_record())

    def _apply_trigger(
        self,
        record: SecurityStateRecord,
        trigger: Trigger,
        time: float,
        event_id: int | None,
    ) -> None:
        """Apply a trigger if it actually moves the lifecycle; log the edge."""
        if trigger is Trigger.NOOP or transition(record.current, trigger) is record.current:
            return
        entry = record.apply(time, trigger, event_id)
        self.log.append("transition", time, {"nf": record.nf_id, **entry.to_document()})
        if entry.target is SecurityState.SECURE:
            # entering Secure re-baselines what counts as an expanded surface
            self.baselines[record.nf_id] = self.scorecard.nfs[record.nf_id].surface

    # -- state identity

    def state_digest(self) -> str:
        """Hash of everything that determines future behavior; replays must match."""
        doc = {
            "clock": self.clock,
            "scan_count": self.scan_count,
            "network": self.network.to_document(),
            "states": {nf_id: rec.current.value for nf_id, rec in sorted(self.fsm.items())},
            "baselines": {nf_id: self.baselines[nf_id] for nf_id in sorted(self.baselines)},
            "intents": [intent.to_document() for intent in self.registry.ordered()],
            "pending": [ev.to_document() for ev in self.pending_events()],
            "next_event_id": self._next_event_id,
        }
        return hashlib.sha256(json.dumps(doc, sort_keys=True).encode("utf-8")).hexdigest()

    def close(self) -> None:
        self.log.close()


def replay_log(
    lines: str | Iterable[str], *, log_path: str | Path | None = None
) -> Simulator:
    """Rebuild a simulator from a persisted run log, replaying it exactly.

    The first record embeds the scenario; injected events and intent edits are
    re-applied at the same position in the record stream they originally held,
    so the replayed log is byte-identical and the final state digest matches.
    """
    if isinstance(lines, str):
        lines = lines.splitlines()
    records = [json.loads(line) for line in lines if line.strip()]
    if not records or records[0].get("type") != "scenario":
        raise ParseError("run log must start with a scenario record")
    scenario = load_scenario(records[0]["document"])
    sim = Simulator(scenario, log_path=log_path)

    # Everything that was done *to* the engine (as opposed to *by* it) in
    # record-stream order. Plain event records are fires of already-queued
    # events and replay by themselves.
    seed_intents = len(scenario.intents)
    operations: list[dict[str, Any]] = []
    seen_intents = 0
    for record in records[1:]:
        rtype = record.get("type")
        if rtype == "intent":
            seen_intents += 1
            if seen_intents > seed_intents:
                operations.append(record)
        elif rtype in ("inject", "run"):
            operations.append(record)

    def sync_to(target_seq: int) -> None:
        while len(sim.log.records) < target_seq:
            sim._advance_one()
        if len(sim.log.records) != target_seq:
            raise ParseError(
                f"replay diverged: expected {target_seq} records, produced {len(sim.log.records)}"
            )

    for op in operations:
        sync_to(op["seq"])
        rtype = op["type"]
        if rtype == "inject":
            sim.inject(op["event"])
        elif rtype == "run":
            sim.run(until=float(op["until"]))
        else:
            action = op["action"]
            if action == "register":
                sim.register_intent(parse_intent(op["intent"]), at_time=op["time"])
            elif action == "update":
                intent_doc = op["intent"]
                sim.update_intent(
                    str(intent_doc["id"]), float(intent_doc["threshold"]), at_time=op["time"]
                )
            elif action == "remove":
                sim.remove_intent(str(op["id"]), at_time=op["time"])
            else:
                raise ParseError(f"unknown intent action {action!r} in run log")
    sync_to(len(records))
    return sim
