"""Typed change notifications that drive the simulator and the lifecycle FSM."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Any

from .errors import UnknownEventKindError, ValidationError


class EventKind(str, Enum):
    UE_ATTACHED = "UEAttached"
    UE_DETACHED = "UEDetached"
    CELL_ADDED = "CellAdded"
    CELL_REMOVED = "CellRemoved"
    CONFIG_CHANGED = "ConfigChanged"
    FEATURE_ADDED = "FeatureAdded"
    TOPOLOGY_CHANGED = "TopologyChanged"
    VULNERABILITY_DETECTED = "VulnerabilityDetected"
    ATTACK_DETECTED = "AttackDetected"
    CONTROL_APPLIED = "ControlApplied"
    SCAN_TICK = "ScanTick"


#: Kinds that represent a change to the NF or its environment.
CHANGE_KINDS = frozenset(
    {
        EventKind.UE_ATTACHED,
        EventKind.UE_DETACHED,
        EventKind.CELL_ADDED,
        EventKind.CELL_REMOVED,
        EventKind.CONFIG_CHANGED,
        EventKind.FEATURE_ADDED,
        EventKind.TOPOLOGY_CHANGED,
    }
)


class VulnerabilityCategory(str, Enum):
    SOFTWARE = "software"
    PROTOCOL = "protocol"
    CONFIGURATION = "configuration"


@dataclass
class Event:
    """One scheduled change. ``payload`` carries the kind-specific fields.

    Payload fields by kind (see docs/scenario-format.md for the file schema):

    - UEAttached / UEDetached: ``ep``, ``count`` (default 1),
      ``potential_attacker`` (default false)
    - CellAdded: ``entry_point`` (full entry-point document)
    - CellRemoved: ``ep``
    - ConfigChanged: ``rule``, ``noncompliant_attributes``
    - FeatureAdded: ``ep``, ``add_data_items``, ``add_exposed`` (default 0)
    - TopologyChanged: ``add_links`` / ``remove_links`` (lists of pairs)
    - VulnerabilityDetected: ``category``, ``exploitable``, optional ``ep`` +
      ``expose_data_items``
    - AttackDetected: optional ``ep`` + ``potential_attackers`` (absolute count)
    - ControlApplied: ``requirement``, ``control``, optional ``correctness``,
      ``clear_null_preference``
    """

    event_id: int
    time: float
    kind: EventKind
    nf_id: str | None
    payload: dict[str, Any] = field(default_factory=dict)

    def to_document(self) -> dict[str, Any]:
        doc: dict[str, Any] = {"id": self.event_id, "time": self.time, "kind": self.kind.value}
        if self.nf_id is not None:
            doc["nf"] = self.nf_id
        doc.update(self.payload)
        return doc


_PAYLOAD_KEYS: dict[EventKind, set[str]] = {
    EventKind.UE_ATTACHED: {"ep", "count", "potential_attacker"},
    EventKind.UE_DETACHED: {"ep", "count", "potential_attacker"},
    EventKind.CELL_ADDED: {"entry_point"},
    EventKind.CELL_REMOVED: {"ep"},
    EventKind.CONFIG_CHANGED: {"rule", "noncompliant_attributes"},
    EventKind.FEATURE_ADDED: {"ep", "add_data_items", "add_exposed"},
    EventKind.TOPOLOGY_CHANGED: {"add_links", "remove_links"},
    EventKind.VULNERABILITY_DETECTED: {"category", "exploitable", "ep", "expose_data_items"},
    EventKind.ATTACK_DETECTED: {"ep", "potential_attackers"},
    EventKind.CONTROL_APPLIED: {"requirement", "control", "correctness", "clear_null_preference"},
}

_REQUIRED_KEYS: dict[EventKind, set[str]] = {
    EventKind.UE_ATTACHED: {"ep"},
    EventKind.UE_DETACHED: {"ep"},
    EventKind.CELL_ADDED: {"entry_point"},
    EventKind.CELL_REMOVED: {"ep"},
    EventKind.CONFIG_CHANGED: {"rule", "noncompliant_attributes"},
    EventKind.FEATURE_ADDED: {"ep", "add_data_items"},
    EventKind.TOPOLOGY_CHANGED: set(),
    EventKind.VULNERABILITY_DETECTED: {"category", "exploitable"},
    EventKind.ATTACK_DETECTED: set(),
    EventKind.CONTROL_APPLIED: {"requirement", "control"},
}


def parse_event(doc: dict[str, Any], event_id: int, *, allow_scan_tick: bool = False) -> Event:
    """Build an Event from its document form, checking payload shape.

    Scan ticks are generated by the simulator clock; scenario files and the
    injection API cannot schedule them unless ``allow_scan_tick`` is set.
    """
    try:
        kind = EventKind(doc.get("kind"))
    except ValueError:
        raise UnknownEventKindError(f"unknown event kind {doc.get('kind')!r}") from None
    if kind is EventKind.SCAN_TICK and not allow_scan_tick:
        raise ValidationError("ScanTick events are generated by the clock, not scheduled")
    time = float(doc.get("time", 0.0))
    if time < 0:
        raise ValidationError(f"event time {time} must be non-negative")
    nf_id = doc.get("nf")
    if kind is not EventKind.SCAN_TICK and nf_id is None:
        raise ValidationError(f"{kind.value} event must name a target NF")
    payload = {
        k: v for k, v in doc.items() if k not in {"id", "time", "kind", "nf"}
    }
    allowed = _PAYLOAD_KEYS.get(kind, set())
    unknown = set(payload) - allowed
    if unknown:
        raise ValidationError(
            f"{kind.value} event has unsupported fields: {sorted(unknown)}"
        )
    missing = _REQUIRED_KEYS.get(kind, set()) - set(payload)
    if missing:
        raise ValidationError(f"{kind.value} event is missing fields: {sorted(missing)}")
    if kind is EventKind.VULNERABILITY_DETECTED:
        payload["category"] = _category(payload["category"])
        payload["exploitable"] = bool(payload["exploitable"])
    return Event(event_id=event_id, time=time, kind=kind, nf_id=nf_id, payload=payload)


def _category(raw: Any) -> str:
    try:
        return VulnerabilityCategory(raw).value
    except ValueError:
        allowed = ", ".join(repr(c.value) for c in VulnerabilityCategory)
        raise ValidationError(f"vulnerability category {raw!r} not one of {allowed}") from None
