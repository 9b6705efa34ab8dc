"""Per-NF security lifecycle: states, triggers, the transition table and history.

The transition function is total: pairs not listed in the table are self-loops,
so a change arriving in an already-expanded or exposed state updates metrics
but not the lifecycle phase.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import TYPE_CHECKING, Any

from .errors import UnknownEventKindError
from .events import CHANGE_KINDS, Event, EventKind

if TYPE_CHECKING:
    from .aggregation import MetricSnapshot


class SecurityState(str, Enum):
    SECURE = "Secure"
    ATTACK_SURFACE_EXPANDED = "AttackSurfaceExpanded"
    VULNERABILITY_EXPOSED = "VulnerabilityExposed"
    COMPROMISED = "Compromised"
    PROTECTED = "Protected"


class Trigger(str, Enum):
    CHANGE_DETECTED = "ChangeDetected"
    EXPOSURE_ASSESSED_CLEAN = "ExposureAssessedClean"
    VULNERABILITY_REACHABLE = "VulnerabilityReachable"
    EXPLOITED = "Exploited"
    MITIGATION_APPLIED = "MitigationApplied"
    CONTROLS_VERIFIED_EFFECTIVE = "ControlsVerifiedEffective"
    CONTROLS_VERIFIED_INEFFECTIVE = "ControlsVerifiedIneffective"
    NOOP = "NoOp"


#: Normative edge set; every (state, trigger) pair not listed is a self-loop.
TRANSITIONS: dict[tuple[SecurityState, Trigger], SecurityState] = {
    (SecurityState.SECURE, Trigger.CHANGE_DETECTED): SecurityState.ATTACK_SURFACE_EXPANDED,
    (SecurityState.ATTACK_SURFACE_EXPANDED, Trigger.EXPOSURE_ASSESSED_CLEAN): SecurityState.SECURE,
    (SecurityState.ATTACK_SURFACE_EXPANDED, Trigger.VULNERABILITY_REACHABLE): SecurityState.VULNERABILITY_EXPOSED,
    (SecurityState.VULNERABILITY_EXPOSED, Trigger.EXPLOITED): SecurityState.COMPROMISED,
    (SecurityState.VULNERABILITY_EXPOSED, Trigger.MITIGATION_APPLIED): SecurityState.PROTECTED,
    (SecurityState.COMPROMISED, Trigger.MITIGATION_APPLIED): SecurityState.PROTECTED,
    (SecurityState.PROTECTED, Trigger.CONTROLS_VERIFIED_EFFECTIVE): SecurityState.SECURE,
    (SecurityState.PROTECTED, Trigger.CONTROLS_VERIFIED_INEFFECTIVE): SecurityState.VULNERABILITY_EXPOSED,
}


def transition(state: SecurityState, trigger: Trigger) -> SecurityState:
    """Next lifecycle state; total over all (state, trigger) pairs."""
    return TRANSITIONS.get((state, trigger), state)


def transition_table_document() -> dict[str, Any]:
    """Machine-readable rendering of the FSM for UIs."""
    return {
        "initial": SecurityState.SECURE.value,
        "states": [s.value for s in SecurityState],
        "triggers": [t.value for t in Trigger],
        "edges": [
            {"from": s.value, "trigger": t.value, "to": target.value}
            for (s, t), target in TRANSITIONS.items()
        ],
        "default": "self-loop",
    }


@dataclass
class TransitionEntry:
    time: float
    source: SecurityState
    trigger: Trigger
    target: SecurityState
    event_id: int | None = None

    def to_document(self) -> dict[str, Any]:
        return {
            "time": self.time,
            "from": self.source.value,
            "trigger": self.trigger.value,
            "to": self.target.value,
            "event_id": self.event_id,
        }


@dataclass
class SecurityStateRecord:
    """Current lifecycle state of one NF plus its append-only transition history."""

    nf_id: str
    current: SecurityState = SecurityState.SECURE
    history: list[TransitionEntry] = field(default_factory=list)

    def apply(self, time: float, trigger: Trigger, event_id: int | None = None) -> TransitionEntry:
        entry = TransitionEntry(
            time=time,
            source=self.current,
            trigger=trigger,
            target=transition(self.current, trigger),
            event_id=event_id,
        )
        self.history.append(entry)
        self.current = entry.target
        return entry

    def to_document(self) -> dict[str, Any]:
        return {
            "nf": self.nf_id,
            "current": self.current.value,
            "history": [e.to_document() for e in self.history],
        }


def classify_event(
    event: Event,
    snapshot: "MetricSnapshot",
    state: SecurityState,
    *,
    effectiveness_threshold: float,
    surface_baseline: float,
) -> Trigger:
    """Map a simulator event to its lifecycle trigger.

    ``snapshot`` is the post-event metric snapshot of the event's NF. Scan
    ticks verify controls while Protected (against ``effectiveness_threshold``)
    and otherwise compare the surface against the baseline captured at the last
    Secure entry.
    """
    kind = event.kind
    if kind in CHANGE_KINDS:
        return Trigger.CHANGE_DETECTED
    if kind is EventKind.VULNERABILITY_DETECTED:
        if event.payload.get("exploitable"):
            return Trigger.EXPLOITED
        return Trigger.VULNERABILITY_REACHABLE
    if kind is EventKind.ATTACK_DETECTED:
        return Trigger.EXPLOITED
    if kind is EventKind.CONTROL_APPLIED:
        return Trigger.MITIGATION_APPLIED
    if kind is EventKind.SCAN_TICK:
        if state is SecurityState.PROTECTED:
            if snapshot.controls >= effectiveness_threshold:
                return Trigger.CONTROLS_VERIFIED_EFFECTIVE
            return Trigger.CONTROLS_VERIFIED_INEFFECTIVE
        if snapshot.surface <= surface_baseline:
            return Trigger.EXPOSURE_ASSESSED_CLEAN
        return Trigger.NOOP
    raise UnknownEventKindError(f"cannot classify event kind {kind!r}")
