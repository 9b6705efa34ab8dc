"""Intent registration, decomposition, and violation reporting.

An intent pins a floor under the composite score of one scope.  Network
intents are decomposed into per-domain children at evaluation time so
the loop keeps working when domain membership changes mid-run.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .aggregation import MetricSnapshot, NetworkScorecard, Scope, ScopeKind, ScoreWeights
from .errors import UnknownIdError, ValidationError
from .model import Network

# Fixed order used both for reporting and for breaking ties when two
# components explain the same share of the gap.
CONTRIBUTION_ORDER = ("controls", "misconfig", "surface")


@dataclass(frozen=True)
class Intent:
    intent_id: str
    scope: Scope
    threshold: float
    parent_id: str | None = None

    def __post_init__(self) -> None:
        if not self.intent_id:
            raise ValidationError("intent id must be non-empty")
        if not math.isfinite(self.threshold) or not 0.0 <= self.threshold <= 1.0:
            raise ValidationError(f"intent threshold must lie in [0, 1], got {self.threshold}")

    def to_document(self) -> dict[str, object]:
        doc: dict[str, object] = {"id": self.intent_id, "scope": self.scope.kind.value}
        if self.scope.target is not None:
            doc["scope_id"] = self.scope.target
        doc["threshold"] = self.threshold
        if self.parent_id is not None:
            doc["parent"] = self.parent_id
        return doc


def parse_intent(doc: dict[str, object]) -> Intent:
    if not isinstance(doc, dict):
        raise ValidationError("intent must be an object")
    unknown = set(doc) - {"id", "scope", "scope_id", "threshold", "parent"}
    if unknown:
        raise ValidationError(f"unknown intent fields: {sorted(unknown)}")
    intent_id = doc.get("id")
    if not isinstance(intent_id, str) or not intent_id:
        raise ValidationError("intent id must be a non-empty string")
    kind_raw = doc.get("scope", ScopeKind.NETWORK.value)
    try:
        kind = ScopeKind(kind_raw)
    except ValueError:
        raise ValidationError(f"unknown intent scope {kind_raw!r}") from None
    scope_id = doc.get("scope_id")
    if scope_id is not None and not isinstance(scope_id, str):
        raise ValidationError("intent scope_id must be a string")
    threshold = doc.get("threshold")
    if not isinstance(threshold, (int, float)) or isinstance(threshold, bool):
        raise ValidationError("intent threshold must be a number")
    parent = doc.get("parent")
    if parent is not None and not isinstance(parent, str):
        raise ValidationError("intent parent must be a string")
    try:
        scope = Scope(kind, scope_id)
    except Exception as exc:
        raise ValidationError(str(exc)) from None
    return Intent(intent_id=intent_id, scope=scope, threshold=float(threshold), parent_id=parent)


def decompose_intent(intent: Intent, network: Network) -> list[Intent]:
    """Split a network intent into one child per non-empty domain.

    Children inherit the threshold and carry the id ``<parent>:<domain>``.
    Domain and function intents have nothing to decompose.
    """
    if intent.scope.kind is not ScopeKind.NETWORK:
        return []
    children = []
    for domain_id in sorted(network.domains):
        if not network.domain(domain_id).member_nf_ids:
            continue
        children.append(
            Intent(
                intent_id=f"{intent.intent_id}:{domain_id}",
                scope=Scope.domain(domain_id),
                threshold=intent.threshold,
                parent_id=intent.intent_id,
            )
        )
    return children


def gap_contributions(
    snapshot: MetricSnapshot, weights: ScoreWeights | None = None
) -> dict[str, float]:
    """How much each component keeps the composite below a perfect 1.0.

    The parts partition the gap: composite plus the three contributions
    sums to one.
    """
    weights = weights if weights is not None else ScoreWeights()
    return {
        "controls": weights.controls * (1.0 - snapshot.controls),
        "misconfig": weights.misconfig * snapshot.misconfig,
        "surface": weights.surface * snapshot.surface,
    }


def top_contributor(contributions: dict[str, float]) -> str:
    best = CONTRIBUTION_ORDER[0]
    for name in CONTRIBUTION_ORDER[1:]:
        if contributions[name] > contributions[best]:
            best = name
    return best


@dataclass(frozen=True)
class ViolationReport:
    """One intent found below its floor at one evaluation instant."""

    intent_id: str
    scope: Scope
    time: float
    threshold: float
    observed: float
    contributions: dict[str, float]

    @property
    def shortfall(self) -> float:
        return self.threshold - self.observed

    @property
    def top_contributor(self) -> str:
        return top_contributor(self.contributions)

    def to_record(self) -> dict[str, object]:
        doc: dict[str, object] = {"intent": self.intent_id, "scope": self.scope.kind.value}
        if self.scope.target is not None:
            doc["id"] = self.scope.target
        doc["time"] = self.time
        doc["threshold"] = self.threshold
        doc["observed"] = self.observed
        doc["shortfall"] = self.shortfall
        doc["contributions"] = {name: self.contributions[name] for name in CONTRIBUTION_ORDER}
        doc["top_contributor"] = self.top_contributor
        return doc


def evaluate_intent(
    intent: Intent,
    scorecard: NetworkScorecard,
    *,
    time: float,
    weights: ScoreWeights | None = None,
) -> ViolationReport | None:
    """Return a report when the scoped composite sits below the floor."""
    snapshot = scorecard.for_scope(intent.scope)
    if snapshot.composite >= intent.threshold:
        return None
    return ViolationReport(
        intent_id=intent.intent_id,
        scope=intent.scope,
        time=time,
        threshold=intent.threshold,
        observed=snapshot.composite,
        contributions=gap_contributions(snapshot, weights),
    )


@dataclass
class IntentRegistry:
    """Registered intents, keyed by id.  Children are derived, not stored."""

    intents: dict[str, Intent] = field(default_factory=dict)

    def register(self, intent: Intent) -> None:
        if intent.intent_id in self.intents:
            raise ValidationError(f"intent {intent.intent_id!r} already registered")
        self.intents[intent.intent_id] = intent

    def update_threshold(self, intent_id: str, threshold: float) -> Intent:
        current = self.get(intent_id)
        updated = Intent(
            intent_id=current.intent_id,
            scope=current.scope,
            threshold=threshold,
            parent_id=current.parent_id,
        )
        self.intents[intent_id] = updated
        return updated

    def remove(self, intent_id: str) -> Intent:
        self.get(intent_id)
        return self.intents.pop(intent_id)

    def get(self, intent_id: str) -> Intent:
        try:
            return self.intents[intent_id]
        except KeyError:
            raise UnknownIdError(f"unknown intent {intent_id!r}") from None

    def ordered(self) -> list[Intent]:
        return [self.intents[intent_id] for intent_id in sorted(self.intents)]


def report_cycle(
    registry: IntentRegistry,
    network: Network,
    scorecard: NetworkScorecard,
    *,
    time: float,
    weights: ScoreWeights | None = None,
) -> list[ViolationReport]:
    """Evaluate every registered intent and its derived children once."""
    reports: list[ViolationReport] = []
    for intent in registry.ordered():
        found = evaluate_intent(intent, scorecard, time=time, weights=weights)
        if found is not None:
            reports.append(found)
        for child in decompose_intent(intent, network):
            found = evaluate_intent(child, scorecard, time=time, weights=weights)
            if found is not None:
                reports.append(found)
    return reports
