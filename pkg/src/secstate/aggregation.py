"""Composite scoring and rollups from network function to network scope."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

from .errors import EmptyDomainError, MetricInputError, NoDomainsError
from .metrics.controls import nf_control_effectiveness
from .metrics.misconfig import (
    MisconfigMeasures,
    local_misconfig_map,
    nf_measures,
)
from .metrics.exposure import nf_surface_exposure
from .model import Network

_SIMPLEX_TOLERANCE = 1e-9
_RANGE_TOLERANCE = 1e-9


class ScopeKind(str, Enum):
    NETWORK = "network"
    DOMAIN = "domain"
    NF = "nf"


@dataclass(frozen=True)
class Scope:
    """Identifies what a score refers to.  Network scope has no target id."""

    kind: ScopeKind
    target: str | None = None

    def __post_init__(self) -> None:
        if self.kind is ScopeKind.NETWORK:
            if self.target is not None:
                raise MetricInputError("network scope takes no target id")
        elif not self.target:
            raise MetricInputError(f"{self.kind.value} scope requires a target id")

    @classmethod
    def network(cls) -> Scope:
        return cls(ScopeKind.NETWORK)

    @classmethod
    def domain(cls, domain_id: str) -> Scope:
        return cls(ScopeKind.DOMAIN, domain_id)

    @classmethod
    def nf(cls, nf_id: str) -> Scope:
        return cls(ScopeKind.NF, nf_id)


@dataclass(frozen=True)
class ScoreWeights:
    """Weights for the three posture components.  Must lie on the simplex."""

    controls: float = 1.0 / 3.0
    misconfig: float = 1.0 / 3.0
    surface: float = 1.0 / 3.0

    def __post_init__(self) -> None:
        for name, value in self.as_mapping().items():
            if not math.isfinite(value) or value < 0.0:
                raise MetricInputError(f"weight {name} must be finite and >= 0, got {value}")
        total = self.controls + self.misconfig + self.surface
        if abs(total - 1.0) > _SIMPLEX_TOLERANCE:
            raise MetricInputError(f"weights must sum to 1, got {total}")

    def as_mapping(self) -> dict[str, float]:
        return {
            "controls": self.controls,
            "misconfig": self.misconfig,
            "surface": self.surface,
        }

    @classmethod
    def from_sequence(cls, values: object) -> ScoreWeights:
        if not isinstance(values, (list, tuple)) or len(values) != 3:
            raise MetricInputError("weights must be a sequence of three numbers")
        controls, misconfig, surface = (float(v) for v in values)
        return cls(controls=controls, misconfig=misconfig, surface=surface)


def _check_unit(name: str, value: float) -> float:
    if not math.isfinite(value) or value < -_RANGE_TOLERANCE or value > 1.0 + _RANGE_TOLERANCE:
        raise MetricInputError(f"{name} must lie in [0, 1], got {value}")
    return value


def composite_score(
    controls: float,
    misconfig: float,
    surface: float,
    weights: ScoreWeights | None = None,
) -> float:
    """Weighted composite on [0, 1]; misconfig and surface count against it."""
    weights = weights if weights is not None else ScoreWeights()
    _check_unit("controls", controls)
    _check_unit("misconfig", misconfig)
    _check_unit("surface", surface)
    return (
        weights.controls * controls
        + weights.misconfig * (1.0 - misconfig)
        + weights.surface * (1.0 - surface)
    )


@dataclass(frozen=True)
class MetricSnapshot:
    """Point-in-time posture of one scope.

    ``measures`` and ``surface_by_category`` are populated for network
    function scope only; rollups carry the aggregated values alone.
    """

    scope: Scope
    time: float
    controls: float
    misconfig: float
    surface: float
    composite: float
    surface_by_category: dict[str, float] | None = None
    measures: MisconfigMeasures | None = None

    def to_record(self) -> dict[str, object]:
        doc: dict[str, object] = {"scope": self.scope.kind.value}
        if self.scope.target is not None:
            doc["id"] = self.scope.target
        doc["time"] = self.time
        doc["controls"] = self.controls
        doc["misconfig"] = self.misconfig
        doc["surface"] = self.surface
        doc["composite"] = self.composite
        if self.surface_by_category is not None:
            doc["surface_by_category"] = dict(self.surface_by_category)
        if self.measures is not None:
            doc["measures"] = self.measures.to_document()
        return doc


@dataclass(frozen=True)
class NetworkScorecard:
    """All snapshots produced by one scoring pass over a network."""

    network: MetricSnapshot
    domains: dict[str, MetricSnapshot] = field(default_factory=dict)
    nfs: dict[str, MetricSnapshot] = field(default_factory=dict)

    def for_scope(self, scope: Scope) -> MetricSnapshot:
        if scope.kind is ScopeKind.NETWORK:
            return self.network
        table = self.domains if scope.kind is ScopeKind.DOMAIN else self.nfs
        assert scope.target is not None
        try:
            return table[scope.target]
        except KeyError:
            raise MetricInputError(f"no snapshot for {scope.kind.value} {scope.target!r}") from None


def nf_snapshot(
    network: Network,
    nf_id: str,
    *,
    time: float,
    weights: ScoreWeights | None = None,
    local_scores: dict[str, float] | None = None,
) -> MetricSnapshot:
    """Score a single network function.

    ``local_scores`` lets callers scoring many functions share one pass
    over the topology; it is recomputed here when omitted.
    """
    nf = network.nf(nf_id)
    if local_scores is None:
        local_scores = local_misconfig_map(network)
    controls = nf_control_effectiveness(nf)
    measures = nf_measures(network, nf_id, local_scores)
    misconfig = measures.five_measure_mean()
    exposure = nf_surface_exposure(nf)
    return MetricSnapshot(
        scope=Scope.nf(nf_id),
        time=time,
        controls=controls,
        misconfig=misconfig,
        surface=exposure.total,
        composite=composite_score(controls, misconfig, exposure.total, weights),
        surface_by_category=dict(exposure.by_category),
        measures=measures,
    )


def _mean(values: list[float]) -> float:
    return sum(values) / len(values)


def domain_snapshot(
    network: Network,
    domain_id: str,
    *,
    time: float,
    weights: ScoreWeights | None = None,
    local_scores: dict[str, float] | None = None,
) -> MetricSnapshot:
    """Score one domain as the unweighted mean over its member functions."""
    domain = network.domain(domain_id)
    members = sorted(domain.member_nf_ids)
    if not members:
        raise EmptyDomainError(f"domain {domain_id!r} has no member functions")
    if local_scores is None:
        local_scores = local_misconfig_map(network)
    snapshots = [
        nf_snapshot(network, nf_id, time=time, weights=weights, local_scores=local_scores)
        for nf_id in members
    ]
    return _rollup(Scope.domain(domain_id), time, weights, snapshots)


def network_snapshot(
    network: Network,
    *,
    time: float,
    weights: ScoreWeights | None = None,
    local_scores: dict[str, float] | None = None,
) -> MetricSnapshot:
    """Score the whole network as the mean over its non-empty domains."""
    if local_scores is None:
        local_scores = local_misconfig_map(network)
    snapshots = [
        domain_snapshot(network, domain_id, time=time, weights=weights, local_scores=local_scores)
        for domain_id in sorted(network.domains)
        if network.domain(domain_id).member_nf_ids
    ]
    if not snapshots:
        raise NoDomainsError("network has no domain with member functions")
    return _rollup(Scope.network(), time, weights, snapshots)


def _rollup(
    scope: Scope,
    time: float,
    weights: ScoreWeights | None,
    parts: list[MetricSnapshot],
) -> MetricSnapshot:
    controls = _mean([snap.controls for snap in parts])
    misconfig = _mean([snap.misconfig for snap in parts])
    surface = _mean([snap.surface for snap in parts])
    return MetricSnapshot(
        scope=scope,
        time=time,
        controls=controls,
        misconfig=misconfig,
        surface=surface,
        composite=composite_score(controls, misconfig, surface, weights),
    )


def score_network(
    network: Network,
    *,
    time: float,
    weights: ScoreWeights | None = None,
) -> NetworkScorecard:
    """One scoring pass: every function, every domain, and the network."""
    local_scores = local_misconfig_map(network)
    nf_snaps: dict[str, MetricSnapshot] = {}
    domain_snaps: dict[str, MetricSnapshot] = {}
    domain_parts: dict[str, list[MetricSnapshot]] = {}
    for nf_id in sorted(network.nfs):
        snap = nf_snapshot(network, nf_id, time=time, weights=weights, local_scores=local_scores)
        nf_snaps[nf_id] = snap
        domain_parts.setdefault(network.nf(nf_id).domain_id, []).append(snap)
    for domain_id in sorted(network.domains):
        parts = domain_parts.get(domain_id)
        if not parts:
            continue
        domain_snaps[domain_id] = _rollup(Scope.domain(domain_id), time, weights, parts)
    if not domain_snaps:
        raise NoDomainsError("network has no domain with member functions")
    network_snap = _rollup(Scope.network(), time, weights, list(domain_snaps.values()))
    return NetworkScorecard(network=network_snap, domains=domain_snaps, nfs=nf_snaps)
