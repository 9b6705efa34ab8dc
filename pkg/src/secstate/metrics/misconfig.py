"""Mis-configuration vulnerability metric: five measures plus local/domain rollups.

Locally the score averages the non-compliance ratio, the scaled impact and the
patch delay; at domain scope asset criticality and neighborhood impact join the
average. All measures live in [0, 1] with 0 the desired value.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import EmptyDomainError, MetricInputError
from ..model import CriticalityProfile, Network, NetworkFunction
from .exposure import order_of_magnitude

#: Raw impact value that the scaling map sends to 0.5 (the "medium" pivot).
MEDIUM_IMPACT_PIVOT = 0.25


@dataclass(frozen=True)
class ScanConfig:
    """Compliance scanning cadence and the patch deadline, in simulated days."""

    scan_period: float = 1.0
    time_to_patch_limit: float = 90.0

    def validate(self) -> None:
        if self.scan_period <= 0 or self.time_to_patch_limit <= 0:
            raise MetricInputError("scan period and patch limit must be positive")
        if self.scan_period > self.time_to_patch_limit:
            raise MetricInputError("scan period cannot exceed the patch limit")


@dataclass(frozen=True)
class MisconfigMeasures:
    """All misconfiguration measures of one NF at one instant."""

    noncompliant_ratio: float
    impact: float
    patch_delay: float
    criticality: float
    neighborhood: float
    local_score: float

    def to_document(self) -> dict[str, float]:
        return {
            "noncompliant_ratio": self.noncompliant_ratio,
            "impact": self.impact,
            "patch_delay": self.patch_delay,
            "criticality": self.criticality,
            "neighborhood": self.neighborhood,
            "local_score": self.local_score,
        }

    def five_measure_mean(self) -> float:
        return (
            self.noncompliant_ratio
            + self.impact
            + self.patch_delay
            + self.criticality
            + self.neighborhood
        ) / 5.0


def noncompliant_rule_ratio(nf: NetworkFunction) -> float:
    """Share of the NF's rules currently failing compliance."""
    if not nf.rules:
        raise MetricInputError(f"NF {nf.nf_id!r} declares no compliance rules")
    return sum(1 for r in nf.rules if not r.compliant) / len(nf.rules)


def raw_misconfig_impact(nf: NetworkFunction) -> float:
    """Unscaled impact: mean failing-attribute ratio times the NF's magnitude factor.

    0 when every rule is compliant. The magnitude factor comes from the NF's
    own context (e.g. the share of mis-configured IPsec tunnels).
    """
    failing = [r for r in nf.rules if not r.compliant]
    if not failing:
        return 0.0
    if nf.om_context is None:
        raise MetricInputError(
            f"NF {nf.nf_id!r} has non-compliant rules but no om_context to weigh them"
        )
    attr_ratio = sum(r.noncompliant_attributes / r.total_attributes for r in failing) / len(failing)
    return attr_ratio * order_of_magnitude(nf.om_context)


def scale_impact(raw: float) -> float:
    """Stretch raw impact so the medium pivot lands at 0.5.

    Products of two [0, 1] ratios crowd toward 0; this piecewise-linear map
    sends [0, 0.25] to [0, 0.5] and (0.25, 1] to (0.5, 1], fixing 0 and 1.
    """
    if not 0.0 <= raw <= 1.0:
        raise MetricInputError(f"raw impact {raw} outside [0, 1]")
    if raw <= MEDIUM_IMPACT_PIVOT:
        return raw / MEDIUM_IMPACT_PIVOT * 0.5
    return (raw - MEDIUM_IMPACT_PIVOT) / (1.0 - MEDIUM_IMPACT_PIVOT) * 0.5 + 0.5


def advance_patch_timers(nf: NetworkFunction, cfg: ScanConfig) -> NetworkFunction:
    """One scan period elapsed: advance failing rules' timers, reset compliant ones.

    Timers saturate at 1.0 exactly when the rule has been failing for the whole
    patch deadline; the consecutive-scan counter keeps the arithmetic exact.
    """
    cfg.validate()
    for rule in nf.rules:
        if rule.compliant:
            rule.noncompliant_scans = 0
            rule.patch_timer = 0.0
        else:
            rule.noncompliant_scans += 1
            rule.patch_timer = min(
                rule.noncompliant_scans * cfg.scan_period / cfg.time_to_patch_limit, 1.0
            )
    return nf


def patch_delay(nf: NetworkFunction) -> float:
    """Mean patch timer over failing rules; 0 when everything is compliant."""
    failing = [r for r in nf.rules if not r.compliant]
    if not failing:
        return 0.0
    return sum(r.patch_timer for r in failing) / len(failing)


def asset_criticality(profile: CriticalityProfile) -> float:
    """Share of raised criticality flags.

    With the customary three flags the score is quantized to two decimals so
    the four groups come out as 0, 0.33, 0.67 and 1.
    """
    if not profile.flags:
        raise MetricInputError("criticality profile has no flags")
    score = sum(1 for raised in profile.flags.values() if raised) / len(profile.flags)
    return round(score, 2) if len(profile.flags) == 3 else score


def neighborhood_impact(net: Network, nf_id: str, local_scores: dict[str, float]) -> float:
    """Mean local misconfiguration score of the NF's direct neighbors; 0 if isolated."""
    neighbors = net.neighbors(nf_id)
    if not neighbors:
        return 0.0
    total = 0.0
    for other in neighbors:
        if other.nf_id not in local_scores:
            raise MetricInputError(f"no local score supplied for neighbor {other.nf_id!r}")
        total += local_scores[other.nf_id]
    return total / len(neighbors)


def local_misconfig_score(nf: NetworkFunction) -> float:
    """Local rollup: mean of non-compliance ratio, scaled impact and patch delay.

    Criticality and neighborhood carry weight 0 at local scope; the surrounding
    environment is not part of a single node's own state.
    """
    return (
        noncompliant_rule_ratio(nf)
        + scale_impact(raw_misconfig_impact(nf))
        + patch_delay(nf)
    ) / 3.0


def local_misconfig_map(net: Network) -> dict[str, float]:
    """Local misconfiguration score per NF; rule-less NFs score 0 (vacuously compliant)."""
    scores: dict[str, float] = {}
    for nf_id in sorted(net.nfs):
        nf = net.nfs[nf_id]
        scores[nf_id] = local_misconfig_score(nf) if nf.rules else 0.0
    return scores


def nf_measures(
    net: Network,
    nf_id: str,
    local_scores: dict[str, float] | None = None,
) -> MisconfigMeasures:
    """All five measures plus the local score for one NF.

    ``local_scores`` may be passed to reuse a precomputed network-wide map when
    scoring many NFs; otherwise it is derived here.
    """
    nf = net.nf(nf_id)
    if local_scores is None:
        local_scores = local_misconfig_map(net)
    if nf.rules:
        ratio = noncompliant_rule_ratio(nf)
        impact = scale_impact(raw_misconfig_impact(nf))
        delay = patch_delay(nf)
    else:
        ratio = impact = delay = 0.0
    return MisconfigMeasures(
        noncompliant_ratio=ratio,
        impact=impact,
        patch_delay=delay,
        criticality=asset_criticality(nf.criticality),
        neighborhood=neighborhood_impact(net, nf_id, local_scores),
        local_score=local_scores[nf_id],
    )


def domain_misconfig_score(net: Network, domain_id: str) -> float:
    """Domain rollup: mean over member NFs of their five-measure means."""
    domain = net.domain(domain_id)
    if not domain.member_nf_ids:
        raise EmptyDomainError(f"domain {domain_id!r} has no member NFs")
    local_scores = local_misconfig_map(net)
    members = sorted(domain.member_nf_ids)
    return sum(
        nf_measures(net, nf_id, local_scores).five_measure_mean() for nf_id in members
    ) / len(members)
