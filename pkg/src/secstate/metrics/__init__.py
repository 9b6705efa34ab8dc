"""Security metric engines: control effectiveness, misconfiguration risk, surface exposure."""

from .controls import (
    ControlEffectiveness,
    context_penalty,
    control_effectiveness,
    coverage_score,
    effective_correctness,
    nf_control_effectiveness,
)
from .exposure import (
    AttackSurface,
    SurfaceExposure,
    entry_point_exposure,
    nf_surface_exposure,
    order_of_magnitude,
    surface_exposure,
)
from .misconfig import (
    MisconfigMeasures,
    ScanConfig,
    advance_patch_timers,
    asset_criticality,
    domain_misconfig_score,
    local_misconfig_map,
    local_misconfig_score,
    neighborhood_impact,
    nf_measures,
    noncompliant_rule_ratio,
    patch_delay,
    raw_misconfig_impact,
    scale_impact,
)

__all__ = [
    "AttackSurface",
    "ControlEffectiveness",
    "MisconfigMeasures",
    "ScanConfig",
    "SurfaceExposure",
    "advance_patch_timers",
    "asset_criticality",
    "context_penalty",
    "control_effectiveness",
    "coverage_score",
    "domain_misconfig_score",
    "effective_correctness",
    "entry_point_exposure",
    "local_misconfig_map",
    "local_misconfig_score",
    "neighborhood_impact",
    "nf_control_effectiveness",
    "nf_measures",
    "nf_surface_exposure",
    "noncompliant_rule_ratio",
    "order_of_magnitude",
    "patch_delay",
    "raw_misconfig_impact",
    "scale_impact",
    "surface_exposure",
]
