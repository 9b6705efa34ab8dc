"""Attack surface exposure: entry points, their data items and magnitude factors.

Per-entry-point exposure is the exposed share of data items weighted by the
context magnitude; the NF total divides the sum by the entry-point capacity so
the metric stays in [0, 1] and grows with every configured entry point.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import MetricInputError
from ..model import EntryPoint, EntryPointCategory, NetworkFunction, OmContext, OmKind


@dataclass(frozen=True)
class AttackSurface:
    """Configured entry points of one NF plus its entry-point capacity."""

    entry_points: list[EntryPoint] = field(default_factory=list)
    max_entry_points: int = 1

    @property
    def configured(self) -> int:
        return len(self.entry_points)

    @classmethod
    def of(cls, nf: NetworkFunction) -> "AttackSurface":
        return cls(entry_points=list(nf.entry_points), max_entry_points=nf.ep_max)


@dataclass(frozen=True)
class SurfaceExposure:
    """Total exposure plus its additive per-category decomposition."""

    total: float
    by_category: dict[str, float]

    def to_document(self) -> dict[str, float]:
        return dict(self.by_category)


def order_of_magnitude(ctx: OmContext) -> float:
    """Context magnitude factor in [0, 1].

    Radio cells use the ratio of potential attackers to currently connected
    UEs (0 for an empty cell); ratio contexts use noncompliant over total units
    (0 when nothing is configured); fixed contexts return their value.
    """
    if ctx.kind is OmKind.RADIO:
        if ctx.ue_connected == 0:
            return 0.0
        return ctx.ue_potential_attackers / ctx.ue_connected
    if ctx.kind is OmKind.RATIO:
        if ctx.total_units == 0:
            return 0.0
        return ctx.noncompliant_units / ctx.total_units
    return ctx.value


def entry_point_exposure(ep: EntryPoint) -> float:
    """Exposed share of the entry point's data items, weighted by its magnitude."""
    if ep.data_items_total <= 0:
        raise MetricInputError(f"entry point {ep.ep_id!r} has no data items")
    exposed_share = ep.data_items_exposed / ep.data_items_total
    return exposed_share * order_of_magnitude(ep.om_context)


def surface_exposure(surface: AttackSurface) -> SurfaceExposure:
    """Total exposure of a surface: sum of entry-point exposures over capacity.

    Equivalently the mean exposure of configured entry points scaled by the
    configured/capacity ratio. Category sub-scores use the same denominator,
    so they sum exactly to the total.
    """
    if surface.max_entry_points <= 0:
        raise MetricInputError("entry-point capacity must be positive")
    by_category = {cat.value: 0.0 for cat in EntryPointCategory}
    for ep in surface.entry_points:
        by_category[ep.category.value] += entry_point_exposure(ep) / surface.max_entry_points
    return SurfaceExposure(total=sum(by_category.values()), by_category=by_category)


def nf_surface_exposure(nf: NetworkFunction) -> SurfaceExposure:
    return surface_exposure(AttackSurface.of(nf))
