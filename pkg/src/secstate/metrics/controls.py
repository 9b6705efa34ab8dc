"""Security control effectiveness: coverage times context-penalized correctness.

The score of a requirement is the mean of per-control coverage x correctness
products, so implementing half of two controls at correctness 2/3 yields 1/3.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import MetricInputError
from ..model import ControlRequirement, ControlSlot, NetworkFunction, PenaltyContext


@dataclass(frozen=True)
class ControlEffectiveness:
    """Effectiveness of one requirement plus the sub-values that produced it."""

    coverage: float
    correctness_per_control: list[float]
    penalty: float
    score: float


def coverage_score(req: ControlRequirement) -> float:
    """Share of the requirement's controls that are implemented."""
    if not req.controls:
        raise MetricInputError(f"requirement {req.requirement_id!r} has no controls")
    return sum(1 for slot in req.controls if slot.implemented) / len(req.controls)


def context_penalty(ctx: PenaltyContext | None) -> float:
    """Penalty factor for a control's context; 0 without a null-scheme preference.

    With the null ciphering scheme first in the preference list, every connected
    UE is affected by the downgraded cell configuration, so the penalty is the
    utilized share of the cell's UE capacity.
    """
    if ctx is None:
        return 0.0
    if ctx.ue_capacity <= 0:
        raise MetricInputError("penalty context has non-positive UE capacity")
    if not ctx.null_scheme_preferred:
        return 0.0
    return ctx.ue_connected / ctx.ue_capacity


def effective_correctness(slot: ControlSlot) -> float:
    """Configured correctness minus its context penalty, floored at 0.

    The deduction is proportional to the base correctness (a fully correct
    control in a 1/3-utilized null-preferring cell drops to 2/3).
    """
    if not 0.0 <= slot.correctness <= 1.0:
        raise MetricInputError(f"control {slot.name!r} correctness outside [0, 1]")
    deduction = slot.correctness * context_penalty(slot.context)
    return max(0.0, slot.correctness - deduction)


def control_effectiveness(req: ControlRequirement) -> ControlEffectiveness:
    """Score one requirement: mean of per-control coverage x correctness.

    The reported ``penalty`` is the largest penalty factor applied to any of
    the requirement's controls.
    """
    if not req.controls:
        raise MetricInputError(f"requirement {req.requirement_id!r} has no controls")
    correctness = [effective_correctness(slot) for slot in req.controls]
    products = [
        (1.0 if slot.implemented else 0.0) * cr
        for slot, cr in zip(req.controls, correctness)
    ]
    return ControlEffectiveness(
        coverage=coverage_score(req),
        correctness_per_control=correctness,
        penalty=max((context_penalty(slot.context) for slot in req.controls), default=0.0),
        score=sum(products) / len(products),
    )


def nf_control_effectiveness(nf: NetworkFunction) -> float:
    """Mean effectiveness over an NF's requirements; 1.0 when none are declared."""
    if not nf.control_sets:
        return 1.0
    scores = [control_effectiveness(req).score for req in nf.control_sets]
    return sum(scores) / len(scores)
