"""Shared builders for the test suite.

The random generators below only ever produce *valid* topologies: every NF
with a non-compliant rule also carries an om_context, links are symmetric,
and entry points stay within ep_max.  Tests that want invalid input build
it by hand.
"""
from __future__ import annotations

import random

import pytest

from secstate.model import (
    ComplianceRule,
    ControlRequirement,
    ControlSlot,
    CriticalityProfile,
    Domain,
    EntryPoint,
    EntryPointCategory,
    Network,
    NetworkFunction,
    NfKind,
    OmContext,
    OmKind,
    PenaltyContext,
)
from secstate.scenarios import packaged_scenario


def radio_ctx(pa: int, connected: int, capacity: int | None = None) -> OmContext:
    return OmContext(
        kind=OmKind.RADIO,
        ue_potential_attackers=pa,
        ue_connected=connected,
        ue_capacity=capacity,
    )


def ratio_ctx(noncompliant: int, total: int) -> OmContext:
    return OmContext(kind=OmKind.RATIO, noncompliant_units=noncompliant, total_units=total)


def fixed_ctx(value: float) -> OmContext:
    return OmContext(kind=OmKind.FIXED, value=value)


def make_nf(
    nf_id: str = "nf-1",
    domain_id: str = "d1",
    *,
    kind: NfKind = NfKind.OTHER,
    ep_max: int = 4,
    flags: dict[str, bool] | None = None,
    rules: list[ComplianceRule] | None = None,
    control_sets: list[ControlRequirement] | None = None,
    entry_points: list[EntryPoint] | None = None,
    om_context: OmContext | None = None,
) -> NetworkFunction:
    return NetworkFunction(
        nf_id=nf_id,
        kind=kind,
        domain_id=domain_id,
        ep_max=ep_max,
        criticality=CriticalityProfile(flags=dict(flags or {"critical": True})),
        rules=list(rules or []),
        control_sets=list(control_sets or []),
        entry_points=list(entry_points or []),
        om_context=om_context,
    )


def make_network(*nfs: NetworkFunction, links: list[tuple[str, str]] | None = None) -> Network:
    domains: dict[str, Domain] = {}
    for nf in nfs:
        dom = domains.setdefault(nf.domain_id, Domain(domain_id=nf.domain_id, name=nf.domain_id))
        dom.member_nf_ids.add(nf.nf_id)
    net = Network(domains=domains, nfs={nf.nf_id: nf for nf in nfs})
    for a, b in links or []:
        net.add_link(a, b)
    net.validate()
    return net


def golden_requirement(
    connected: int = 100, capacity: int = 300, *, null_preferred: bool = True
) -> ControlRequirement:
    """The two-control requirement from the worked ciphering example."""
    return ControlRequirement(
        requirement_id="ciphering",
        controls=[
            ControlSlot(name="selection", implemented=False, correctness=1.0),
            ControlSlot(
                name="activation",
                implemented=True,
                correctness=1.0,
                context=PenaltyContext(
                    ue_connected=connected,
                    ue_capacity=capacity,
                    null_scheme_preferred=null_preferred,
                ),
            ),
        ],
    )


def random_requirement(rng: random.Random, idx: int = 0) -> ControlRequirement:
    slots = []
    for i in range(rng.randint(1, 5)):
        ctx = None
        if rng.random() < 0.3:
            cap = rng.randint(1, 500)
            ctx = PenaltyContext(
                ue_connected=rng.randint(0, cap),
                ue_capacity=cap,
                null_scheme_preferred=rng.random() < 0.5,
            )
        slots.append(
            ControlSlot(
                name=f"c{i}",
                implemented=rng.random() < 0.7,
                correctness=rng.random(),
                context=ctx,
            )
        )
    return ControlRequirement(requirement_id=f"req-{idx}", controls=slots)


def random_rule(rng: random.Random, idx: int = 0) -> ComplianceRule:
    total = rng.randint(1, 8)
    return ComplianceRule(
        rule_id=f"rule-{idx}",
        total_attributes=total,
        noncompliant_attributes=rng.randint(0, total),
        noncompliant_scans=rng.randint(0, 120),
    )


def random_entry_point(rng: random.Random, idx: int = 0) -> EntryPoint:
    total = rng.randint(1, 30)
    pick = rng.random()
    if pick < 0.4:
        cap = rng.randint(1, 400)
        conn = rng.randint(0, cap)
        om = radio_ctx(rng.randint(0, conn) if conn else 0, conn, cap)
        category = EntryPointCategory.RADIO
    elif pick < 0.7:
        units = rng.randint(0, 20)
        om = ratio_ctx(rng.randint(0, units) if units else 0, units)
        category = rng.choice(list(EntryPointCategory))
    else:
        om = fixed_ctx(rng.random())
        category = rng.choice(list(EntryPointCategory))
    return EntryPoint(
        ep_id=f"ep-{idx}",
        category=category,
        channels=["ch"],
        data_items_total=total,
        data_items_exposed=rng.randint(0, total),
        om_context=om,
    )


def random_nf(rng: random.Random, nf_id: str, domain_id: str) -> NetworkFunction:
    n_eps = rng.randint(0, 4)
    flags = {f"f{i}": rng.random() < 0.5 for i in range(rng.randint(1, 4))}
    units = rng.randint(1, 10)
    return NetworkFunction(
        nf_id=nf_id,
        kind=rng.choice(list(NfKind)),
        domain_id=domain_id,
        ep_max=max(n_eps, rng.randint(1, 6)),
        criticality=CriticalityProfile(flags=flags),
        rules=[random_rule(rng, i) for i in range(rng.randint(0, 5))],
        control_sets=[random_requirement(rng, i) for i in range(rng.randint(0, 3))],
        entry_points=[random_entry_point(rng, i) for i in range(n_eps)],
        om_context=ratio_ctx(rng.randint(0, units), units),
    )


def random_network(rng: random.Random, max_domains: int = 3, max_nfs: int = 10) -> Network:
    n_domains = rng.randint(1, max_domains)
    n_nfs = rng.randint(n_domains, max_nfs)
    nfs = []
    for i in range(n_nfs):
        domain_id = f"d{i % n_domains}" if i < n_domains else f"d{rng.randrange(n_domains)}"
        nfs.append(random_nf(rng, f"nf{i}", domain_id))
    net = make_network(*nfs)
    ids = sorted(net.nfs)
    for _ in range(rng.randint(0, n_nfs * 2)):
        a, b = rng.sample(ids, 2) if len(ids) >= 2 else (None, None)
        if a is not None:
            net.add_link(a, b)
    net.validate()
    return net


@pytest.fixture()
def demo_document() -> dict:
    return packaged_scenario()
