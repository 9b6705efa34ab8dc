from __future__ import annotations

import random

import pytest

from conftest import make_network, make_nf, random_network, ratio_ctx
from secstate.aggregation import (
    MetricSnapshot,
    Scope,
    ScoreWeights,
    score_network,
)
from secstate.errors import UnknownIdError, ValidationError
from secstate.intent import (
    CONTRIBUTION_ORDER,
    Intent,
    IntentRegistry,
    ViolationReport,
    decompose_intent,
    evaluate_intent,
    gap_contributions,
    parse_intent,
    report_cycle,
    top_contributor,
)
from secstate.model import ComplianceRule


def test_parse_intent_happy_path():
    it = parse_intent({"id": "i1", "scope": "network", "threshold": 0.7})
    assert it.intent_id == "i1" and it.scope == Scope.network() and it.threshold == 0.7
    scoped = parse_intent({"id": "i2", "scope": "domain", "scope_id": "ran", "threshold": 0.5})
    assert scoped.scope == Scope.domain("ran")
    assert parse_intent(scoped.to_document()) == scoped  # round-trip


def test_parse_intent_rejections():
    with pytest.raises(ValidationError):
        parse_intent({"id": "", "scope": "network", "threshold": 0.5})
    with pytest.raises(ValidationError):
        parse_intent({"id": "x", "scope": "network", "threshold": 1.5})
    with pytest.raises(ValidationError):
        parse_intent({"id": "x", "scope": "galaxy", "threshold": 0.5})
    with pytest.raises(ValidationError):
        parse_intent({"id": "x", "scope": "domain", "threshold": 0.5})  # missing scope_id
    with pytest.raises(ValidationError):
        parse_intent({"id": "x", "scope": "network", "threshold": 0.5, "bogus": 1})


def test_decompose_network_intent_per_domain():
    net = make_network(make_nf("a", "ran"), make_nf("b", "core"), make_nf("c", "ran"))
    parent = parse_intent({"id": "net", "scope": "network", "threshold": 0.7})
    children = decompose_intent(parent, net)
    assert [c.intent_id for c in children] == ["net:core", "net:ran"]  # sorted domains
    assert all(c.parent_id == "net" and c.threshold == 0.7 for c in children)
    assert children[0].scope == Scope.domain("core")


def test_decompose_skips_empty_domains_and_non_network_scopes():
    from secstate.model import Domain

    net = make_network(make_nf("a", "ran"))
    net.domains["void"] = Domain(domain_id="void", name="void")
    parent = parse_intent({"id": "net", "scope": "network", "threshold": 0.7})
    children = decompose_intent(parent, net)
    assert [c.scope.target for c in children] == ["ran"]
    assert children[0].intent_id == "net:ran"
    assert children[0].parent_id == "net"
    child = parse_intent({"id": "d", "scope": "domain", "scope_id": "ran", "threshold": 0.7})
    assert decompose_intent(child, net) == []


def snap_with(controls: float, misconfig: float, surface: float) -> MetricSnapshot:
    from secstate.aggregation import composite_score

    return MetricSnapshot(
        scope=Scope.domain("d"),
        time=0.0,
        controls=controls,
        misconfig=misconfig,
        surface=surface,
        composite=composite_score(controls, misconfig, surface),
    )


def test_gap_contributions_partition_the_shortfall_from_perfect():
    rng = random.Random(111)
    for _ in range(500):
        s = snap_with(rng.random(), rng.random(), rng.random())
        parts = gap_contributions(s)
        assert list(parts) == list(CONTRIBUTION_ORDER)
        assert sum(parts.values()) == pytest.approx(1.0 - s.composite, abs=1e-12)
        assert all(v >= -1e-12 for v in parts.values())


def test_gap_contribution_values():
    parts = gap_contributions(snap_with(1 / 3, 0.3, 0.2))
    assert parts["controls"] == pytest.approx((1 - 1 / 3) / 3)
    assert parts["misconfig"] == pytest.approx(0.1)
    assert parts["surface"] == pytest.approx(0.2 / 3)
    assert top_contributor(parts) == "controls"


def test_top_contributor_tie_breaks_in_fixed_order():
    assert top_contributor({"controls": 0.2, "misconfig": 0.2, "surface": 0.1}) == "controls"
    assert top_contributor({"controls": 0.1, "misconfig": 0.2, "surface": 0.2}) == "misconfig"
    assert top_contributor({"controls": 0.0, "misconfig": 0.0, "surface": 0.0}) == "controls"


def bad_ran_network():
    return make_network(
        make_nf(
            "cu", "ran",
            rules=[ComplianceRule("r", 2, 2)],
            om_context=ratio_ctx(2, 2),
        ),
        make_nf("amf", "core"),
    )


def test_evaluate_intent_strictly_below_threshold():
    net = bad_ran_network()
    card = score_network(net, time=1.0)
    ran = card.domains["ran"].composite
    hit = parse_intent({"id": "i", "scope": "domain", "scope_id": "ran", "threshold": 0.99})
    report = evaluate_intent(hit, card, time=1.0)
    assert report is not None
    assert report.observed == ran
    assert report.shortfall == pytest.approx(0.99 - ran)
    assert report.top_contributor in CONTRIBUTION_ORDER
    exact = parse_intent({"id": "i", "scope": "domain", "scope_id": "ran", "threshold": ran})
    assert evaluate_intent(exact, card, time=1.0) is None  # meeting exactly is compliant
    easy = parse_intent({"id": "i", "scope": "domain", "scope_id": "ran", "threshold": 0.0})
    assert evaluate_intent(easy, card, time=1.0) is None


def test_report_record_shape():
    net = bad_ran_network()
    card = score_network(net, time=2.0)
    intent = parse_intent({"id": "i", "scope": "domain", "scope_id": "ran", "threshold": 0.95})
    rec = evaluate_intent(intent, card, time=2.0).to_record()
    assert rec["intent"] == "i" and rec["scope"] == "domain" and rec["id"] == "ran"
    assert rec["time"] == 2.0 and rec["threshold"] == 0.95
    assert rec["shortfall"] == pytest.approx(0.95 - rec["observed"])
    assert list(rec["contributions"]) == list(CONTRIBUTION_ORDER)
    assert rec["top_contributor"] == top_contributor(rec["contributions"])


def test_registry_crud():
    reg = IntentRegistry()
    a = parse_intent({"id": "a", "scope": "network", "threshold": 0.7})
    b = parse_intent({"id": "b", "scope": "network", "threshold": 0.8})
    reg.register(b)
    reg.register(a)
    assert [i.intent_id for i in reg.ordered()] == ["a", "b"]
    with pytest.raises(ValidationError):
        reg.register(a)
    updated = reg.update_threshold("a", 0.75)
    assert updated.threshold == 0.75 and reg.get("a").threshold == 0.75
    with pytest.raises(ValidationError):
        reg.update_threshold("a", 2.0)
    reg.remove("b")
    with pytest.raises(UnknownIdError):
        reg.get("b")
    with pytest.raises(UnknownIdError):
        reg.update_threshold("b", 0.5)
    with pytest.raises(UnknownIdError):
        reg.remove("b")


def test_report_cycle_evaluates_parents_then_children():
    net = bad_ran_network()
    card = score_network(net, time=3.0)
    reg = IntentRegistry()
    reg.register(parse_intent({"id": "net", "scope": "network", "threshold": 0.99}))
    reports = report_cycle(reg, net, card, time=3.0)
    ids = [r.intent_id for r in reports]
    # the network intent itself, then its per-domain children in domain order
    assert ids[0] == "net"
    assert ids[1:] == [x for x in ("net:core", "net:ran") if x in ids[1:]]
    assert "net:ran" in ids
    for r in reports:
        assert r.observed < r.threshold


def test_report_cycle_quiet_when_compliant():
    net = make_network(make_nf("a", "d1"))
    card = score_network(net, time=0.0)
    reg = IntentRegistry()
    reg.register(parse_intent({"id": "net", "scope": "network", "threshold": 0.1}))
    assert report_cycle(reg, net, card, time=0.0) == []


def test_report_cycle_on_random_networks_partitions_gap():
    rng = random.Random(2222)
    for _ in range(30):
        net = random_network(rng)
        card = score_network(net, time=0.0)
        reg = IntentRegistry()
        reg.register(parse_intent({"id": "net", "scope": "network", "threshold": 1.0}))
        for report in report_cycle(reg, net, card, time=0.0):
            assert sum(report.contributions.values()) == pytest.approx(
                1.0 - report.observed, abs=1e-12
            )
