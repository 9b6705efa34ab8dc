from __future__ import annotations

import random

import pytest

from conftest import make_network, make_nf, random_network, ratio_ctx
from secstate.aggregation import (
    MetricSnapshot,
    Scope,
    ScopeKind,
    ScoreWeights,
    composite_score,
    domain_snapshot,
    network_snapshot,
    nf_snapshot,
    score_network,
)
from secstate.errors import (
    EmptyDomainError,
    MetricInputError,
    NoDomainsError,
)
from secstate.metrics import (
    local_misconfig_map,
    nf_control_effectiveness,
    nf_measures,
    nf_surface_exposure,
)
from secstate.model import ComplianceRule, Domain


def test_scope_constructors_and_validation():
    assert Scope.network().kind is ScopeKind.NETWORK
    assert Scope.domain("d").target == "d"
    assert Scope.nf("n").kind is ScopeKind.NF
    with pytest.raises(MetricInputError):
        Scope(kind=ScopeKind.DOMAIN, target=None)
    with pytest.raises(MetricInputError):
        Scope(kind=ScopeKind.NETWORK, target="oops")


def test_weights_default_and_validation():
    w = ScoreWeights()
    assert w.controls == pytest.approx(1 / 3)
    assert sum(w.as_mapping().values()) == pytest.approx(1.0)
    ScoreWeights(0.5, 0.25, 0.25)  # fine
    with pytest.raises(MetricInputError):
        ScoreWeights(0.5, 0.5, 0.5)
    with pytest.raises(MetricInputError):
        ScoreWeights(-0.2, 0.6, 0.6)
    assert ScoreWeights.from_sequence([0.2, 0.3, 0.5]).surface == 0.5
    with pytest.raises(MetricInputError):
        ScoreWeights.from_sequence({"controls": 1})  # mappings are a config-file form
    with pytest.raises(MetricInputError):
        ScoreWeights.from_sequence([0.2, 0.3])


def test_composite_formula():
    # high controls, low misconfiguration and surface give a high posture
    assert composite_score(1.0, 0.0, 0.0) == pytest.approx(1.0)
    assert composite_score(0.0, 1.0, 1.0) == pytest.approx(0.0)
    got = composite_score(1 / 3, 0.3, 0.2)
    assert got == pytest.approx((1 / 3 + 0.7 + 0.8) / 3)
    skewed = composite_score(0.9, 0.5, 0.1, ScoreWeights(1.0, 0.0, 0.0))
    assert skewed == pytest.approx(0.9)
    with pytest.raises(MetricInputError):
        composite_score(1.5, 0.0, 0.0)


def two_domain_network():
    return make_network(
        make_nf("a", "d1", rules=[ComplianceRule("r", 4, 2)], om_context=ratio_ctx(1, 2)),
        make_nf("b", "d1"),
        make_nf("c", "d2"),
        links=[("a", "c")],
    )


def test_nf_snapshot_composes_the_three_metrics():
    net = two_domain_network()
    snap = nf_snapshot(net, "a", time=3.0)
    assert snap.scope == Scope.nf("a") and snap.time == 3.0
    assert snap.controls == nf_control_effectiveness(net.nf("a"))
    measures = nf_measures(net, "a", local_misconfig_map(net))
    assert snap.misconfig == measures.five_measure_mean()
    assert snap.measures == measures
    exposure = nf_surface_exposure(net.nf("a"))
    assert snap.surface == exposure.total
    assert snap.surface_by_category == exposure.by_category
    assert snap.composite == composite_score(snap.controls, snap.misconfig, snap.surface)


def test_snapshot_record_shape():
    net = two_domain_network()
    rec = nf_snapshot(net, "a", time=1.0).to_record()
    assert rec["scope"] == "nf" and rec["id"] == "a" and rec["time"] == 1.0
    # scores sit flat at the top level, as the service returns them
    for key in ("controls", "misconfig", "surface", "composite"):
        assert isinstance(rec[key], float)
    assert "measures" in rec and "surface_by_category" in rec
    net_rec = network_snapshot(net, time=1.0).to_record()
    assert net_rec["scope"] == "network" and "id" not in net_rec
    assert "measures" not in net_rec


def test_domain_snapshot_is_member_mean():
    net = two_domain_network()
    locals_ = local_misconfig_map(net)
    d1 = domain_snapshot(net, "d1", time=0.0)
    parts = [nf_snapshot(net, x, time=0.0, local_scores=locals_) for x in ("a", "b")]
    assert d1.controls == pytest.approx(sum(p.controls for p in parts) / 2, abs=1e-15)
    assert d1.misconfig == pytest.approx(sum(p.misconfig for p in parts) / 2, abs=1e-15)
    assert d1.surface == pytest.approx(sum(p.surface for p in parts) / 2, abs=1e-15)
    assert d1.composite == pytest.approx(
        composite_score(d1.controls, d1.misconfig, d1.surface), abs=1e-15
    )


def test_empty_domain_and_no_domains_rejected():
    net = two_domain_network()
    net.domains["ghost"] = Domain(domain_id="ghost", name="ghost")
    with pytest.raises(EmptyDomainError):
        domain_snapshot(net, "ghost", time=0.0)
    # the network-level mean skips empty domains
    assert network_snapshot(net, time=0.0).composite > 0
    from secstate.model import Network

    empty = Network(domains={"ghost": Domain(domain_id="ghost", name="ghost")}, nfs={})
    with pytest.raises(NoDomainsError):
        network_snapshot(empty, time=0.0)


def test_scorecard_lookup():
    net = two_domain_network()
    card = score_network(net, time=2.0)
    assert card.for_scope(Scope.network()) == card.network
    assert card.for_scope(Scope.domain("d1")) == card.domains["d1"]
    assert card.for_scope(Scope.nf("c")) == card.nfs["c"]
    with pytest.raises(MetricInputError):
        card.for_scope(Scope.domain("ghost"))


def test_scorecard_matches_individual_snapshots_exactly():
    rng = random.Random(2468)
    for _ in range(30):
        net = random_network(rng)
        card = score_network(net, time=1.0)
        locals_ = local_misconfig_map(net)
        for nf_id in net.nfs:
            assert card.nfs[nf_id] == nf_snapshot(net, nf_id, time=1.0, local_scores=locals_)
        for domain_id, dom in net.domains.items():
            if dom.member_nf_ids:
                assert card.domains[domain_id] == domain_snapshot(
                    net, domain_id, time=1.0, local_scores=locals_
                )
        assert card.network == network_snapshot(net, time=1.0, local_scores=locals_)


def test_rollups_match_flat_oracle():
    # brute-force recomputation from scratch, no shared passes
    rng = random.Random(13579)
    for _ in range(100):
        net = random_network(rng)
        card = score_network(net, time=0.0)
        for domain_id, dom in sorted(net.domains.items()):
            members = sorted(dom.member_nf_ids)
            if not members:
                assert domain_id not in card.domains
                continue
            got = card.domains[domain_id]
            c = sum(nf_control_effectiveness(net.nf(x)) for x in members) / len(members)
            locals_ = local_misconfig_map(net)
            m = sum(
                nf_measures(net, x, locals_).five_measure_mean() for x in members
            ) / len(members)
            s = sum(nf_surface_exposure(net.nf(x)).total for x in members) / len(members)
            assert got.controls == pytest.approx(c, abs=1e-12)
            assert got.misconfig == pytest.approx(m, abs=1e-12)
            assert got.surface == pytest.approx(s, abs=1e-12)
            assert got.composite == pytest.approx(
                (c + (1 - m) + (1 - s)) / 3, abs=1e-12
            )
        lived = [d for d in sorted(net.domains) if net.domains[d].member_nf_ids]
        expected_net = {
            part: sum(getattr(card.domains[d], part) for d in lived) / len(lived)
            for part in ("controls", "misconfig", "surface")
        }
        assert card.network.controls == pytest.approx(expected_net["controls"], abs=1e-12)
        assert card.network.misconfig == pytest.approx(expected_net["misconfig"], abs=1e-12)
        assert card.network.surface == pytest.approx(expected_net["surface"], abs=1e-12)


def test_composite_of_means_equals_mean_of_composites():
    # the composite is affine in each component, so the two orders agree
    rng = random.Random(97531)
    for _ in range(50):
        net = random_network(rng)
        card = score_network(net, time=0.0)
        for domain_id, dom in net.domains.items():
            members = sorted(dom.member_nf_ids)
            if not members:
                continue
            mean_of = sum(card.nfs[x].composite for x in members) / len(members)
            assert card.domains[domain_id].composite == pytest.approx(mean_of, abs=1e-12)


def test_all_scores_in_unit_range():
    rng = random.Random(86420)
    for _ in range(60):
        net = random_network(rng)
        card = score_network(net, time=0.0)
        for snap in [card.network, *card.domains.values(), *card.nfs.values()]:
            for value in (snap.controls, snap.misconfig, snap.surface, snap.composite):
                assert 0.0 <= value <= 1.0


def test_weights_respected_in_rollups():
    net = two_domain_network()
    w = ScoreWeights(0.6, 0.3, 0.1)
    card = score_network(net, time=0.0, weights=w)
    d1 = card.domains["d1"]
    assert d1.composite == pytest.approx(
        0.6 * d1.controls + 0.3 * (1 - d1.misconfig) + 0.1 * (1 - d1.surface)
    )


def test_snapshot_is_immutable():
    net = two_domain_network()
    snap = nf_snapshot(net, "a", time=0.0)
    with pytest.raises(AttributeError):
        snap.controls = 0.5  # type: ignore[misc]
