"""Network model: domains, network functions and the attributes the metric engines read.

The model is loaded from a JSON document (see docs/scenario-format.md), validated
against the invariants below, and mutated only by the simulator's single writer.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Any

from .errors import ParseError, UnknownIdError, ValidationError


class NfKind(str, Enum):
    """Network function families distinguished by the model."""

    GNB = "gNB"
    CU_CP = "CU-CP"
    CU_UP = "CU-UP"
    DU = "DU"
    CORE_NF = "core-NF"
    OTHER = "other"


class EntryPointCategory(str, Enum):
    """The five attack-surface categories an entry point can belong to."""

    RADIO = "3GPP-Radio"
    NETWORK = "3GPP-Network"
    ORAN = "O-RAN"
    OAM = "OAM"
    PLATFORM = "Platform"


class OmKind(str, Enum):
    RADIO = "radio"
    RATIO = "ratio"
    FIXED = "fixed"


@dataclass
class OmContext:
    """Context from which an order-of-magnitude factor is derived.

    radio: potential attacking UEs over currently connected UEs on a cell
           (``ue_capacity`` bounds attach events, it does not enter the factor).
    ratio: generic noncompliant/total unit ratio, e.g. mis-configured IPsec
           tunnels over configured tunnels.
    fixed: a constant in [0, 1] supplied by the scenario author.
    """

    kind: OmKind
    ue_potential_attackers: int = 0
    ue_connected: int = 0
    ue_capacity: int | None = None
    noncompliant_units: int = 0
    total_units: int = 0
    value: float = 0.0

    def validate(self, where: str = "om_context") -> None:
        if self.kind is OmKind.RADIO:
            if self.ue_potential_attackers < 0 or self.ue_connected < 0:
                raise ValidationError(f"{where}: UE counters must be non-negative")
            if self.ue_potential_attackers > self.ue_connected:
                raise ValidationError(
                    f"{where}: potential attackers ({self.ue_potential_attackers}) "
                    f"exceed connected UEs ({self.ue_connected})"
                )
            if self.ue_capacity is not None and self.ue_connected > self.ue_capacity:
                raise ValidationError(
                    f"{where}: connected UEs ({self.ue_connected}) exceed cell "
                    f"capacity ({self.ue_capacity})"
                )
        elif self.kind is OmKind.RATIO:
            if self.noncompliant_units < 0 or self.total_units < 0:
                raise ValidationError(f"{where}: unit counts must be non-negative")
            if self.noncompliant_units > self.total_units:
                raise ValidationError(
                    f"{where}: noncompliant units ({self.noncompliant_units}) "
                    f"exceed total units ({self.total_units})"
                )
        elif self.kind is OmKind.FIXED:
            if not 0.0 <= self.value <= 1.0:
                raise ValidationError(f"{where}: fixed value {self.value} outside [0, 1]")

    def to_document(self) -> dict[str, Any]:
        if self.kind is OmKind.RADIO:
            doc: dict[str, Any] = {
                "kind": "radio",
                "ue_potential_attackers": self.ue_potential_attackers,
                "ue_connected": self.ue_connected,
            }
            if self.ue_capacity is not None:
                doc["ue_capacity"] = self.ue_capacity
            return doc
        if self.kind is OmKind.RATIO:
            return {
                "kind": "ratio",
                "noncompliant_units": self.noncompliant_units,
                "total_units": self.total_units,
            }
        return {"kind": "fixed", "value": self.value}

    @classmethod
    def from_document(cls, doc: dict[str, Any], where: str = "om_context") -> "OmContext":
        kind = _enum_value(OmKind, doc.get("kind"), f"{where}.kind")
        ctx = cls(
            kind=kind,
            ue_potential_attackers=int(doc.get("ue_potential_attackers", 0)),
            ue_connected=int(doc.get("ue_connected", 0)),
            ue_capacity=(None if doc.get("ue_capacity") is None else int(doc["ue_capacity"])),
            noncompliant_units=int(doc.get("noncompliant_units", 0)),
            total_units=int(doc.get("total_units", 0)),
            value=float(doc.get("value", 0.0)),
        )
        ctx.validate(where)
        return ctx


@dataclass
class PenaltyContext:
    """Cell context that penalizes a control's correctness.

    When the null ciphering scheme is the preferred choice, the penalty grows
    with the share of the cell's UE capacity currently in use. ``cell_ep_id``
    optionally ties the counters to one of the owning NF's radio entry points
    so UE attach/detach events keep them current.
    """

    ue_connected: int
    ue_capacity: int
    null_scheme_preferred: bool = False
    cell_ep_id: str | None = None

    def validate(self, where: str = "penalty_context") -> None:
        if self.ue_capacity <= 0:
            raise ValidationError(f"{where}: UE capacity must be positive")
        if not 0 <= self.ue_connected <= self.ue_capacity:
            raise ValidationError(
                f"{where}: connected UEs ({self.ue_connected}) outside "
                f"[0, {self.ue_capacity}]"
            )

    def to_document(self) -> dict[str, Any]:
        doc: dict[str, Any] = {
            "ue_connected": self.ue_connected,
            "ue_capacity": self.ue_capacity,
            "null_scheme_preferred": self.null_scheme_preferred,
        }
        if self.cell_ep_id is not None:
            doc["cell"] = self.cell_ep_id
        return doc

    @classmethod
    def from_document(cls, doc: dict[str, Any], where: str) -> "PenaltyContext":
        ctx = cls(
            ue_connected=int(_require(doc, "ue_connected", where)),
            ue_capacity=int(_require(doc, "ue_capacity", where)),
            null_scheme_preferred=bool(doc.get("null_scheme_preferred", False)),
            cell_ep_id=doc.get("cell"),
        )
        ctx.validate(where)
        return ctx


@dataclass
class ControlSlot:
    """One security control expected by a requirement.

    ``implemented`` is the coverage bit; ``correctness`` how well the control is
    configured. Unimplemented controls keep correctness 1.0 by convention --
    their contribution is nulled by the coverage bit anyway.
    """

    name: str
    implemented: bool = False
    correctness: float = 1.0
    context: PenaltyContext | None = None

    def validate(self, where: str) -> None:
        if not 0.0 <= self.correctness <= 1.0:
            raise ValidationError(f"{where}: correctness {self.correctness} outside [0, 1]")
        if self.context is not None:
            self.context.validate(f"{where}.penalty_context")

    def to_document(self) -> dict[str, Any]:
        doc: dict[str, Any] = {
            "name": self.name,
            "implemented": self.implemented,
            "correctness": self.correctness,
        }
        if self.context is not None:
            doc["penalty_context"] = self.context.to_document()
        return doc

    @classmethod
    def from_document(cls, doc: dict[str, Any], where: str) -> "ControlSlot":
        ctx_doc = doc.get("penalty_context")
        return cls(
            name=str(_require(doc, "name", where)),
            implemented=bool(doc.get("implemented", False)),
            correctness=float(doc.get("correctness", 1.0)),
            context=None if ctx_doc is None else PenaltyContext.from_document(ctx_doc, where),
        )


@dataclass
class ControlRequirement:
    """A security requirement satisfied by an ordered list of controls."""

    requirement_id: str
    controls: list[ControlSlot] = field(default_factory=list)

    def validate(self, where: str) -> None:
        if not self.controls:
            raise ValidationError(f"{where}: control list must not be empty")
        for slot in self.controls:
            slot.validate(f"{where}.{slot.name}")

    def to_document(self) -> dict[str, Any]:
        return {
            "id": self.requirement_id,
            "controls": [slot.to_document() for slot in self.controls],
        }

    @classmethod
    def from_document(cls, doc: dict[str, Any], where: str) -> "ControlRequirement":
        req_id = str(_require(doc, "id", where))
        slots = [
            ControlSlot.from_document(s, f"{where}.{req_id}")
            for s in doc.get("controls", [])
        ]
        return cls(requirement_id=req_id, controls=slots)


@dataclass
class ComplianceRule:
    """One configuration rule checked against a hardening baseline.

    ``patch_timer`` is the normalized time the rule has stayed non-compliant,
    relative to the patch deadline; it is advanced once per scan via
    ``noncompliant_scans`` so the deadline is reached exactly (no float drift).
    """

    rule_id: str
    total_attributes: int
    noncompliant_attributes: int = 0
    patch_timer: float = 0.0
    noncompliant_scans: int = 0

    @property
    def compliant(self) -> bool:
        return self.noncompliant_attributes == 0

    def validate(self, where: str) -> None:
        if self.total_attributes <= 0:
            raise ValidationError(f"{where}: total_attributes must be positive")
        if not 0 <= self.noncompliant_attributes <= self.total_attributes:
            raise ValidationError(
                f"{where}: noncompliant_attributes ({self.noncompliant_attributes}) "
                f"outside [0, {self.total_attributes}]"
            )
        if not 0.0 <= self.patch_timer <= 1.0:
            raise ValidationError(f"{where}: patch_timer {self.patch_timer} outside [0, 1]")
        if self.compliant and self.patch_timer != 0.0:
            raise ValidationError(f"{where}: compliant rule must have patch_timer 0")
        if self.noncompliant_scans < 0:
            raise ValidationError(f"{where}: noncompliant_scans must be non-negative")

    def to_document(self) -> dict[str, Any]:
        doc: dict[str, Any] = {
            "id": self.rule_id,
            "total_attributes": self.total_attributes,
            "noncompliant_attributes": self.noncompliant_attributes,
        }
        if self.noncompliant_scans:
            doc["noncompliant_scans"] = self.noncompliant_scans
            doc["patch_timer"] = self.patch_timer
        return doc

    @classmethod
    def from_document(cls, doc: dict[str, Any], where: str) -> "ComplianceRule":
        return cls(
            rule_id=str(_require(doc, "id", where)),
            total_attributes=int(_require(doc, "total_attributes", where)),
            noncompliant_attributes=int(doc.get("noncompliant_attributes", 0)),
            patch_timer=float(doc.get("patch_timer", 0.0)),
            noncompliant_scans=int(doc.get("noncompliant_scans", 0)),
        )


@dataclass
class CriticalityProfile:
    """Ordered named criticality flags (e.g. data sensitivity, availability, location)."""

    flags: dict[str, bool] = field(default_factory=dict)

    def validate(self, where: str) -> None:
        if not self.flags:
            raise ValidationError(f"{where}: criticality profile needs at least one flag")

    def to_document(self) -> dict[str, int]:
        return {name: int(raised) for name, raised in self.flags.items()}

    @classmethod
    def from_document(cls, doc: dict[str, Any], where: str) -> "CriticalityProfile":
        if not isinstance(doc, dict) or not doc:
            raise ValidationError(f"{where}: criticality must be a non-empty mapping")
        return cls(flags={str(k): bool(v) for k, v in doc.items()})


@dataclass
class EntryPoint:
    """An attacker-reachable interface instance (a cell, an OAM port, ...).

    ``data_items_exposed`` counts the invocable procedures/methods currently
    reachable through the entry point out of ``data_items_total``.
    """

    ep_id: str
    category: EntryPointCategory
    channels: list[str] = field(default_factory=list)
    data_items_total: int = 1
    data_items_exposed: int = 0
    om_context: OmContext = field(default_factory=lambda: OmContext(OmKind.FIXED, value=0.0))

    def validate(self, where: str) -> None:
        if self.data_items_total <= 0:
            raise ValidationError(f"{where}: data_items_total must be positive")
        if not 0 <= self.data_items_exposed <= self.data_items_total:
            raise ValidationError(
                f"{where}: data_items_exposed ({self.data_items_exposed}) outside "
                f"[0, {self.data_items_total}]"
            )
        self.om_context.validate(f"{where}.om_context")

    def to_document(self) -> dict[str, Any]:
        return {
            "id": self.ep_id,
            "category": self.category.value,
            "channels": list(self.channels),
            "data_items_total": self.data_items_total,
            "data_items_exposed": self.data_items_exposed,
            "om_context": self.om_context.to_document(),
        }

    @classmethod
    def from_document(cls, doc: dict[str, Any], where: str) -> "EntryPoint":
        ep_id = str(_require(doc, "id", where))
        return cls(
            ep_id=ep_id,
            category=_enum_value(EntryPointCategory, _require(doc, "category", where), f"{where}.{ep_id}.category"),
            channels=[str(c) for c in doc.get("channels", [])],
            data_items_total=int(_require(doc, "data_items_total", where)),
            data_items_exposed=int(doc.get("data_items_exposed", 0)),
            om_context=OmContext.from_document(
                _require(doc, "om_context", where), f"{where}.{ep_id}.om_context"
            ),
        )


@dataclass
class NetworkFunction:
    """A logical network node: the unit at which local security state is measured."""

    nf_id: str
    kind: NfKind
    domain_id: str
    ep_max: int
    criticality: CriticalityProfile
    rules: list[ComplianceRule] = field(default_factory=list)
    control_sets: list[ControlRequirement] = field(default_factory=list)
    entry_points: list[EntryPoint] = field(default_factory=list)
    neighbor_ids: set[str] = field(default_factory=set)
    om_context: OmContext | None = None

    def rule(self, rule_id: str) -> ComplianceRule:
        for r in self.rules:
            if r.rule_id == rule_id:
                return r
        raise UnknownIdError(f"unknown rule {rule_id!r} on NF {self.nf_id!r}")

    def requirement(self, requirement_id: str) -> ControlRequirement:
        for req in self.control_sets:
            if req.requirement_id == requirement_id:
                return req
        raise UnknownIdError(f"unknown requirement {requirement_id!r} on NF {self.nf_id!r}")

    def entry_point(self, ep_id: str) -> EntryPoint:
        for ep in self.entry_points:
            if ep.ep_id == ep_id:
                return ep
        raise UnknownIdError(f"unknown entry point {ep_id!r} on NF {self.nf_id!r}")

    def validate(self) -> None:
        where = f"nf.{self.nf_id}"
        if self.ep_max <= 0:
            raise ValidationError(f"{where}: ep_max must be positive")
        if len(self.entry_points) > self.ep_max:
            raise ValidationError(
                f"{where}: {len(self.entry_points)} entry points exceed ep_max {self.ep_max}"
            )
        if self.nf_id in self.neighbor_ids:
            raise ValidationError(f"{where}: NF cannot neighbor itself")
        self.criticality.validate(f"{where}.criticality")
        seen_eps: set[str] = set()
        for ep in self.entry_points:
            if ep.ep_id in seen_eps:
                raise ValidationError(f"{where}: duplicate entry point id {ep.ep_id!r}")
            seen_eps.add(ep.ep_id)
            ep.validate(f"{where}.ep.{ep.ep_id}")
        seen_rules: set[str] = set()
        for rule in self.rules:
            if rule.rule_id in seen_rules:
                raise ValidationError(f"{where}: duplicate rule id {rule.rule_id!r}")
            seen_rules.add(rule.rule_id)
            rule.validate(f"{where}.rule.{rule.rule_id}")
        seen_reqs: set[str] = set()
        for req in self.control_sets:
            if req.requirement_id in seen_reqs:
                raise ValidationError(f"{where}: duplicate requirement id {req.requirement_id!r}")
            seen_reqs.add(req.requirement_id)
            req.validate(f"{where}.req.{req.requirement_id}")
            for slot in req.controls:
                if slot.context is not None and slot.context.cell_ep_id is not None:
                    if slot.context.cell_ep_id not in seen_eps:
                        raise ValidationError(
                            f"{where}: penalty context of control {slot.name!r} references "
                            f"unknown entry point {slot.context.cell_ep_id!r}"
                        )
        if self.om_context is not None:
            self.om_context.validate(f"{where}.om_context")

    def to_document(self) -> dict[str, Any]:
        doc: dict[str, Any] = {
            "id": self.nf_id,
            "kind": self.kind.value,
            "domain": self.domain_id,
            "ep_max": self.ep_max,
            "criticality": self.criticality.to_document(),
            "rules": [r.to_document() for r in self.rules],
            "control_requirements": [req.to_document() for req in self.control_sets],
            "entry_points": [ep.to_document() for ep in self.entry_points],
        }
        if self.om_context is not None:
            doc["om_context"] = self.om_context.to_document()
        return doc

    @classmethod
    def from_document(cls, doc: dict[str, Any]) -> "NetworkFunction":
        nf_id = str(_require(doc, "id", "network_function"))
        where = f"nf.{nf_id}"
        om_doc = doc.get("om_context")
        return cls(
            nf_id=nf_id,
            kind=_enum_value(NfKind, doc.get("kind", "other"), f"{where}.kind"),
            domain_id=str(_require(doc, "domain", where)),
            ep_max=int(doc.get("ep_max", max(1, len(doc.get("entry_points", []))))),
            criticality=CriticalityProfile.from_document(
                _require(doc, "criticality", where), f"{where}.criticality"
            ),
            rules=[ComplianceRule.from_document(r, f"{where}.rules") for r in doc.get("rules", [])],
            control_sets=[
                ControlRequirement.from_document(r, f"{where}.req")
                for r in doc.get("control_requirements", [])
            ],
            entry_points=[
                EntryPoint.from_document(e, f"{where}.ep") for e in doc.get("entry_points", [])
            ],
            om_context=None if om_doc is None else OmContext.from_document(om_doc, f"{where}.om_context"),
        )


@dataclass
class Domain:
    """A group of NFs under one security policy and administrative authority."""

    domain_id: str
    name: str
    member_nf_ids: set[str] = field(default_factory=set)

    def to_document(self) -> dict[str, Any]:
        return {"id": self.domain_id, "name": self.name}


@dataclass
class Network:
    """Validated topology: domains, NFs and the symmetric neighbor relation."""

    domains: dict[str, Domain] = field(default_factory=dict)
    nfs: dict[str, NetworkFunction] = field(default_factory=dict)

    def nf(self, nf_id: str) -> NetworkFunction:
        try:
            return self.nfs[nf_id]
        except KeyError:
            raise UnknownIdError(f"unknown network function {nf_id!r}") from None

    def domain(self, domain_id: str) -> Domain:
        try:
            return self.domains[domain_id]
        except KeyError:
            raise UnknownIdError(f"unknown domain {domain_id!r}") from None

    def neighbors(self, nf_id: str) -> list[NetworkFunction]:
        """Directly connected NFs, sorted by id; never includes the NF itself."""
        nf = self.nf(nf_id)
        return [self.nf(other) for other in sorted(nf.neighbor_ids)]

    def add_link(self, a: str, b: str) -> None:
        if a == b:
            raise ValidationError(f"link {a!r}-{b!r}: NF cannot neighbor itself")
        self.nf(a).neighbor_ids.add(b)
        self.nf(b).neighbor_ids.add(a)

    def remove_link(self, a: str, b: str) -> None:
        self.nf(a).neighbor_ids.discard(b)
        self.nf(b).neighbor_ids.discard(a)

    def links(self) -> list[tuple[str, str]]:
        """Undirected edges as sorted unique pairs."""
        seen: set[tuple[str, str]] = set()
        for nf in self.nfs.values():
            for other in nf.neighbor_ids:
                seen.add(tuple(sorted((nf.nf_id, other))))  # type: ignore[arg-type]
        return sorted(seen)

    def validate(self) -> None:
        for domain_id, domain in self.domains.items():
            if domain.domain_id != domain_id:
                raise ValidationError(f"domain key {domain_id!r} does not match id")
        membership: dict[str, str] = {}
        for nf_id, nf in self.nfs.items():
            if nf.nf_id != nf_id:
                raise ValidationError(f"NF key {nf_id!r} does not match id")
            if nf.domain_id not in self.domains:
                raise ValidationError(
                    f"nf.{nf_id}: references unknown domain {nf.domain_id!r}"
                )
            membership[nf_id] = nf.domain_id
            nf.validate()
            for other in nf.neighbor_ids:
                if other not in self.nfs:
                    raise ValidationError(f"nf.{nf_id}: unknown neighbor {other!r}")
                if nf_id not in self.nfs[other].neighbor_ids:
                    raise ValidationError(
                        f"neighbor relation not symmetric: {other!r} missing {nf_id!r}"
                    )
        for domain in self.domains.values():
            expected = {nf_id for nf_id, dom in membership.items() if dom == domain.domain_id}
            if domain.member_nf_ids != expected:
                raise ValidationError(
                    f"domain {domain.domain_id!r}: member set out of sync with NF domain refs"
                )

    def to_document(self) -> dict[str, Any]:
        return {
            "domains": [self.domains[d].to_document() for d in sorted(self.domains)],
            "network_functions": [self.nfs[n].to_document() for n in sorted(self.nfs)],
            "links": [list(pair) for pair in self.links()],
        }


def _require(doc: dict[str, Any], key: str, where: str) -> Any:
    if key not in doc:
        raise ValidationError(f"{where}: missing required field {key!r}")
    return doc[key]


def _enum_value(enum_cls: type, raw: Any, where: str) -> Any:
    try:
        return enum_cls(raw)
    except ValueError:
        allowed = ", ".join(repr(m.value) for m in enum_cls)  # type: ignore[attr-defined]
        raise ValidationError(f"{where}: {raw!r} is not one of {allowed}") from None


def load_topology(document: str | dict[str, Any]) -> Network:
    """Parse and validate a topology document.

    Accepts the JSON text or the already-parsed mapping. Neighbor symmetry is
    established by closure over the undirected ``links`` list; any invariant
    violation raises ValidationError.
    """
    if isinstance(document, (str, bytes)):
        try:
            doc = json.loads(document)
        except json.JSONDecodeError as exc:
            raise ParseError(f"topology document is not valid JSON: {exc}") from exc
    else:
        doc = document
    if not isinstance(doc, dict):
        raise ParseError("topology document must be a JSON object")

    net = Network()
    for d in doc.get("domains", []):
        domain_id = str(_require(d, "id", "domain"))
        if domain_id in net.domains:
            raise ValidationError(f"duplicate domain id {domain_id!r}")
        net.domains[domain_id] = Domain(domain_id=domain_id, name=str(d.get("name", domain_id)))
    for n in doc.get("network_functions", []):
        nf = NetworkFunction.from_document(n)
        if nf.nf_id in net.nfs:
            raise ValidationError(f"duplicate NF id {nf.nf_id!r}")
        net.nfs[nf.nf_id] = nf
    for nf in net.nfs.values():
        if nf.domain_id in net.domains:
            net.domains[nf.domain_id].member_nf_ids.add(nf.nf_id)
    for pair in doc.get("links", []):
        if not isinstance(pair, (list, tuple)) or len(pair) != 2:
            raise ValidationError(f"link {pair!r} must be a pair of NF ids")
        a, b = str(pair[0]), str(pair[1])
        if a not in net.nfs or b not in net.nfs:
            raise ValidationError(f"link {pair!r} references an unknown NF")
        net.add_link(a, b)
    net.validate()
    return net
