"""Thread-safe owner of the single-writer engine behind the HTTP handlers."""

from __future__ import annotations

import logging
import threading
from pathlib import Path
from typing import Any

from ..errors import EmptyDomainError, NotLoadedError, UnknownIdError, ValidationError
from ..intent import decompose_intent, parse_intent
from ..simulator import Simulator, format_record, load_scenario, replay_log

logger = logging.getLogger(__name__)


class EngineHost:
    """Serializes every engine operation behind one lock.

    The simulator is a single-writer structure; handlers for mutating and
    reading endpoints all funnel through here so a step never interleaves
    with a scorecard read.
    """

    def __init__(self) -> None:
        self._lock = threading.RLock()
        self._sim: Simulator | None = None

    @property
    def loaded(self) -> bool:
        return self._sim is not None

    def _require(self) -> Simulator:
        if self._sim is None:
            raise NotLoadedError("no scenario loaded; POST /scenario first")
        return self._sim

    # -- lifecycle

    def load(self, document: dict[str, Any] | str, *, log_path: str | None = None) -> dict[str, Any]:
        scenario = load_scenario(document)
        with self._lock:
            if self._sim is not None:
                self._sim.close()
            self._sim = Simulator(scenario, log_path=log_path)
            logger.info("loaded scenario %r (%d NFs)", scenario.name, len(self._sim.network.nfs))
            return self.info()

    def load_path(self, path: str, *, log_path: str | None = None) -> dict[str, Any]:
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as exc:
            raise ValidationError(f"cannot read scenario file {path!r}: {exc}") from exc
        return self.load(text, log_path=log_path)

    def restore(self, path: str, *, log_path: str | None = None) -> dict[str, Any]:
        """Replay a persisted run log and continue from its final state."""
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as exc:
            raise ValidationError(f"cannot read run log {path!r}: {exc}") from exc
        with self._lock:
            if self._sim is not None:
                self._sim.close()
            self._sim = replay_log(text, log_path=log_path)
            logger.info("replayed %d records from %s", len(self._sim.log.records), path)
            return self.info()

    def info(self) -> dict[str, Any]:
        with self._lock:
            sim = self._require()
            return {
                "name": sim.scenario.name,
                "clock": sim.clock,
                "digest": sim.state_digest(),
                "domains": len(sim.network.domains),
                "nfs": len(sim.network.nfs),
                "scheduled_events": len(sim.scenario.events),
                "intents": len(sim.registry.intents),
            }

    def scenario_document(self) -> dict[str, Any]:
        with self._lock:
            sim = self._require()
            return {
                "name": sim.scenario.name,
                "horizon": sim.scenario.horizon,
                "config": sim.config.to_document(),
                "document": sim.scenario.document,
            }

    # -- simulation control

    def step(self, count: int = 1) -> dict[str, Any]:
        with self._lock:
            sim = self._require()
            results = []
            for _ in range(count):
                step = sim.step()
                results.append(
                    {"kind": step.kind, "time": step.time, "event_id": step.event_id}
                )
            return {"results": results, "clock": sim.clock, "digest": sim.state_digest()}

    def run(self, until: float | None = None) -> dict[str, Any]:
        with self._lock:
            sim = self._require()
            summary = sim.run(until=until)
            return {
                **summary.to_document(),
                "clock": sim.clock,
                "digest": sim.state_digest(),
            }

    def inject(self, document: dict[str, Any]) -> dict[str, Any]:
        with self._lock:
            sim = self._require()
            doc = dict(document)
            if doc.get("time") is None:
                doc["time"] = sim.clock
            event = sim.inject(doc)
            return {"event": event.to_document(), "clock": sim.clock}

    # -- intents

    def register_intent(self, document: dict[str, Any]) -> dict[str, Any]:
        with self._lock:
            sim = self._require()
            intent = sim.register_intent(parse_intent(document))
            return intent.to_document()

    def update_intent(self, intent_id: str, threshold: float) -> dict[str, Any]:
        with self._lock:
            sim = self._require()
            return sim.update_intent(intent_id, threshold).to_document()

    def remove_intent(self, intent_id: str) -> dict[str, Any]:
        with self._lock:
            sim = self._require()
            sim.remove_intent(intent_id)
            return {"removed": intent_id}

    def intents(self, children: bool = False) -> list[dict[str, Any]]:
        with self._lock:
            sim = self._require()
            docs = []
            for intent in sim.registry.ordered():
                docs.append(intent.to_document())
                if children:
                    docs.extend(
                        child.to_document() for child in decompose_intent(intent, sim.network)
                    )
            return docs

    # -- reads

    def state(self, at: float | None = None) -> dict[str, Any]:
        with self._lock:
            sim = self._require()
            if at is None:
                return self._state_of(sim)
            if at < 0:
                raise ValidationError(f"historical time {at} must be non-negative")
            ghost = self._ghost_at(sim, at)
            try:
                state = self._state_of(ghost)
            finally:
                ghost.close()
            state["at"] = at
            return state

    def scope_state(
        self, kind: str, target: str | None = None, at: float | None = None
    ) -> dict[str, Any]:
        with self._lock:
            sim = self._require()
            state = self.state(at=at)
            if kind == "network":
                return state["network"]
            table = state["domains"] if kind == "domain" else state["nfs"]
            assert target is not None
            if target in table:
                return table[target]
            if kind == "domain":
                if target in sim.network.domains:
                    raise EmptyDomainError(f"domain {target!r} has no member functions")
                raise UnknownIdError(f"unknown domain {target!r}")
            raise UnknownIdError(f"unknown network function {target!r}")

    def fsm_records(self) -> dict[str, Any]:
        with self._lock:
            sim = self._require()
            return {nf_id: sim.fsm[nf_id].to_document() for nf_id in sorted(sim.fsm)}

    def fsm_record(self, nf_id: str) -> dict[str, Any]:
        with self._lock:
            sim = self._require()
            if nf_id not in sim.fsm:
                raise UnknownIdError(f"unknown network function {nf_id!r}")
            return sim.fsm[nf_id].to_document()

    def reports(self, since: int = -1) -> dict[str, Any]:
        """Violation reports after the ``since`` cursor (a log seq number)."""
        with self._lock:
            sim = self._require()
            picked = sim.log.since(since, kinds={"report"})
            return {"cursor": len(sim.log.records) - 1, "reports": picked}

    def log_records(
        self, since: int = -1, kinds: set[str] | None = None, limit: int | None = None
    ) -> dict[str, Any]:
        with self._lock:
            sim = self._require()
            picked = sim.log.since(since, kinds=kinds)
            if limit is not None:
                picked = picked[:limit]
            if picked:
                cursor = picked[-1]["seq"]
            else:
                cursor = len(sim.log.records) - 1
            return {"cursor": cursor, "records": picked}

    def pending_events(self) -> dict[str, Any]:
        with self._lock:
            sim = self._require()
            return {
                "clock": sim.clock,
                "events": [ev.to_document() for ev in sim.pending_events()],
            }

    # -- internals

    def _state_of(self, sim: Simulator) -> dict[str, Any]:
        card = sim.scorecard
        return {
            "clock": sim.clock,
            "scan_count": sim.scan_count,
            "digest": sim.state_digest(),
            "network": card.network.to_record(),
            "domains": {d: card.domains[d].to_record() for d in sorted(card.domains)},
            "nfs": {n: card.nfs[n].to_record() for n in sorted(card.nfs)},
            "states": {n: rec.current.value for n, rec in sorted(sim.fsm.items())},
            "intents": [intent.to_document() for intent in sim.registry.ordered()],
        }

    def _ghost_at(self, sim: Simulator, at: float) -> Simulator:
        """Reconstruct the past by replaying the log prefix up to ``at``.

        Record times never decrease and records of one step share one time,
        so a time cut is always a clean block boundary.
        """
        prefix = [format_record(r) for r in sim.log.records if r["time"] <= at]
        return replay_log(prefix)
