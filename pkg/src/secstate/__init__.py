"""Security posture scoring and simulation for mobile network functions.

The package models a network of functions grouped into security domains,
scores each function on control effectiveness, misconfiguration exposure and
attack surface, rolls the scores up to domain and network scope, tracks a
per-function security lifecycle, and evaluates posture intents against the
composite score as a deterministic event simulation advances.
"""

from __future__ import annotations

__version__ = "0.1.0"

from .aggregation import (
    MetricSnapshot,
    NetworkScorecard,
    Scope,
    ScopeKind,
    ScoreWeights,
    composite_score,
    domain_snapshot,
    network_snapshot,
    nf_snapshot,
    score_network,
)
from .errors import SecStateError
from .events import Event, EventKind, parse_event
from .fsm import SecurityState, Trigger, transition, transition_table_document
from .intent import Intent, ViolationReport, decompose_intent, evaluate_intent
from .model import Network, NetworkFunction, load_topology
from .simulator import (
    Scenario,
    SimConfig,
    Simulator,
    load_scenario,
    replay_log,
)

__all__ = [
    "Event",
    "EventKind",
    "Intent",
    "MetricSnapshot",
    "Network",
    "NetworkFunction",
    "NetworkScorecard",
    "Scenario",
    "Scope",
    "ScopeKind",
    "ScoreWeights",
    "SecStateError",
    "SecurityState",
    "SimConfig",
    "Simulator",
    "Trigger",
    "ViolationReport",
    "composite_score",
    "decompose_intent",
    "domain_snapshot",
    "evaluate_intent",
    "load_scenario",
    "load_topology",
    "network_snapshot",
    "nf_snapshot",
    "parse_event",
    "replay_log",
    "score_network",
    "transition",
    "transition_table_document",
    "__version__",
]
