"""Command line front end: validate, score and run scenarios, serve the API.

Batch commands (validate, score, run, replay) drive the engine in-process and
never open a port; only ``serve`` starts the HTTP listener. Defaults can come
from SECSTATE_* environment variables.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path
from typing import Any

from . import __version__
from .errors import SecStateError
from .scenarios import packaged_names, packaged_scenario
from .simulator import Simulator, load_scenario, replay_log

logger = logging.getLogger(__name__)


def _env(name: str, default: str | None = None) -> str | None:
    return os.environ.get(f"SECSTATE_{name}", default)


def _read_scenario(ref: str) -> dict[str, Any]:
    """A scenario reference: a file path, ``demo`` or ``demo:<name>``."""
    if ref == "demo":
        return packaged_scenario()
    if ref.startswith("demo:"):
        return packaged_scenario(ref.split(":", 1)[1])
    try:
        text = Path(ref).read_text(encoding="utf-8")
    except OSError as exc:
        raise SecStateError(f"cannot read scenario {ref!r}: {exc}") from exc
    doc = json.loads(text)
    if not isinstance(doc, dict):
        raise SecStateError(f"scenario {ref!r} must contain a JSON object")
    return doc


def _parse_weights(raw: str) -> list[float]:
    parts = [p.strip() for p in raw.split(",")]
    if len(parts) != 3:
        raise SecStateError(f"--weights needs three comma-separated numbers, got {raw!r}")
    try:
        return [float(p) for p in parts]
    except ValueError as exc:
        raise SecStateError(f"--weights values must be numbers: {raw!r}") from exc


def _apply_overrides(doc: dict[str, Any], args: argparse.Namespace) -> dict[str, Any]:
    """Fold CLI flags into the scenario config so runs and logs agree."""
    config = dict(doc.get("config") or {})
    if getattr(args, "weights", None):
        config["weights"] = _parse_weights(args.weights)
    if getattr(args, "scan_period", None) is not None:
        config["scan_period"] = args.scan_period
    if getattr(args, "patch_limit", None) is not None:
        config["time_to_patch_limit"] = args.patch_limit
    if getattr(args, "tau_eff", None) is not None:
        config["effectiveness_threshold"] = args.tau_eff
    if config:
        doc = dict(doc)
        doc["config"] = config
    return doc


def _state_rows(state: dict[str, Any]) -> list[tuple[str, str, dict[str, Any], str]]:
    rows: list[tuple[str, str, dict[str, Any], str]] = [
        ("network", "-", state["network"], "-")
    ]
    for domain_id, snap in state["domains"].items():
        rows.append(("domain", domain_id, snap, "-"))
    for nf_id, snap in state["nfs"].items():
        rows.append(("nf", nf_id, snap, state["states"].get(nf_id, "-")))
    return rows


def _print_state(state: dict[str, Any]) -> None:
    rows = _state_rows(state)
    id_width = max(8, max(len(r[1]) for r in rows) + 1)
    print(f"t={state['clock']:g}  scans={state['scan_count']}")
    header = (
        f"{'scope':<8} {'id':<{id_width}} {'controls':>9} {'misconfig':>10} "
        f"{'surface':>8} {'composite':>10}  state"
    )
    print(header)
    print("-" * len(header))
    for scope, target, snap, lifecycle in rows:
        print(
            f"{scope:<8} {target:<{id_width}} {snap['controls']:>9.3f} "
            f"{snap['misconfig']:>10.3f} {snap['surface']:>8.3f} "
            f"{snap['composite']:>10.3f}  {lifecycle}"
        )


def _print_reports(records: list[dict[str, Any]], limit: int = 10) -> None:
    if not records:
        print("no intent violations")
        return
    print(f"{len(records)} intent violation report(s); last {min(limit, len(records))}:")
    for record in records[-limit:]:
        print(
            f"  t={record['time']:g} {record['intent']}: composite "
            f"{record['observed']:.3f} < {record['threshold']:.3f} "
            f"(shortfall {record['shortfall']:.3f}, worst: {record['top_contributor']})"
        )


def _sim_state(sim: Simulator) -> dict[str, Any]:
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


def _cmd_validate(args: argparse.Namespace) -> int:
    doc = _apply_overrides(_read_scenario(args.scenario), args)
    scenario = load_scenario(doc)
    print(f"scenario {scenario.name!r} is valid")
    print(
        f"  domains={len(scenario.document.get('domains', []))} "
        f"nfs={len(scenario.document.get('network_functions', []))} "
        f"events={len(scenario.events)} intents={len(scenario.intents)} "
        f"horizon={scenario.horizon if scenario.horizon is not None else '-'}"
    )
    return 0


def _cmd_score(args: argparse.Namespace) -> int:
    doc = _apply_overrides(_read_scenario(args.scenario), args)
    sim = Simulator(load_scenario(doc))
    state = _sim_state(sim)
    if args.json:
        print(json.dumps(state, indent=2))
    else:
        _print_state(state)
    sim.close()
    return 0


def _cmd_run(args: argparse.Namespace) -> int:
    doc = _apply_overrides(_read_scenario(args.scenario), args)
    scenario = load_scenario(doc)
    if args.until is None and scenario.horizon is None:
        raise SecStateError("scenario sets no horizon: pass --until")
    sim = Simulator(scenario, log_path=args.out)
    summary = sim.run(until=args.until)
    state = _sim_state(sim)
    reports = sim.log.since(-1, kinds={"report"})
    if args.json:
        print(
            json.dumps(
                {"summary": summary.to_document(), "state": state, "reports": reports},
                indent=2,
            )
        )
    else:
        print(
            f"processed {summary.events} event(s) and {summary.ticks} scan tick(s) "
            f"to t={summary.until:g}"
        )
        _print_state(state)
        _print_reports(reports)
        if args.out:
            print(f"run log: {args.out} ({len(sim.log.records)} records)")
    sim.close()
    return 0


def _cmd_replay(args: argparse.Namespace) -> int:
    try:
        text = Path(args.log).read_text(encoding="utf-8")
    except OSError as exc:
        raise SecStateError(f"cannot read run log {args.log!r}: {exc}") from exc
    sim = replay_log(text)
    if args.json:
        print(json.dumps(_sim_state(sim), indent=2))
    else:
        print(
            f"replayed {len(sim.log.records)} records: clock={sim.clock:g} "
            f"digest={sim.state_digest()}"
        )
        _print_state(_sim_state(sim))
    sim.close()
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import EngineHost, create_app

    host = EngineHost()
    if args.scenario:
        doc = _apply_overrides(_read_scenario(args.scenario), args)
        info = host.load(doc, log_path=args.log)
        logger.info("preloaded scenario %r", info["name"])
    uvicorn.run(create_app(host), host=args.bind, port=args.port, log_level="info")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="secstate",
        description="Score and simulate the security posture of a mobile network",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument(
        "-v", "--verbose", action="store_true", help="enable debug logging"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def scenario_arg(p: argparse.ArgumentParser) -> None:
        p.add_argument(
            "--scenario",
            default=_env("SCENARIO"),
            help="scenario file, or 'demo' / 'demo:<name>' for a packaged one "
            f"(available: {', '.join(packaged_names()) or 'none'})",
        )

    def override_args(p: argparse.ArgumentParser) -> None:
        p.add_argument("--weights", help="composite weights as 'controls,misconfig,surface'")
        p.add_argument("--scan-period", type=float, help="days between compliance scans")
        p.add_argument("--patch-limit", type=float, help="days until a patch timer saturates")
        p.add_argument(
            "--tau-eff",
            type=float,
            help="control effectiveness needed to verify mitigations at a scan",
        )

    p_validate = sub.add_parser("validate", help="parse and validate a scenario")
    scenario_arg(p_validate)
    override_args(p_validate)
    p_validate.set_defaults(func=_cmd_validate)

    p_score = sub.add_parser("score", help="score a scenario at time zero")
    scenario_arg(p_score)
    override_args(p_score)
    p_score.add_argument("--json", action="store_true", help="full-precision JSON output")
    p_score.set_defaults(func=_cmd_score)

    p_run = sub.add_parser("run", help="run a scenario to a time horizon")
    scenario_arg(p_run)
    override_args(p_run)
    p_run.add_argument("--until", type=float, help="simulated time to run to")
    p_run.add_argument("--out", default=_env("LOG"), help="write the JSON-lines run log here")
    p_run.add_argument("--json", action="store_true", help="full-precision JSON output")
    p_run.set_defaults(func=_cmd_run)

    p_replay = sub.add_parser("replay", help="rebuild a run from its log")
    p_replay.add_argument("--log", required=True, help="run log to replay")
    p_replay.add_argument("--json", action="store_true", help="full-precision JSON output")
    p_replay.set_defaults(func=_cmd_replay)

    p_serve = sub.add_parser("serve", help="start the HTTP service")
    scenario_arg(p_serve)
    override_args(p_serve)
    p_serve.add_argument("--bind", default=_env("HOST", "127.0.0.1"), help="bind address")
    p_serve.add_argument(
        "--port", type=int, default=int(_env("PORT", "8000") or 8000), help="listen port"
    )
    p_serve.add_argument("--log", default=_env("LOG"), help="persist the run log here")
    p_serve.set_defaults(func=_cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    if args.command in {"validate", "score", "run"} and not args.scenario:
        print("error: --scenario is required (or set SECSTATE_SCENARIO)", file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except SecStateError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except json.JSONDecodeError as exc:
        print(f"error: invalid JSON: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
