"""Scenario documents shipped with the package."""

from __future__ import annotations

import json
from importlib import resources
from typing import Any

from ..errors import UnknownIdError


def packaged_names() -> list[str]:
    names = []
    for entry in resources.files(__package__).iterdir():
        if entry.name.endswith(".json"):
            names.append(entry.name[: -len(".json")])
    return sorted(names)


def packaged_scenario(name: str = "intent_loop_demo") -> dict[str, Any]:
    """Parsed document of a packaged scenario."""
    resource = resources.files(__package__).joinpath(f"{name}.json")
    if not resource.is_file():
        raise UnknownIdError(
            f"no packaged scenario {name!r}; available: {', '.join(packaged_names())}"
        )
    return json.loads(resource.read_text(encoding="utf-8"))


__all__ = ["packaged_names", "packaged_scenario"]
