"""HTTP service wrapping the scoring engine."""

from .app import app, create_app
from .host import EngineHost

__all__ = ["EngineHost", "app", "create_app"]
