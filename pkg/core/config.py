"""
Runtime settings for the solver and CLI.

Values come from environment variables (a ``.env`` file is loaded by the CLI)
and fall back to built-in defaults.
"""

from __future__ import annotations

import logging
import os
from dataclasses import dataclass

from core.errors import ConfigError

logger = logging.getLogger(__name__)

DEFAULT_SEARCH_BUDGET = 100_000
DEFAULT_MAX_PATHS = 64


def _env_int(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw)
    except ValueError:
        raise ConfigError(f"{name} must be an integer, got {raw!r}") from None
    if value < 1:
        raise ConfigError(f"{name} must be positive, got {value}")
    return value


@dataclass(frozen=True)
class SolverConfig:
    """
    Optimizer and runner settings.

    Attributes:
        search_budget: Maximum partial-path expansions per augmenting search
        max_paths: Maximum number of paths a solve may accept
        workers: Worker processes for the experiment runner
        log_level: Root log level name
    """

    search_budget: int = DEFAULT_SEARCH_BUDGET
    max_paths: int = DEFAULT_MAX_PATHS
    workers: int = 1
    log_level: str = "WARNING"

    def __post_init__(self) -> None:
        if self.search_budget < 1 or self.max_paths < 1 or self.workers < 1:
            raise ConfigError("search_budget, max_paths and workers must be positive")

    @classmethod
    def from_env(cls) -> SolverConfig:
        """Read MESHFLOW_* environment variables."""
        config = cls(
            search_budget=_env_int("MESHFLOW_SEARCH_BUDGET", DEFAULT_SEARCH_BUDGET),
            max_paths=_env_int("MESHFLOW_MAX_PATHS", DEFAULT_MAX_PATHS),
            workers=_env_int("MESHFLOW_WORKERS", 1),
            log_level=os.getenv("MESHFLOW_LOG_LEVEL", "WARNING").upper(),
        )
        logger.debug(f"Solver config: {config}")
        return config
