"""Configuration management for poisson-pairs."""

import json
import logging
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, Optional

from dotenv import load_dotenv

LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


@dataclass
class Config:
    """Run settings shared by every command."""

    seed: Optional[int] = None
    search_budget: Optional[int] = None
    workers: Optional[int] = None

    json_output: bool = False
    verbose: bool = False
    log_level: Optional[str] = None

    def __post_init__(self):
        """Fill unset values from the environment, then from defaults."""
        load_dotenv()
        if self.seed is None:
            self.seed = int(os.getenv("POISSON_PAIRS_SEED", "0"))
        if self.search_budget is None:
            self.search_budget = int(os.getenv("POISSON_PAIRS_SEARCH_BUDGET", "200"))
        if self.workers is None:
            self.workers = int(os.getenv("POISSON_PAIRS_WORKERS", "1"))
        if self.log_level is None:
            self.log_level = os.getenv("POISSON_PAIRS_LOG_LEVEL", "WARNING")
        self.log_level = self.log_level.upper()

    def validate(self) -> None:
        """Validate configuration."""
        if self.search_budget < 0:
            raise ValueError(f"search_budget must be non-negative, got {self.search_budget}")
        if self.workers < 1:
            raise ValueError(f"workers must be positive, got {self.workers}")
        if self.log_level not in LOG_LEVELS:
            raise ValueError(
                f"Unknown log level {self.log_level!r}. "
                f"Choose one of {', '.join(LOG_LEVELS)}."
            )

    @property
    def effective_log_level(self) -> int:
        return logging.DEBUG if self.verbose else getattr(logging, self.log_level)

    def to_dict(self) -> Dict[str, Any]:
        """Convert config to dictionary."""
        return dict(self.__dict__)


def load_config(config_path: Optional[Path] = None) -> Config:
    """
    Load configuration from file or use defaults.

    Args:
        config_path: Optional path to a JSON configuration file

    Returns:
        Validated Config object
    """
    config_data: Dict[str, Any] = {}

    if not config_path:
        default_paths = [
            Path.home() / ".poisson_pairs" / "config.json",
            Path.home() / ".config" / "poisson_pairs" / "config.json",
            Path("poisson_pairs.json"),
        ]

        for path in default_paths:
            if path.exists():
                config_path = path
                break

    if config_path and Path(config_path).exists():
        with open(config_path, "r") as f:
            config_data = json.load(f)

    config = Config(**config_data)
    config.validate()

    return config
