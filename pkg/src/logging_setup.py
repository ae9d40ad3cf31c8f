"""Logging configuration for command-line runs.

Library modules only create loggers; handlers are attached here, once,
by the CLI and the scripts.
"""

import logging
from typing import Optional

from src.config import get_config


def configure_logging(level: Optional[str] = None, fmt: Optional[str] = None) -> None:
    """Attach a stderr handler to the root logger using app.yml defaults."""
    cfg = get_config().logging
    logging.basicConfig(
        level=getattr(logging, (level or cfg.level).upper(), logging.WARNING),
        format=fmt or cfg.format,
        force=True,
    )
