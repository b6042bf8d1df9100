"""
Logging setup.

Policy:
- loguru is the only logger; stdout stays reserved for reports
- One stderr sink, installed once per process by the entry point
- Lines are "TAG | key=value | ..." so they grep well
"""

from __future__ import annotations

import sys

from loguru import logger

LOG_FORMAT = "<green>{time:HH:mm:ss.SSS}</green> | <level>{level: <7}</level> | {message}"

_VALID_LEVELS = ("TRACE", "DEBUG", "INFO", "SUCCESS", "WARNING", "ERROR", "CRITICAL")


def configure_logging(level: str = "WARNING") -> str:
    """Replace loguru's default sink with a single stderr sink at ``level``."""
    level = (level or "WARNING").strip().upper()
    if level not in _VALID_LEVELS:
        level = "WARNING"
    logger.remove()
    logger.add(sys.stderr, level=level, format=LOG_FORMAT, colorize=False)
    return level


def log_fields(tag: str, **fields: object) -> str:
    """Render ``TAG | k=v | k=v`` with stable key order."""
    parts = [tag] + [f"{key}={value}" for key, value in fields.items()]
    return " | ".join(parts)
