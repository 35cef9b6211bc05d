from __future__ import annotations

import logging
import sys

LOG_FORMAT = "[%(asctime)s] %(message)s"
DATE_FORMAT = "%Y-%m-%d %H:%M:%S"

_handler: logging.StreamHandler | None = None


def configure_logging(level: int = logging.INFO) -> None:
    """Timestamped progress lines on the current stdout; safe to call more than once."""
    global _handler
    root = logging.getLogger("src")
    if _handler is not None:
        root.removeHandler(_handler)
    _handler = logging.StreamHandler(sys.stdout)
    _handler.setFormatter(logging.Formatter(LOG_FORMAT, datefmt=DATE_FORMAT))
    root.addHandler(_handler)
    root.setLevel(level)


def get_logger(name: str) -> logging.Logger:
    return logging.getLogger(name)
