#!/usr/bin/env python3
"""
Logging Setup
=============

All modules log through ``get_logger``; the first call wires the root
``lctlab`` logger to a rich handler on stderr so that stdout stays free for
reports.
"""

import logging
from typing import Optional

from rich.console import Console
from rich.logging import RichHandler

_ROOT = "lctlab"
_configured = False

console = Console(stderr=True)


def configure_logging(level: str = "INFO", show_path: bool = False) -> logging.Logger:
    """Attach the rich handler to the package logger (idempotent)"""
    global _configured
    root = logging.getLogger(_ROOT)
    if not _configured:
        handler = RichHandler(console=console, show_path=show_path, rich_tracebacks=True, markup=False)
        handler.setFormatter(logging.Formatter("%(message)s", datefmt="[%X]"))
        root.addHandler(handler)
        root.propagate = False
        _configured = True
    root.setLevel(getattr(logging, str(level).upper(), logging.INFO))
    return root


def get_logger(name: Optional[str] = None) -> logging.Logger:
    """Return a child of the package logger, configuring it on first use"""
    if not _configured:
        configure_logging()
    if not name:
        return logging.getLogger(_ROOT)
    return logging.getLogger(f"{_ROOT}.{name}")
