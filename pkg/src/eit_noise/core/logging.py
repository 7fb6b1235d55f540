from __future__ import annotations

import logging
import sys

_CONFIGURED = False
_LEVELS = {"CRITICAL", "ERROR", "WARNING", "INFO", "DEBUG"}
LOG_FORMAT = "%(asctime)s %(levelname)s [%(name)s] %(message)s"


def resolve_log_level(name: str | None) -> int:
    raw = (name or "INFO").strip().upper()
    if raw in _LEVELS:
        return getattr(logging, raw)
    return logging.INFO


def configure_logging(level_name: str | None = None) -> None:
    """Route log records to stderr; stdout is reserved for scan results and reports."""
    global _CONFIGURED
    if _CONFIGURED:
        return

    level = resolve_log_level(level_name)
    logging.basicConfig(level=level, format=LOG_FORMAT, stream=sys.stderr)
    logging.getLogger("eit_noise").setLevel(level)
    # scipy reports near-singular Lyapunov solves and quadrature limits as warnings.
    logging.captureWarnings(True)
    logging.getLogger("py.warnings").setLevel(max(level, logging.WARNING))
    _CONFIGURED = True
