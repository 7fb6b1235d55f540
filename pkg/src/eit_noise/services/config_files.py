"""Flat ``key = value`` run configurations, bundled presets and CLI overrides.

A results file is also a config file: when any line starts with ``#@`` only
those lines are read, so ``--config results.csv`` re-runs the scan.
"""

from __future__ import annotations

import logging
from importlib import resources
from pathlib import Path
from typing import Iterable

from pydantic import ValidationError

from eit_noise.core.config import Settings, get_settings
from eit_noise.core.exceptions import ConfigError
from eit_noise.models import RunConfig

logger = logging.getLogger(__name__)

METADATA_PREFIX = "#@"
CONFIG_SUFFIX = ".conf"
BUNDLED_CONFIGS = ("empty_cavity", "fig1a", "fig1b")


def parse_config_text(text: str) -> dict[str, str]:
    lines = text.splitlines()
    if any(line.startswith(METADATA_PREFIX) for line in lines):
        lines = [line[len(METADATA_PREFIX) :] for line in lines if line.startswith(METADATA_PREFIX)]
    values: dict[str, str] = {}
    for number, raw_line in enumerate(lines, start=1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {number}", f"expected 'key = value', got {raw_line.strip()!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if not key:
            raise ConfigError(f"line {number}", "missing key")
        values[key] = value
    return values


def apply_overrides(values: dict[str, str], overrides: Iterable[str]) -> dict[str, str]:
    merged = dict(values)
    for item in overrides:
        if "=" not in item:
            raise ConfigError(item, "override must look like key=value")
        key, value = (part.strip() for part in item.split("=", 1))
        merged[key] = value
    return merged


def build_run_config(values: dict[str, str]) -> RunConfig:
    cleaned = {key: (None if value.lower() in {"", "none"} else value) for key, value in values.items()}
    try:
        return RunConfig.model_validate(cleaned)
    except ValidationError as exc:
        error = exc.errors()[0]
        field = ".".join(str(part) for part in error.get("loc", ())) or "config"
        raise ConfigError(field, error.get("msg", "invalid value")) from exc


def _bundled_text(name: str) -> str | None:
    if name not in BUNDLED_CONFIGS:
        return None
    return (resources.files("eit_noise") / "configs" / f"{name}{CONFIG_SUFFIX}").read_text(encoding="utf-8")


def read_config_source(source: str, settings: Settings | None = None) -> str:
    """Text of a config given as a path, a bundled name or a name under EIT_NOISE_CONFIG_DIR."""
    settings = settings or get_settings()
    path = Path(source)
    if path.is_file():
        return path.read_text(encoding="utf-8")
    if settings.config_dir is not None:
        candidate = settings.config_dir / f"{source}{CONFIG_SUFFIX}"
        if candidate.is_file():
            return candidate.read_text(encoding="utf-8")
    bundled = _bundled_text(source)
    if bundled is not None:
        return bundled
    raise ConfigError("config", f"no config file or bundled config named {source!r}")


def load_run_config(source: str, overrides: Iterable[str] = (), settings: Settings | None = None) -> RunConfig:
    values = apply_overrides(parse_config_text(read_config_source(source, settings)), overrides)
    logger.debug("config.loaded source=%s keys=%d", source, len(values))
    return build_run_config(values)


def available_configs(settings: Settings | None = None) -> list[str]:
    settings = settings or get_settings()
    names = set(BUNDLED_CONFIGS)
    if settings.config_dir is not None and settings.config_dir.is_dir():
        names.update(path.stem for path in settings.config_dir.glob(f"*{CONFIG_SUFFIX}"))
    return sorted(names)


def config_items(config: RunConfig) -> list[tuple[str, str]]:
    """Every set config value as text that parses back to the same value."""
    items = []
    for key, value in config.model_dump(exclude_none=True).items():
        if hasattr(value, "value"):
            value = value.value
        items.append((key, repr(value) if isinstance(value, (float, complex)) else str(value)))
    return items
