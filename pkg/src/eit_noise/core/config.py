from __future__ import annotations

import os
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

ENV_FILE = ".env"


@dataclass(frozen=True)
class Settings:
    """Process-level knobs; everything that shapes a result lives in RunConfig instead."""

    max_threads: int
    config_dir: Path | None = None
    log_level: str = "INFO"


def _unquote(value: str) -> str:
    if value[:1] in {"'", '"'} and value[-1:] == value[:1] and len(value) > 1:
        return value[1:-1]
    return value


def read_env_file(path: Path) -> dict[str, str]:
    """``KEY=value`` pairs of a dotenv file; comments and malformed lines are skipped."""
    entries: dict[str, str] = {}
    if not path.is_file():
        return entries
    for raw_line in path.read_text(encoding="utf-8").splitlines():
        line = raw_line.strip()
        if line.startswith("#") or "=" not in line:
            continue
        key, _, value = line.partition("=")
        if key.strip():
            entries[key.strip()] = _unquote(value.strip())
    return entries


def _thread_cap(raw: str | None) -> int:
    default = os.cpu_count() or 1
    try:
        return max(1, int(raw)) if raw and raw.strip() else default
    except ValueError:
        return default


def _config_dir(raw: str | None) -> Path | None:
    return Path(raw.strip()).expanduser() if raw and raw.strip() else None


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    for key, value in read_env_file(Path.cwd() / ENV_FILE).items():
        os.environ.setdefault(key, value)
    return Settings(
        max_threads=_thread_cap(os.getenv("EIT_NOISE_THREADS")),
        config_dir=_config_dir(os.getenv("EIT_NOISE_CONFIG_DIR")),
        log_level=os.getenv("LOG_LEVEL", "INFO").strip().upper(),
    )


def clear_settings_cache() -> None:
    get_settings.cache_clear()
