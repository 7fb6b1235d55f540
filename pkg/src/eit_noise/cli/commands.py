from __future__ import annotations

import logging
import sys
from pathlib import Path
from typing import Any, Callable, Sequence

from eit_noise.core.config import Settings
from eit_noise.core.exceptions import EitValidationError, NumericalError, ScanError
from eit_noise.models import OutputFormat, RunConfig
from eit_noise.cli.output import write_csv, write_json
from eit_noise.services import EitNoiseService
from eit_noise.services.config_files import available_configs, load_run_config

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_NUMERICAL = 2
EXIT_VALIDATION = 3


def call_service_or_exit_code(
    call: Callable[[], int],
    *,
    logger: logging.Logger,
    command: str,
    context: dict[str, Any] | None = None,
) -> int:
    context_text = ""
    if context:
        context_text = " " + " ".join(f"{key}={value}" for key, value in context.items())
    try:
        return call()
    except EitValidationError as exc:
        logger.error("%s.config_error%s detail=%s", command, context_text, exc)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ScanError as exc:
        logger.error("%s.numerical_error%s failures=%d", command, context_text, len(exc.failures))
        for index, failure in exc.failures:
            print(f"error: grid index {index}: {type(failure).__name__}: {failure}", file=sys.stderr)
        return EXIT_NUMERICAL
    except NumericalError as exc:
        logger.error("%s.numerical_error%s detail=%s", command, context_text, exc)
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


def resolve_scan_config(source: str, overrides: Sequence[str], out: str | None, fmt: str | None, settings: Settings) -> RunConfig:
    config = load_run_config(source, overrides, settings)
    changes: dict[str, Any] = {}
    if out is not None:
        changes["output"] = out
    if fmt is not None:
        changes["format"] = OutputFormat(fmt)
    return config.model_copy(update=changes) if changes else config


def run_scan(service: EitNoiseService, config: RunConfig) -> int:
    result = service.run_scan(config)
    writer = write_json if config.format is OutputFormat.JSON else write_csv
    if config.output:
        path = Path(config.output)
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", encoding="utf-8", newline="") as stream:
            writer(result, config, stream)
    else:
        writer(result, config, sys.stdout)
    return EXIT_OK


def run_validate(service: EitNoiseService, level: str) -> int:
    report = service.run_validation(level)
    print(report.render())
    return EXIT_OK if report.passed else EXIT_VALIDATION


def list_configs(settings: Settings) -> int:
    for name in available_configs(settings):
        print(name)
    return EXIT_OK
