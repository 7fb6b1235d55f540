from __future__ import annotations

import argparse
import logging
from typing import Sequence

from eit_noise import __version__
from eit_noise.cli.commands import (
    EXIT_CONFIG,
    EXIT_OK,
    call_service_or_exit_code,
    list_configs,
    resolve_scan_config,
    run_scan,
    run_validate,
)
from eit_noise.core.config import get_settings
from eit_noise.core.logging import configure_logging
from eit_noise.services import EitNoiseService

logger = logging.getLogger(__name__)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="eit-noise",
        description="Pump/probe quantum noise of three-level atoms in a cavity under EIT.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    scan = commands.add_parser("scan", help="Run a probe-detuning scan and write spectra.")
    scan.add_argument("--config", required=True, help="Config file, results file, or bundled config name.")
    scan.add_argument("--out", default=None, help="Output path (default: config 'output' or stdout).")
    scan.add_argument("--format", choices=("csv", "json"), default=None)
    scan.add_argument(
        "--set",
        dest="overrides",
        action="append",
        default=[],
        metavar="KEY=VALUE",
        help="Override a config value; may be repeated.",
    )

    validate = commands.add_parser("validate", help="Run the invariant suites.")
    validate.add_argument("--level", choices=("quick", "full"), default="quick")

    commands.add_parser("configs", help="List bundled and user config names.")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    settings = get_settings()
    configure_logging(settings.log_level)
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_CONFIG
    service = EitNoiseService(settings)

    if args.command == "scan":
        return call_service_or_exit_code(
            lambda: run_scan(
                service,
                resolve_scan_config(args.config, args.overrides, args.out, args.format, settings),
            ),
            logger=logger,
            command="scan",
            context={"config": args.config},
        )
    if args.command == "validate":
        return call_service_or_exit_code(
            lambda: run_validate(service, args.level),
            logger=logger,
            command="validate",
            context={"level": args.level},
        )
    return list_configs(settings)


if __name__ == "__main__":
    raise SystemExit(main())
