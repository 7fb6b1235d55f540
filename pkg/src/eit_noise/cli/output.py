"""Result writers. Output is byte-identical for identical configs: no timestamps."""

from __future__ import annotations

import csv
import json
from typing import TextIO

from eit_noise import __version__
from eit_noise.models import COLUMN_UNITS, CSV_COLUMNS, RunConfig, ScanResult
from eit_noise.services.config_files import METADATA_PREFIX, config_items

CONVENTION = (
    "x(Omega) = int x(t) exp(i Omega t) dt; S = (A - i Omega)^-1 D (A^+ + i Omega)^-1; "
    "D[mu,nu] = <F_mu F_nu^+>; A_out = sqrt(gamma tau) A - A_in; spectra symmetrized in Omega; "
    "noise normalized to shot noise; frequencies in units of Gamma = Gamma1 + Gamma2"
)


def format_value(value: float | None) -> str:
    if value is None:
        return ""
    return format(value, ".17g")


def metadata_lines(config: RunConfig) -> list[str]:
    lines = [f"# eit-noise {__version__}", f"# convention: {CONVENTION}"]
    lines.extend(f"{METADATA_PREFIX} {key} = {value}" for key, value in config_items(config))
    lines.append("# units: " + ", ".join(f"{column}[{COLUMN_UNITS[column]}]" for column in CSV_COLUMNS))
    return lines


def write_csv(result: ScanResult, config: RunConfig, stream: TextIO) -> None:
    for line in metadata_lines(config):
        stream.write(line + "\n")
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for record in result.records:
        writer.writerow([format_value(value) for value in record.csv_row()])


def write_json(result: ScanResult, config: RunConfig, stream: TextIO) -> None:
    payload = {
        "metadata": {
            "version": __version__,
            "convention": CONVENTION,
            "units": COLUMN_UNITS,
            "config": dict(config_items(config)),
        },
        "records": [record.model_dump() for record in result.records],
        "intracavity_pump": result.intracavity_pump,
        "intracavity_probe": result.intracavity_probe,
    }
    if result.diagnostics is not None:
        payload["diagnostics"] = [item.model_dump() for item in result.diagnostics]
    json.dump(payload, stream, indent=2)
    stream.write("\n")
