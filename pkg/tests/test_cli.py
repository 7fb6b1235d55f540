import csv
import json
import logging

import pytest

from eit_noise.cli.commands import (
    EXIT_CONFIG,
    EXIT_NUMERICAL,
    EXIT_OK,
    EXIT_VALIDATION,
    call_service_or_exit_code,
    list_configs,
    run_validate,
)
from eit_noise.cli.main import main
from eit_noise.core.config import Settings
from eit_noise.core.exceptions import ConfigError, NoConvergence, ScanError, UnstableDrift
from eit_noise.models import CSV_COLUMNS
from eit_noise.services.eit.validation import CheckResult, ValidationReport

logger = logging.getLogger("tests.cli")


class FakeValidationService:
    def __init__(self, results):
        self.results = results
        self.levels = []

    def run_validation(self, level="quick"):
        self.levels.append(level)
        return ValidationReport(level=level, results=self.results)


def _data_rows(path):
    lines = [line for line in path.read_text(encoding="utf-8").splitlines() if not line.startswith("#")]
    return list(csv.DictReader(lines))


def test_scan_of_empty_cavity_is_shot_noise_everywhere(tmp_path):
    out = tmp_path / "empty.csv"

    assert main(["scan", "--config", "empty_cavity", "--out", str(out)]) == EXIT_OK

    text = out.read_text(encoding="utf-8")
    assert "#@ g1 = 0.0" in text
    assert "# convention:" in text
    rows = _data_rows(out)
    assert list(rows[0].keys()) == list(CSV_COLUMNS)
    assert len(rows) == 41
    for row in rows:
        for column in ("s_pump", "s_probe", "fano_pump", "fano_probe", "s_sum", "s_diff"):
            assert float(row[column]) == pytest.approx(1.0, abs=1e-9)
        assert float(row["correlation_2C"]) == pytest.approx(0.0, abs=1e-9)


def test_results_file_reruns_to_identical_data(tmp_path):
    first = tmp_path / "first.csv"
    second = tmp_path / "second.csv"
    assert main(["scan", "--config", "empty_cavity", "--set", "n_points=5", "--out", str(first)]) == EXIT_OK

    assert main(["scan", "--config", str(first), "--out", str(second)]) == EXIT_OK

    assert _data_rows(first) == _data_rows(second)
    assert len(_data_rows(second)) == 5


def test_scan_writes_json_with_diagnostics(tmp_path):
    out = tmp_path / "empty.json"
    code = main(
        [
            "scan",
            "--config",
            "empty_cavity",
            "--format",
            "json",
            "--set",
            "n_points=3",
            "--set",
            "include_diagnostics=true",
            "--out",
            str(out),
        ]
    )

    assert code == EXIT_OK
    payload = json.loads(out.read_text(encoding="utf-8"))
    assert len(payload["records"]) == 3
    assert payload["metadata"]["config"]["format"] == "json"
    assert len(payload["intracavity_pump"]) == 3
    assert len(payload["diagnostics"]) == 3
    assert len(payload["diagnostics"][0]["drift"]) == 12


def test_scan_with_unknown_key_is_a_config_error(tmp_path, capsys):
    code = main(["scan", "--config", "empty_cavity", "--set", "bogus=1", "--out", str(tmp_path / "x.csv")])

    assert code == EXIT_CONFIG
    assert "error:" in capsys.readouterr().err


def test_scan_with_missing_config_is_a_config_error(capsys):
    assert main(["scan", "--config", "does-not-exist"]) == EXIT_CONFIG
    assert "does-not-exist" in capsys.readouterr().err


def test_usage_errors_exit_with_config_code():
    assert main(["scan"]) == EXIT_CONFIG
    assert main(["validate", "--level", "exhaustive"]) == EXIT_CONFIG


def test_list_configs_includes_user_configs(tmp_path, capsys):
    (tmp_path / "mine.conf").write_text("g1 = 0.1\ng2 = 0.1\n", encoding="utf-8")

    assert list_configs(Settings(max_threads=1, config_dir=tmp_path)) == EXIT_OK
    assert capsys.readouterr().out.split() == ["empty_cavity", "fig1a", "fig1b", "mine"]


def test_run_validate_reports_failures(capsys):
    service = FakeValidationService(
        [
            CheckResult("units.roundtrip", True, 1e-16, 1e-14),
            CheckResult("spectra.lyapunov_integral_identity", False, 0.5, 1e-6),
        ]
    )

    assert run_validate(service, "quick") == EXIT_VALIDATION
    output = capsys.readouterr().out
    assert "FAIL" in output
    assert "spectra.lyapunov_integral_identity" in output
    assert service.levels == ["quick"]


def test_run_validate_passes_when_every_check_passes():
    service = FakeValidationService([CheckResult("units.roundtrip", True, 1e-16, 1e-14)])

    assert run_validate(service, "full") == EXIT_OK


def test_call_service_maps_errors_to_exit_codes(capsys):
    def raise_config():
        raise ConfigError("gamma", "must be positive")

    def raise_numerical():
        raise UnstableDrift("growing mode")

    def raise_scan():
        raise ScanError([(4, NoConvergence("stalled"))])

    assert call_service_or_exit_code(raise_config, logger=logger, command="scan") == EXIT_CONFIG
    assert call_service_or_exit_code(raise_numerical, logger=logger, command="scan") == EXIT_NUMERICAL
    assert call_service_or_exit_code(raise_scan, logger=logger, command="scan", context={"config": "x"}) == EXIT_NUMERICAL
    err = capsys.readouterr().err
    assert "gamma: must be positive" in err
    assert "grid index 4: NoConvergence: stalled" in err
