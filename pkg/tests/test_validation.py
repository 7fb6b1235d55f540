import pytest

from eit_noise.core.config import Settings
from eit_noise.services import EitNoiseService
from eit_noise.services.eit import validation
from eit_noise.services.eit.validation import (
    FULL_CHECKS,
    QUICK_CHECKS,
    CheckResult,
    ValidationReport,
    run_checks,
)
from eit_noise.services.physics.fluctuations import DriftMatrix


def _service():
    return EitNoiseService(Settings(max_threads=2))


def test_check_names_are_unique_and_quick_is_a_prefix_of_full():
    names = [name for name, _ in FULL_CHECKS]

    assert len(names) == len(set(names))
    assert FULL_CHECKS[: len(QUICK_CHECKS)] == QUICK_CHECKS


def test_crashing_check_counts_as_a_failure():
    def broken(name):
        raise RuntimeError("boom")

    def fine(name):
        return CheckResult(name, True, 0.0, 1.0)

    report = run_checks("quick", (("broken", broken), ("fine", fine)))

    assert not report.passed
    assert report.failed_checks == ["broken"]
    assert "RuntimeError: boom" in report.results[0].detail


def test_report_render_lists_every_check():
    report = ValidationReport(
        level="quick",
        results=[CheckResult("a.one", True, 1e-15, 1e-12), CheckResult("b.two", False, None, None, "crashed")],
    )
    text = report.render()

    assert "a.one" in text and "PASS" in text
    assert "b.two" in text and "FAIL" in text and "crashed" in text
    assert text.splitlines()[-1] == "quick: 1 passed, 1 failed"


def test_unknown_level_is_rejected():
    with pytest.raises(ValueError):
        _service().run_validation("exhaustive")


@pytest.mark.parametrize(
    "name",
    [
        "units.roundtrip",
        "model.generator_trace_hermiticity",
        "model.drift_vs_density_matrix",
        "model.drift_conjugation_symmetry",
        "fluctuations.jacobian_finite_difference",
        "model.zero_coupling_cross_blocks",
        "fluctuations.two_level_einstein",
        "spectra.empty_cavity_unitarity",
        "spectra.balanced_identity",
    ],
)
def test_structural_checks_pass(name):
    check = dict(QUICK_CHECKS)[name]

    result = check(name)

    assert result.passed, result


def test_sign_flipped_drift_fails_the_lyapunov_identity(monkeypatch):
    real_drift_matrix = validation.drift_matrix

    def flipped(params, ss):
        return DriftMatrix(A=-real_drift_matrix(params, ss).A)

    monkeypatch.setattr(validation, "drift_matrix", flipped)
    name = "spectra.lyapunov_integral_identity"
    report = run_checks("quick", ((name, dict(QUICK_CHECKS)[name]),))

    assert report.failed_checks == [name]
    assert name in report.render()


@pytest.mark.slow
def test_quick_suite_passes():
    report = _service().run_validation("quick")

    assert report.passed, report.render()
