import numpy as np
import pytest

from eit_noise.core.exceptions import ConfigError, NoConvergence, ScanError
from eit_noise.services.eit.validation import (
    VALIDATION_SEED,
    dark_state_params,
    fig1_params,
    integration_limit_gap,
    oracle_params,
    random_params,
)
from eit_noise.services.physics import steady_state
from eit_noise.services.physics.model import empty_cavity_amplitudes, ground_state
from eit_noise.services.physics.steady_state import (
    RESIDUAL_TOL,
    continuation_scan,
    from_real,
    is_physical,
    residual_norm,
    solve,
    to_real,
    transmission_profile,
)


def _empty_cavity():
    return oracle_params().model_copy(update={"g1": 0.0, "g2": 0.0})


def test_uncoupled_steady_state_is_closed_form():
    params = _empty_cavity()
    ss = solve(params)
    a1, a2 = empty_cavity_amplitudes(params)

    assert ss.a1 == pytest.approx(a1)
    assert ss.a2 == pytest.approx(a2)
    assert ss.excited_population == pytest.approx(0.0, abs=1e-9)
    assert ss.residual < RESIDUAL_TOL
    assert ss.stable


def test_solve_reaches_a_stable_physical_fixed_point():
    params = oracle_params()
    ss = solve(params)

    assert ss.residual < RESIDUAL_TOL
    assert residual_norm(params, ss.x) < RESIDUAL_TOL
    assert ss.stable
    assert is_physical(params, ss.x)
    assert ss.x[6].imag == 0.0 and ss.x[7].imag == 0.0
    assert ss.x[1] == pytest.approx(np.conj(ss.x[0]), rel=1e-14)


def test_steady_state_is_read_only():
    ss = solve(oracle_params())

    with pytest.raises(ValueError):
        ss.x[0] = 1.0


def test_two_photon_resonance_pumps_atoms_into_the_dark_state():
    params = dark_state_params()
    ss = solve(params)

    assert ss.residual < RESIDUAL_TOL
    assert ss.excited_population / params.N < 1e-6


@pytest.mark.parametrize("detuning", [0.1, 0.37, 1.2])
def test_probe_intensity_is_even_in_two_photon_detuning(detuning):
    above = solve(fig1_params("fig1a", detuning))
    below = solve(fig1_params("fig1a", -detuning))

    assert abs(below.a2) ** 2 == pytest.approx(abs(above.a2) ** 2, rel=1e-8)
    assert below.a2 == pytest.approx(np.conj(above.a2), rel=1e-8)


@pytest.mark.parametrize("draw", range(20))
def test_fixed_point_is_the_long_time_limit(draw):
    params = random_params(np.random.default_rng([VALIDATION_SEED, draw]))

    assert integration_limit_gap(params) < 1e-8


def test_reduced_coordinates_roundtrip():
    params = oracle_params()
    x = ground_state(params, 3 - 1j, 0.5j)

    assert np.max(np.abs(from_real(params, to_real(params, x)) - x)) < 1e-9


def test_continuation_scan_is_deterministic():
    params = oracle_params()
    grid = [-0.4, -0.1, 0.2, 0.5]
    first = continuation_scan(params, grid)
    second = continuation_scan(params, grid)

    assert len(first) == len(grid)
    for a, b in zip(first, second):
        assert np.array_equal(a.x, b.x)
        assert a.residual < RESIDUAL_TOL


def test_single_point_scan_matches_solve():
    params = oracle_params(delta_L2=0.3)
    (state,) = continuation_scan(params, [0.3])

    assert np.array_equal(state.x, solve(params).x)


def test_continuation_scan_rejects_non_monotone_grid():
    with pytest.raises(ConfigError):
        continuation_scan(oracle_params(), [0.0, 0.5, 0.2])


def test_continuation_scan_collects_every_failed_point(monkeypatch):
    def failing_newton(params, x0, max_steps=0):
        raise NoConvergence("forced")

    monkeypatch.setattr(steady_state, "newton", failing_newton)

    with pytest.raises(ScanError) as excinfo:
        continuation_scan(oracle_params(), [-0.2, 0.0, 0.2])

    assert [index for index, _ in excinfo.value.failures] == [0, 1, 2]
    assert all(isinstance(exc, NoConvergence) for _, exc in excinfo.value.failures)


def test_transmission_profile_of_empty_cavity():
    params = _empty_cavity()
    profile = transmission_profile(params, continuation_scan(params, [-0.1, 0.0, 0.1]))

    assert profile.output_pump == pytest.approx([abs(params.alpha1_in) ** 2] * 3)
    assert profile.output_probe == pytest.approx([abs(params.alpha2_in) ** 2] * 3)
    a1, _ = empty_cavity_amplitudes(params)
    assert profile.intracavity_pump[0] == pytest.approx(params.tau * abs(a1) ** 2)
