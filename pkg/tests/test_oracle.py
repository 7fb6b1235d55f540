import numpy as np
import pytest

from eit_noise.core.exceptions import ConfigError
from eit_noise.models import PhysicalParams
from eit_noise.services.eit.validation import oracle_params
from eit_noise.services.physics.fluctuations import drift_matrix
from eit_noise.services.physics.model import density_matrix_from_state
from eit_noise.services.physics.oracle import (
    TrajectoryConfig,
    euler_spectral_matrix,
    integrate_density_matrix,
    integrate_mean_field,
    liouvillian,
    simulate_psd,
    steady_density_matrix,
)
from eit_noise.services.physics.spectra import spectral_matrix
from eit_noise.services.physics.steady_state import initial_state, solve, to_real


def _config(**changes):
    base = dict(
        dt=0.01,
        n_steps=256,
        n_trajectories=20,
        seed=42,
        noise_factorization=np.eye(2),
        segment_length=64,
        chunk_size=5,
    )
    base.update(changes)
    return TrajectoryConfig(**base)


def test_trajectory_config_validates_its_budget():
    with pytest.raises(ConfigError):
        _config(dt=0.0)
    with pytest.raises(ConfigError):
        _config(n_steps=32)
    with pytest.raises(ConfigError):
        _config(seed=-1)
    assert _config().n_segments == 4


def test_zero_noise_gives_zero_psd():
    cfg = _config(noise_factorization=np.zeros((2, 2)))
    estimate = simulate_psd(np.eye(2), None, cfg, [0.0, 1.0])

    assert np.array_equal(estimate, np.zeros((2, 2, 2)))


def test_time_step_must_resolve_the_fastest_mode():
    with pytest.raises(ConfigError):
        simulate_psd(np.eye(2) * 20.0, None, _config(), [0.0])


def test_psd_does_not_depend_on_worker_count():
    a = np.array([[1.0, 0.2], [-0.3, 1.5]], dtype=complex)
    serial = simulate_psd(a, None, _config(max_workers=1), [0.0, 0.5])
    threaded = simulate_psd(a, None, _config(max_workers=3), [0.0, 0.5])

    assert np.array_equal(serial, threaded)


def test_scalar_ornstein_uhlenbeck_psd_is_lorentzian():
    cfg = TrajectoryConfig(
        dt=0.01,
        n_steps=8192,
        n_trajectories=400,
        seed=7,
        noise_factorization=np.ones((1, 1)),
        segment_length=2048,
    )
    omegas = (0.0, 1.0, 2.0)
    estimate = simulate_psd(np.ones((1, 1)), None, cfg, omegas)[:, 0, 0].real

    expected = np.array([1.0 / (1.0 + w * w) for w in omegas])
    assert np.max(np.abs(estimate / expected - 1)) < 0.15


def test_euler_spectrum_of_a_scalar_process_is_closed_form():
    dt, omega = 0.05, 2.0
    expected = 1.0 / abs(1.0 + (np.exp(-1j * omega * dt) - 1.0) / dt) ** 2

    assert euler_spectral_matrix(np.ones((1, 1)), np.ones((1, 1)), omega, dt)[0, 0].real == pytest.approx(expected)
    assert expected != pytest.approx(1.0 / (1.0 + omega**2), rel=1e-3)


def test_euler_spectrum_tends_to_the_resolvent_spectrum():
    a = np.array([[1.0, 0.2], [-0.3, 1.5 + 0.4j]], dtype=complex)
    d = np.array([[2.0, 0.5j], [-0.5j, 1.0]])
    for omega in (0.0, 0.7, 3.0):
        exact = spectral_matrix(a, d, omega).S
        assert np.max(np.abs(euler_spectral_matrix(a, d, omega, 1e-7) - exact)) < 1e-5 * np.max(np.abs(exact))


def test_coarse_step_estimate_follows_the_euler_spectrum():
    cfg = TrajectoryConfig(
        dt=0.08,
        n_steps=4096,
        n_trajectories=400,
        seed=11,
        noise_factorization=np.ones((1, 1)),
        segment_length=1024,
    )
    omegas = (0.0, 2.0, 6.0)
    estimate = simulate_psd(np.ones((1, 1)), None, cfg, omegas)[:, 0, 0].real

    expected = np.array([euler_spectral_matrix(np.ones((1, 1)), np.ones((1, 1)), w, cfg.dt)[0, 0].real for w in omegas])
    assert np.max(np.abs(estimate / expected - 1)) < 0.15


def test_for_drift_picks_a_resolving_step():
    a = np.diag([1.0, 50.0])
    cfg = TrajectoryConfig.for_drift(a, np.eye(2), n_trajectories=10, seed=1)

    assert cfg.dt * 50.0 == pytest.approx(0.02)
    assert cfg.n_steps == 4 * cfg.segment_length


def test_liouvillian_preserves_trace():
    params = oracle_params()
    trace_row = np.eye(3).reshape(9, order="F")

    assert np.max(np.abs(trace_row @ liouvillian(params, 3 + 1j, -2j))) < 1e-12


def test_excited_state_decays_at_the_total_rate():
    params = PhysicalParams(g1=0.0, g2=0.0, Gamma1=0.5, Gamma2=0.5, gamma=0.1, tau=1e-3, N=1.0)
    rho0 = np.zeros((3, 3), dtype=complex)
    rho0[0, 0] = 1.0
    rho = integrate_density_matrix(params, 0j, 0j, rho0, 2.0)

    assert rho[0, 0].real == pytest.approx(np.exp(-2.0), abs=1e-10)
    assert rho[1, 1].real == pytest.approx(rho[2, 2].real)
    assert np.trace(rho).real == pytest.approx(1.0)


def test_mean_field_state_is_the_single_atom_steady_state():
    params = oracle_params()
    ss = solve(params)
    rho = steady_density_matrix(params, ss.a1, ss.a2)

    assert np.max(np.abs(rho - density_matrix_from_state(params, ss.x))) < 1e-8


@pytest.mark.slow
def test_mean_field_integration_settles_on_the_fixed_point():
    params = oracle_params()
    ss = solve(params)
    slowest = drift_matrix(params, ss).min_decay_rate
    limit = integrate_mean_field(params, initial_state(params), 60.0 / slowest)

    assert np.max(np.abs(to_real(params, limit) - to_real(params, ss.x))) < 1e-8
