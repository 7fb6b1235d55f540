import numpy as np
import pytest
from scipy.integrate import solve_ivp

from eit_noise.core.exceptions import ZeroTotalDecay
from eit_noise.models import PhysicalParams
from eit_noise.services.eit.validation import fig1_params, finite_difference_jacobian, oracle_params, random_state
from eit_noise.services.physics.constants import (
    A1,
    A1D,
    A2,
    ATOMIC_OPERATORS,
    IDENTITY3,
    N_VARS,
    P_CONJ,
    S1M,
    S2M,
    W1,
    W2,
)
from eit_noise.services.physics.model import (
    build_generator,
    density_matrix_from_state,
    drift,
    drift_jacobian,
    drive_from_rabi,
    empty_cavity_amplitudes,
    ground_state,
    nondimensionalize,
    output_amplitudes,
    redimensionalize,
    state_from_density_matrix,
    susceptibility,
)
from eit_noise.services.physics.oracle import liouvillian
from eit_noise.services.physics.steady_state import initial_state


def _params(**changes):
    base = dict(
        g1=0.2,
        g2=0.3,
        Gamma1=1.5,
        Gamma2=0.5,
        gamma12=0.04,
        gamma=0.4,
        tau=1e-3,
        Delta_c1=0.1,
        Delta_c2=-0.3,
        delta_L1=0.6,
        delta_L2=1.0,
        N=1e3,
        alpha1_in=complex(2.0, -1.0),
        alpha2_in=complex(0.5, 0.25),
    )
    base.update(changes)
    return PhysicalParams(**base)


def test_nondimensionalize_uses_total_decay_as_frequency_unit():
    scaled = nondimensionalize(_params())

    assert scaled.Gamma == pytest.approx(1.0)
    assert scaled.Gamma1 == pytest.approx(0.75)
    assert scaled.delta_L2 == pytest.approx(0.5)
    assert scaled.tau == pytest.approx(2e-3)
    assert scaled.g1 == pytest.approx(0.2 / np.sqrt(2.0))
    assert scaled.alpha1_in == pytest.approx(complex(2.0, -1.0) / np.sqrt(2.0))
    assert scaled.N == 1e3


def test_redimensionalize_inverts_nondimensionalize():
    params = _params()
    back = redimensionalize(nondimensionalize(params), params.Gamma)

    for name in PhysicalParams.model_fields:
        original = complex(getattr(params, name))
        if original != 0:
            assert abs(complex(getattr(back, name)) - original) / abs(original) < 1e-14


def test_nondimensionalize_rejects_zero_total_decay():
    with pytest.raises(ZeroTotalDecay):
        nondimensionalize(_params(Gamma1=0.0, Gamma2=0.0))
    with pytest.raises(ZeroTotalDecay):
        redimensionalize(_params(), 0.0)


def test_generator_preserves_trace_and_hermiticity():
    rng = np.random.default_rng(3)
    generator = build_generator(_params(), complex(30.0, -5.0), complex(-4.0, 12.0))
    hamiltonian = generator.hamiltonian_single

    assert np.max(np.abs(hamiltonian - hamiltonian.conj().T)) < 1e-15
    assert np.max(np.abs(generator.adjoint(IDENTITY3))) < 1e-12
    op = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    image = generator.adjoint(op + op.conj().T)
    assert np.max(np.abs(image - image.conj().T)) < 1e-12


def test_generator_has_no_dephasing_jump_without_ground_decoherence():
    assert len(build_generator(_params(gamma12=0.0), 0j, 0j).jump_ops) == 2
    assert len(build_generator(_params(), 0j, 0j).jump_ops) == 3


def test_drift_vanishes_without_atoms_or_drive():
    params = _params(alpha1_in=0j, alpha2_in=0j).model_copy(update={"N": 0.0})

    assert np.array_equal(drift(params, np.zeros(N_VARS, dtype=complex)), np.zeros(N_VARS))


def test_uncoupled_cavity_rows_are_driven_damped_oscillators():
    params = _params(g1=0.0, g2=0.0)
    a1, a2 = empty_cavity_amplitudes(params)
    x = ground_state(params, a1, a2)
    rates = drift(params, x)
    jac = drift_jacobian(params, x)

    scale = np.sqrt(params.gamma / params.tau) * abs(params.alpha1_in)
    assert np.max(np.abs(rates[8:])) < 1e-12 * scale
    assert jac[A1, A1] == -(params.gamma / 2 + 1j * params.Delta_c1)
    assert jac[A1D, A1D] == -(params.gamma / 2 - 1j * params.Delta_c1)
    assert np.max(np.abs(jac[:8, 8:])) == 0.0


def test_field_rows_couple_to_the_polarizations():
    params = _params()
    jac = drift_jacobian(params, random_state(params, np.random.default_rng(0)))

    assert jac[A1, S1M] == pytest.approx(-1j * params.g1 / params.tau)
    assert jac[A2, S2M] == pytest.approx(-1j * params.g2 / params.tau)


def test_drift_matches_single_atom_liouvillian():
    rng = np.random.default_rng(11)
    params = oracle_params()
    for _ in range(25):
        x = random_state(params, rng)
        rho = density_matrix_from_state(params, x)
        rate = (liouvillian(params, x[A1], x[A2]) @ rho.reshape(9, order="F")).reshape(3, 3, order="F")
        expected = np.array([params.N * np.trace(rate @ op) for op in ATOMIC_OPERATORS])
        error = np.max(np.abs(drift(params, x)[:8] - expected)) / np.max(np.abs(expected))
        assert error < 1e-12


def test_drift_commutes_with_conjugation():
    rng = np.random.default_rng(5)
    params = oracle_params()
    x = random_state(params, rng)
    x = x * (1 + 0.1 * (rng.standard_normal(N_VARS) + 1j * rng.standard_normal(N_VARS)))

    lhs = drift(params, P_CONJ @ x.conj())
    rhs = P_CONJ @ drift(params, x).conj()
    assert np.max(np.abs(lhs - rhs)) < 1e-12 * np.max(np.abs(rhs))


def test_analytic_jacobian_matches_finite_differences():
    rng = np.random.default_rng(7)
    params = oracle_params()
    for _ in range(5):
        x = random_state(params, rng)
        analytic = drift_jacobian(params, x)
        numeric = finite_difference_jacobian(params, x)
        assert np.max(np.abs(analytic - numeric)) < 1e-6 * np.max(np.abs(analytic))


@pytest.mark.parametrize(
    "params",
    [oracle_params(), fig1_params("fig1a", 0.3)],
    ids=["detuned", "fig1a"],
)
def test_inversions_stay_real_along_the_mean_field_flow(params):
    times = np.linspace(0.0, 10.0 / params.Gamma, 21)
    result = solve_ivp(
        lambda _, x: drift(params, x),
        (times[0], times[-1]),
        initial_state(params),
        t_eval=times,
        rtol=1e-10,
        atol=1e-8,
    )

    assert result.success
    assert np.max(np.abs(result.y[[W1, W2]].imag)) < 1e-9


def test_density_matrix_roundtrip():
    rng = np.random.default_rng(2)
    params = _params()
    m = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    rho = m @ m.conj().T
    rho /= np.trace(rho).real

    x = state_from_density_matrix(params, rho, 1 + 2j, -3j)
    assert np.max(np.abs(density_matrix_from_state(params, x) - rho)) < 1e-12
    assert x[A1D] == np.conj(x[A1])


def test_drive_from_rabi_sets_empty_cavity_rabi_frequency():
    params = _params()
    drives = {
        "alpha1_in": drive_from_rabi(params, 0.5, field=1),
        "alpha2_in": drive_from_rabi(params, 0.25, field=2),
    }
    a1, a2 = empty_cavity_amplitudes(params.updated(**drives))

    assert params.g1 * abs(a1) == pytest.approx(0.5)
    assert params.g2 * abs(a2) == pytest.approx(0.25)
    assert drive_from_rabi(_params(g1=0.0), 0.5, field=1) == 0j


def test_empty_cavity_reflects_the_full_input_flux():
    params = _params(g1=0.0, g2=0.0)
    a1, a2 = empty_cavity_amplitudes(params)
    out1, out2 = output_amplitudes(params, ground_state(params, a1, a2))

    assert abs(out1) == pytest.approx(abs(params.alpha1_in))
    assert abs(out2) == pytest.approx(abs(params.alpha2_in))


def test_susceptibility_is_zero_for_uncoupled_field():
    params = _params(g1=0.0, g2=0.0)
    x = ground_state(params, *empty_cavity_amplitudes(params))

    assert susceptibility(params, x, field=1) == 0j
    assert susceptibility(params, np.zeros(N_VARS, dtype=complex), field=2) == 0j
