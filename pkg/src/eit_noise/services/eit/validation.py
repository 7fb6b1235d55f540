"""Invariant suites behind ``eit-noise validate``.

Every check returns a :class:`CheckResult`; exceptions raised inside a check
count as a failure of that check only.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from eit_noise.core.config import Settings
from eit_noise.models import PhysicalParams, RunConfig
from eit_noise.services.config_files import load_run_config
from eit_noise.services.physics.constants import (
    A1,
    A2,
    ATOMIC_OPERATORS,
    IDENTITY3,
    N_VARS,
    P_CONJ,
    S1M,
    S1P,
    W1,
)
from eit_noise.services.physics.fluctuations import (
    atomic_diffusion,
    diffusion_matrix,
    drift_matrix,
    lyapunov_covariance,
    symmetrized_diffusion,
)
from eit_noise.services.physics.model import (
    build_generator,
    density_matrix_from_state,
    drift,
    drift_jacobian,
    nondimensionalize,
    redimensionalize,
    state_from_density_matrix,
)
from eit_noise.services.physics.oracle import (
    TrajectoryConfig,
    euler_spectral_matrix,
    integrate_density_matrix,
    integrate_mean_field,
    liouvillian,
    simulate_psd,
    steady_density_matrix,
)
from eit_noise.services.physics.spectra import (
    correlation_record,
    lyapunov_integral,
    quadrature_spectra,
    scan,
    spectral_matrix,
    spectrum_point,
)
from eit_noise.services.physics.steady_state import (
    continuation_scan,
    initial_state,
    solve,
    to_real,
    transmission_profile,
)

logger = logging.getLogger(__name__)

VALIDATION_SEED = 20240521


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    measured: float | None
    tolerance: float | None
    detail: str = ""


@dataclass
class ValidationReport:
    level: str
    results: list[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(result.passed for result in self.results)

    @property
    def failed_checks(self) -> list[str]:
        return [result.name for result in self.results if not result.passed]

    def render(self) -> str:
        width = max([len(result.name) for result in self.results] + [5])
        lines = [f"{'check'.ljust(width)}  status  measured     tolerance    detail"]
        for result in self.results:
            measured = "-" if result.measured is None else f"{result.measured:.3e}"
            tolerance = "-" if result.tolerance is None else f"{result.tolerance:.1e}"
            status = "PASS" if result.passed else "FAIL"
            lines.append(f"{result.name.ljust(width)}  {status}    {measured:<11}  {tolerance:<11}  {result.detail}")
        failed = len(self.failed_checks)
        lines.append(f"{self.level}: {len(self.results) - failed} passed, {failed} failed")
        return "\n".join(lines)


def _result(name: str, measured: float, tolerance: float, detail: str = "", upper: bool = True) -> CheckResult:
    passed = bool(np.isfinite(measured) and (measured < tolerance if upper else measured > tolerance))
    return CheckResult(name=name, passed=passed, measured=float(measured), tolerance=tolerance, detail=detail)


def _relative(actual: np.ndarray, expected: np.ndarray) -> float:
    scale = max(float(np.max(np.abs(expected))), 1e-300)
    return float(np.max(np.abs(np.asarray(actual) - np.asarray(expected)))) / scale


def _frobenius_relative(actual: np.ndarray, expected: np.ndarray) -> float:
    return float(np.linalg.norm(actual - expected) / max(np.linalg.norm(expected), 1e-300))


# Parameter sets -----------------------------------------------------------------


def fig1_params(name: str = "fig1a", delta_L2: float = 0.0) -> PhysicalParams:
    params = nondimensionalize(load_run_config(name).physical_params())
    return params.model_copy(update={"delta_L2": delta_L2})


def dark_state_params(delta_L2: float = 0.0) -> PhysicalParams:
    """fig1a without ground-state dephasing, the setting in which the dark state is exact."""
    return fig1_params("fig1a", delta_L2).model_copy(update={"gamma12": 0.0})


def random_params(rng: np.random.Generator) -> PhysicalParams:
    """Dephased draw with detunings within a few Gamma and half-Rabi frequencies up to 2 Gamma."""
    config = RunConfig(
        g1=float(rng.uniform(1e-4, 5e-4)),
        g2=float(rng.uniform(1e-4, 5e-4)),
        gamma12=float(rng.uniform(0.01, 0.1)),
        gamma=1.0,
        tau=1e-3,
        N=1e3,
        Delta_c1=float(rng.uniform(-0.5, 0.5)),
        Delta_c2=float(rng.uniform(-0.5, 0.5)),
        delta_L1=float(rng.uniform(-2.0, 2.0)),
        delta_L2=float(rng.uniform(-2.0, 2.0)),
        rabi1=float(rng.uniform(0.1, 2.0)),
        rabi2=float(rng.uniform(0.1, 2.0)),
    )
    return config.physical_params()


def oracle_params(delta_L2: float = 0.3) -> PhysicalParams:
    """Moderately saturated, detuned and dephased set with no marginal modes."""
    config = RunConfig(
        g1=5e-4,
        g2=5e-4,
        gamma12=0.02,
        gamma=1.0,
        tau=1e-3,
        N=1e3,
        Delta_c1=0.2,
        Delta_c2=-0.1,
        delta_L1=0.1,
        delta_L2=delta_L2,
        rabi1=0.8,
        rabi2=0.5,
    )
    return config.physical_params()


def empty_cavity_params(rng: np.random.Generator) -> PhysicalParams:
    return PhysicalParams(
        g1=0.0,
        g2=0.0,
        Gamma1=0.5,
        Gamma2=0.5,
        gamma=0.1,
        tau=1e-3,
        N=1e4,
        Delta_c1=float(rng.uniform(-0.3, 0.3)),
        Delta_c2=float(rng.uniform(-0.3, 0.3)),
        delta_L2=0.25,
        alpha1_in=complex(rng.uniform(0.5, 3.0), rng.uniform(-1.0, 1.0)),
        alpha2_in=complex(rng.uniform(0.5, 3.0), rng.uniform(-1.0, 1.0)),
    )


def random_density_matrix(rng: np.random.Generator) -> np.ndarray:
    m = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    rho = m @ m.conj().T
    return rho / np.trace(rho).real


def random_state(params: PhysicalParams, rng: np.random.Generator) -> np.ndarray:
    rho = random_density_matrix(rng)
    amplitudes = (rng.standard_normal(2) + 1j * rng.standard_normal(2)) / np.sqrt(params.tau)
    return state_from_density_matrix(params, rho, amplitudes[0], amplitudes[1])


# Quick checks -------------------------------------------------------------------


def check_unit_roundtrip(name: str) -> CheckResult:
    rng = np.random.default_rng(VALIDATION_SEED)
    worst = 0.0
    for _ in range(20):
        params = PhysicalParams(
            g1=float(rng.uniform(0, 1)),
            g2=float(rng.uniform(0, 1)),
            Gamma1=float(rng.uniform(0.1, 10)),
            Gamma2=float(rng.uniform(0.1, 10)),
            gamma12=float(rng.uniform(0, 1)),
            gamma=float(rng.uniform(0.1, 10)),
            tau=float(rng.uniform(1e-4, 1e-2)),
            Delta_c1=float(rng.normal()),
            delta_L2=float(rng.normal()),
            N=1e4,
            alpha1_in=complex(rng.normal(), rng.normal()),
        )
        back = redimensionalize(nondimensionalize(params), params.Gamma)
        for field_name in PhysicalParams.model_fields:
            original = complex(getattr(params, field_name))
            if original != 0:
                worst = max(worst, abs(complex(getattr(back, field_name)) - original) / abs(original))
    return _result(name, worst, 1e-14)


def check_generator_properties(name: str) -> CheckResult:
    rng = np.random.default_rng(VALIDATION_SEED)
    params = oracle_params()
    worst = 0.0
    for _ in range(20):
        a1, a2 = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        generator = build_generator(params, a1 * 30, a2 * 30)
        hamiltonian = generator.hamiltonian_single
        worst = max(worst, float(np.max(np.abs(hamiltonian - hamiltonian.conj().T))))
        worst = max(worst, float(np.max(np.abs(generator.adjoint(IDENTITY3)))))
        op = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        image = generator.adjoint(op + op.conj().T)
        worst = max(worst, float(np.max(np.abs(image - image.conj().T))))
    return _result(name, worst, 1e-12)


def check_drift_against_density_matrix(name: str) -> CheckResult:
    rng = np.random.default_rng(VALIDATION_SEED)
    params = oracle_params()
    worst = 0.0
    for _ in range(100):
        x = random_state(params, rng)
        rho = density_matrix_from_state(params, x)
        rate = (liouvillian(params, x[A1], x[A2]) @ rho.reshape(9, order="F")).reshape(3, 3, order="F")
        expected = np.array([params.N * np.trace(rate @ op) for op in ATOMIC_OPERATORS])
        worst = max(worst, _relative(drift(params, x)[:8], expected))
    return _result(name, worst, 1e-12)


def check_drift_conjugation(name: str) -> CheckResult:
    rng = np.random.default_rng(VALIDATION_SEED)
    params = oracle_params()
    worst = 0.0
    for _ in range(20):
        x = random_state(params, rng) * (1 + 0.1 * (rng.standard_normal(N_VARS) + 1j * rng.standard_normal(N_VARS)))
        lhs = drift(params, P_CONJ @ x.conj())
        rhs = P_CONJ @ drift(params, x).conj()
        worst = max(worst, _relative(lhs, rhs))
    return _result(name, worst, 1e-12)


def finite_difference_jacobian(params: PhysicalParams, x: np.ndarray, relative_step: float = 1e-6) -> np.ndarray:
    jac = np.empty((N_VARS, N_VARS), dtype=complex)
    for j in range(N_VARS):
        step = relative_step * max(1.0, abs(x[j]))
        shift = np.zeros(N_VARS, dtype=complex)
        shift[j] = step
        jac[:, j] = (drift(params, x + shift) - drift(params, x - shift)) / (2 * step)
    return jac


def check_jacobian(name: str) -> CheckResult:
    rng = np.random.default_rng(VALIDATION_SEED)
    params = oracle_params()
    worst = 0.0
    for _ in range(20):
        x = random_state(params, rng)
        analytic = drift_jacobian(params, x)
        worst = max(worst, _relative(analytic, finite_difference_jacobian(params, x)))
    return _result(name, worst, 1e-6)


def check_decoupled_at_zero_coupling(name: str) -> CheckResult:
    rng = np.random.default_rng(VALIDATION_SEED)
    params = oracle_params().model_copy(update={"g1": 0.0, "g2": 0.0})
    jac = drift_jacobian(params, random_state(params, rng))
    cross = float(max(np.max(np.abs(jac[:8, 8:])), np.max(np.abs(jac[8:, :8]))))
    return CheckResult(name, cross == 0.0, cross, 0.0, "blocks must vanish exactly")


def check_dark_state(name: str) -> CheckResult:
    params = dark_state_params()
    ss = solve(params)
    ratio = ss.excited_population / params.N
    detail = f"residual={ss.residual:.2e} stable={ss.stable}"
    result = _result(name, ratio, 1e-6, detail)
    if ss.residual >= 1e-12 or not ss.stable:
        return CheckResult(result.name, False, result.measured, result.tolerance, detail)
    return result


def two_level_reference(gamma: float, rho: np.ndarray) -> dict[tuple[int, int], complex]:
    """Per-atom force correlations of a decaying two-level atom (levels 0 and 1)."""
    return {
        (S1M, S1M): gamma * (rho[0, 0] + rho[1, 1]),
        (S1P, S1P): 0.0,
        (S1M, W1): 2 * gamma * rho[0, 1],
        (W1, S1M): 2 * gamma * rho[1, 0],
        (W1, W1): 4 * gamma * rho[0, 0],
        (S1P, W1): 0.0,
        (W1, S1P): 0.0,
    }


def check_two_level_diffusion(name: str) -> CheckResult:
    rng = np.random.default_rng(VALIDATION_SEED)
    worst = 0.0
    for _ in range(10):
        params = PhysicalParams(g1=0.3, g2=0.0, Gamma1=1.0, Gamma2=0.0, gamma=0.1, tau=1e-3, N=50.0)
        block = random_density_matrix(rng)[:2, :2]
        rho = np.zeros((3, 3), dtype=complex)
        rho[:2, :2] = block / np.trace(block).real
        a1 = complex(rng.normal(), rng.normal()) * 10
        diffusion = atomic_diffusion(params, rho, a1, 0j)
        for (mu, nu), expected in two_level_reference(params.Gamma1, rho).items():
            worst = max(worst, abs(diffusion[mu, nu] / params.N - expected))
    return _result(name, worst, 1e-12)


def check_diffusion_symmetry(name: str) -> CheckResult:
    params = oracle_params()
    ss = solve(params)
    d = diffusion_matrix(params, ss)
    hermitian = _relative(d.D_corr, d.D_corr.conj().T)
    sym = symmetrized_diffusion(d).D_corr
    conjugate = _relative(P_CONJ @ sym.conj() @ P_CONJ, sym)
    return _result(name, max(hermitian, conjugate), 1e-14)


def check_atomic_lyapunov_moments(name: str) -> CheckResult:
    params = oracle_params()
    ss = solve(params)
    a = drift_matrix(params, ss).A[:8, :8]
    rho = steady_density_matrix(params, ss.a1, ss.a2)
    d = atomic_diffusion(params, rho, ss.a1, ss.a2)
    sigma = lyapunov_covariance(a, d)
    means = [np.trace(rho @ op) for op in ATOMIC_OPERATORS]
    expected = np.array(
        [
            [
                params.N * (np.trace(rho @ op_mu @ op_nu.conj().T) - means[mu] * np.conj(means[nu]))
                for nu, op_nu in enumerate(ATOMIC_OPERATORS)
            ]
            for mu, op_mu in enumerate(ATOMIC_OPERATORS)
        ]
    )
    return _result(name, _frobenius_relative(sigma, expected), 1e-6)


def check_lyapunov_integral(name: str) -> CheckResult:
    params = fig1_params("fig1a", 0.0)
    ss = solve(params)
    a = drift_matrix(params, ss)
    d = diffusion_matrix(params, ss)
    error = _frobenius_relative(lyapunov_integral(a, d), lyapunov_covariance(a, d))
    return _result(name, error, 1e-6)


def check_empty_cavity_unitarity(name: str) -> CheckResult:
    rng = np.random.default_rng(VALIDATION_SEED)
    worst = 0.0
    for _ in range(20):
        params = empty_cavity_params(rng)
        omega = float(rng.uniform(0.01, 3.0))
        ss = solve(params)
        s = spectral_matrix(drift_matrix(params, ss), diffusion_matrix(params, ss), omega)
        record = correlation_record(s, params, ss, omega)
        values = [record.s_pump, record.s_probe, record.s_sum, record.s_diff, record.phase_pump, record.phase_probe]
        worst = max(worst, max(abs(value - 1.0) for value in values))
    return _result(name, worst, 1e-10)


def check_spectral_conjugation(name: str) -> CheckResult:
    params = oracle_params()
    ss = solve(params)
    a = drift_matrix(params, ss)
    d = symmetrized_diffusion(diffusion_matrix(params, ss))
    worst = 0.0
    for omega in (0.05, 0.4, 1.7):
        s = spectral_matrix(a, d, omega)
        worst = max(worst, _relative(P_CONJ @ s.S.conj() @ P_CONJ, s.S_neg))
    return _result(name, worst, 1e-12)


def check_balanced_identity(name: str) -> CheckResult:
    params = oracle_params()
    ss = solve(params)
    record, _, _ = spectrum_point(params, ss, 0.2)
    s = spectral_matrix(drift_matrix(params, ss), diffusion_matrix(params, ss), 0.2)
    _, intensities = quadrature_spectra(s, params, ss)
    weights = intensities / intensities.sum()
    expected = 2 * (weights[0] * record.s_pump + weights[1] * record.s_probe)
    return _result(name, abs(record.s_sum + record.s_diff - expected), 1e-12)


def check_zero_coherence(name: str, points: tuple[float, ...] = (-1.0, -0.2, 0.0, 0.3, 1.5)) -> CheckResult:
    base = fig1_params("fig1b")
    states = continuation_scan(base, list(points))
    worst = 0.0
    for detuning, ss in zip(points, states):
        params = base.model_copy(update={"delta_L2": detuning})
        record, _, _ = spectrum_point(params, ss, load_run_config("fig1b").omega, zero_coherence=True)
        worst = max(worst, abs(record.correlation or 0.0))
    return _result(name, worst, 1e-10)


# Full checks --------------------------------------------------------------------


def check_scalar_ou(name: str, n_trajectories: int = 2000) -> CheckResult:
    cfg = TrajectoryConfig(
        dt=0.01,
        n_steps=2**14,
        n_trajectories=n_trajectories,
        seed=VALIDATION_SEED,
        noise_factorization=np.ones((1, 1)),
    )
    omegas = (0.0, 1.0, 3.0)
    estimate = simulate_psd(np.ones((1, 1)), None, cfg, omegas)[:, 0, 0].real
    expected = np.array([1.0 / (1.0 + w * w) for w in omegas])
    return _result(name, float(np.max(np.abs(estimate / expected - 1))), 0.05)


def check_trajectory_psd(name: str, n_trajectories: int = 2000) -> CheckResult:
    params = oracle_params()
    ss = solve(params)
    a = drift_matrix(params, ss)
    rng = np.random.default_rng(VALIDATION_SEED)
    b = (rng.standard_normal((N_VARS, N_VARS)) + 1j * rng.standard_normal((N_VARS, N_VARS))) / np.sqrt(2 * N_VARS)
    cfg = TrajectoryConfig.for_drift(a, b, n_trajectories=n_trajectories, seed=VALIDATION_SEED)
    slowest = a.min_decay_rate
    omegas = np.linspace(0.0, 10.0 * slowest, 10)
    estimate = simulate_psd(a, b, cfg, omegas)
    d_test = b @ b.conj().T
    sampling = 0.0
    step_bias = 0.0
    limit_gap = 0.0
    for k, omega in enumerate(omegas):
        exact = np.diag(spectral_matrix(a, d_test, float(omega)).S).real
        discrete = np.diag(euler_spectral_matrix(a, d_test, float(omega), cfg.dt)).real
        fine = np.diag(euler_spectral_matrix(a, d_test, float(omega), cfg.dt * 1e-4)).real
        sampling = max(sampling, float(np.max(np.abs(np.diag(estimate[k]).real / discrete - 1))))
        step_bias = max(step_bias, float(np.max(np.abs(discrete / exact - 1))))
        limit_gap = max(limit_gap, float(np.max(np.abs(fine / exact - 1))))
    result = _result(
        name,
        sampling,
        0.05,
        f"dt={cfg.dt:.3g} segment={cfg.segment_length} step_bias={step_bias:.3f} limit_gap={limit_gap:.1e}",
    )
    if limit_gap >= 1e-3:
        return CheckResult(result.name, False, result.measured, result.tolerance, result.detail)
    return result


def integration_limit_gap(params: PhysicalParams, decays: float = 60.0) -> float:
    """Largest reduced-coordinate gap between the Newton fixed point and a long stiff integration."""
    ss = solve(params)
    slowest = drift_matrix(params, ss).min_decay_rate
    limit = integrate_mean_field(params, initial_state(params), decays / slowest)
    return float(np.max(np.abs(to_real(params, limit) - to_real(params, ss.x))))


def check_integration_limit(name: str, n_draws: int = 20) -> CheckResult:
    rng = np.random.default_rng(VALIDATION_SEED)
    worst = 0.0
    for _ in range(n_draws):
        params = random_params(rng)
        worst = max(worst, integration_limit_gap(params))
    return _result(name, worst, 1e-8)


def check_density_matrix_decay(name: str) -> CheckResult:
    params = PhysicalParams(g1=0.0, g2=0.0, Gamma1=0.5, Gamma2=0.5, gamma=0.1, tau=1e-3, N=1.0)
    rho0 = np.zeros((3, 3), dtype=complex)
    rho0[0, 0] = 1.0
    worst = 0.0
    for t in (0.1, 1.0, 5.0):
        rho = integrate_density_matrix(params, 0j, 0j, rho0, t)
        worst = max(worst, abs(rho[0, 0].real - np.exp(-params.Gamma * t)), abs(np.trace(rho) - 1))
    return _result(name, worst, 1e-8)


def check_dark_state_density_matrix(name: str) -> CheckResult:
    params = dark_state_params()
    ss = solve(params)
    rho = steady_density_matrix(params, ss.a1, ss.a2)
    mean_field = density_matrix_from_state(params, ss.x)
    error = max(abs(rho[0, 0].real), float(np.max(np.abs(rho - mean_field))))
    return _result(name, error, 1e-6)


def _nearest_zero(grid: list[float]) -> int:
    return int(np.argmin(np.abs(np.asarray(grid))))


def check_fig1a_shape(name: str) -> CheckResult:
    config = load_run_config("fig1a")
    params = nondimensionalize(config.physical_params())
    grid = config.grid()
    records = scan(params, grid, config.omega)
    pump = np.array([record.fano_pump for record in records])
    probe = np.array([record.fano_probe for record in records])
    centre = _nearest_zero(grid)
    ok = bool(np.all(pump > 1) and np.all(probe > 1) and np.argmax(pump) == centre and np.argmax(probe) == centre)
    return CheckResult(
        name,
        ok,
        float(min(pump.min(), probe.min())),
        1.0,
        f"argmax pump={int(np.argmax(pump))} probe={int(np.argmax(probe))} centre={centre}",
    )


def check_transmission_peak(name: str) -> CheckResult:
    config = load_run_config("fig1a")
    params = nondimensionalize(config.physical_params())
    grid = [-0.5, -0.25, 0.0, 0.25, 0.5]
    profile = transmission_profile(params, continuation_scan(params, grid))
    probe = profile.intracavity_probe
    contrast = float(probe[2] / max(probe[0], probe[4]))
    return _result(name, contrast, 1.1, upper=False)


def check_fig1b_correlation(name: str) -> CheckResult:
    config = load_run_config("fig1b")
    params = nondimensionalize(config.physical_params())
    grid = config.grid()
    records = scan(params, grid, config.omega)
    values = np.array([record.correlation_2C for record in records])
    centre = _nearest_zero(grid)
    peak = values[centre]
    far = np.abs(np.asarray(grid)) >= 1.5
    ok = bool(np.argmax(values) == centre and peak > 1e-3 and np.all(np.abs(values[far]) < 0.1 * peak))
    return CheckResult(name, ok, float(peak), 1e-3, f"argmax={int(np.argmax(values))}")


Check = tuple[str, Callable[[str], CheckResult]]

QUICK_CHECKS: tuple[Check, ...] = (
    ("units.roundtrip", check_unit_roundtrip),
    ("model.generator_trace_hermiticity", check_generator_properties),
    ("model.drift_vs_density_matrix", check_drift_against_density_matrix),
    ("model.drift_conjugation_symmetry", check_drift_conjugation),
    ("fluctuations.jacobian_finite_difference", check_jacobian),
    ("model.zero_coupling_cross_blocks", check_decoupled_at_zero_coupling),
    ("steady_state.dark_state_limit", check_dark_state),
    ("fluctuations.two_level_einstein", check_two_level_diffusion),
    ("fluctuations.diffusion_symmetry", check_diffusion_symmetry),
    ("fluctuations.lyapunov_vs_density_matrix", check_atomic_lyapunov_moments),
    ("spectra.lyapunov_integral_identity", check_lyapunov_integral),
    ("spectra.empty_cavity_unitarity", check_empty_cavity_unitarity),
    ("spectra.conjugation_symmetry", check_spectral_conjugation),
    ("spectra.balanced_identity", check_balanced_identity),
    ("spectra.zero_coherence_decouples", check_zero_coherence),
)

FULL_CHECKS: tuple[Check, ...] = QUICK_CHECKS + (
    ("oracle.scalar_ou_psd", check_scalar_ou),
    ("oracle.trajectory_vs_spectral_matrix", check_trajectory_psd),
    ("steady_state.integration_limit", check_integration_limit),
    ("oracle.excited_state_decay", check_density_matrix_decay),
    ("oracle.dark_state_density_matrix", check_dark_state_density_matrix),
    ("acceptance.eit_transmission_peak", check_transmission_peak),
    ("acceptance.fig1a_fano_peak", check_fig1a_shape),
    ("acceptance.fig1b_correlation_peak", check_fig1b_correlation),
)


def run_checks(level: str, checks: tuple[Check, ...]) -> ValidationReport:
    report = ValidationReport(level=level)
    for name, check in checks:
        started = time.perf_counter()
        try:
            result = check(name)
        except Exception as exc:  # noqa: BLE001 - a crashing check is a failed check
            logger.warning("validate.check_error check=%s error=%s", name, exc)
            result = CheckResult(name, False, None, None, f"{type(exc).__name__}: {exc}")
        logger.info(
            "validate.check name=%s passed=%s seconds=%.2f",
            name,
            result.passed,
            time.perf_counter() - started,
        )
        report.results.append(result)
    return report


class ValidationMixin:
    settings: Settings

    def run_validation(self, level: str = "quick") -> ValidationReport:
        if level not in {"quick", "full"}:
            raise ValueError(f"Unknown validation level: {level}")
        checks = QUICK_CHECKS if level == "quick" else FULL_CHECKS
        logger.info("validate.start level=%s checks=%d", level, len(checks))
        return run_checks(level, checks)
