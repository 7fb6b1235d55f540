"""Independent checks of the frequency-domain pipeline.

The trajectory integrator estimates S(Omega) from Euler-Maruyama samples of the
linear Langevin system; its exact target is the spectrum of the discrete
recursion, which converges to the resolvent spectrum as dt -> 0. The density-matrix integrator evolves a single atom
under a Liouvillian written out here directly, without going through the
operator-basis drift.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from math import sqrt
from typing import Sequence

import numpy as np
from scipy.integrate import solve_ivp
from scipy.linalg import expm, solve_continuous_lyapunov
from scipy.signal import get_window

from eit_noise.core.exceptions import ConfigError, UnstableIntegration
from eit_noise.models import PhysicalParams
from eit_noise.services.physics.fluctuations import DriftMatrix
from eit_noise.services.physics.spectra import check_stable
from eit_noise.services.physics.steady_state import from_real, real_jacobian, real_residual, to_real

logger = logging.getLogger(__name__)

DIVERGENCE_LIMIT = 1e6
MAX_STEP_RATIO = 0.1
_BLOCK = 512


@dataclass(frozen=True)
class TrajectoryConfig:
    """Budget of the stochastic estimate.

    ``noise_factorization`` is B with B B^dagger the (positive semidefinite)
    force covariance. Every trajectory is split into ``n_steps // segment_length``
    Hann-windowed segments.
    """

    dt: float
    n_steps: int
    n_trajectories: int
    seed: int
    noise_factorization: np.ndarray
    segment_length: int = 4096
    chunk_size: int = 250
    max_workers: int = 1

    def __post_init__(self) -> None:
        if self.dt <= 0:
            raise ConfigError("dt", "time step must be positive.")
        if self.segment_length < 8 or self.n_steps < self.segment_length:
            raise ConfigError("n_steps", "need at least one segment of at least 8 steps.")
        if self.n_trajectories < 1 or self.chunk_size < 1:
            raise ConfigError("n_trajectories", "need at least one trajectory per chunk.")
        if not 0 <= self.seed < 2**64:
            raise ConfigError("seed", "seed must be a 64-bit unsigned integer.")

    @property
    def n_segments(self) -> int:
        return self.n_steps // self.segment_length

    @property
    def noise_covariance(self) -> np.ndarray:
        b = np.atleast_2d(np.asarray(self.noise_factorization, dtype=complex))
        return b @ b.conj().T

    @classmethod
    def for_drift(
        cls,
        A: DriftMatrix | np.ndarray,
        noise_factorization: np.ndarray,
        n_trajectories: int,
        seed: int,
        step_ratio: float = 0.02,
        resolved_decays: float = 30.0,
        n_segments: int = 4,
        max_workers: int = 1,
    ) -> "TrajectoryConfig":
        """Pick dt from the fastest mode and the segment length from the slowest one."""
        eigenvalues = np.linalg.eigvals(_drift_array(A))
        dt = step_ratio / float(np.max(np.abs(eigenvalues)))
        slowest = float(np.min(eigenvalues.real))
        needed = int(np.ceil(resolved_decays / (slowest * dt)))
        segment_length = int(min(2**16, max(4096, 2 ** int(np.ceil(np.log2(needed))))))
        return cls(
            dt=dt,
            n_steps=segment_length * n_segments,
            n_trajectories=n_trajectories,
            seed=seed,
            noise_factorization=np.asarray(noise_factorization),
            segment_length=segment_length,
            max_workers=max_workers,
        )


def _drift_array(A: DriftMatrix | np.ndarray) -> np.ndarray:
    return np.atleast_2d(np.asarray(A.A if isinstance(A, DriftMatrix) else A, dtype=complex))


def _psd_sqrt(matrix: np.ndarray) -> np.ndarray:
    hermitian = 0.5 * (matrix + matrix.conj().T)
    values, vectors = np.linalg.eigh(hermitian)
    return vectors * np.sqrt(np.clip(values, 0.0, None))


def _complex_normal(rng: np.random.Generator, shape: tuple[int, ...]) -> np.ndarray:
    """Standard circular complex normals, <z z*> = 1."""
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / sqrt(2.0)


def _run_chunk(
    a: np.ndarray,
    b: np.ndarray,
    start_sqrt: np.ndarray,
    cfg: TrajectoryConfig,
    omegas: np.ndarray,
    n_trajectories: int,
    seed: np.random.SeedSequence,
) -> np.ndarray:
    """Sum over trajectories and segments of X(Omega) X(Omega)^dagger for one chunk."""
    rng = np.random.default_rng(seed)
    n = a.shape[0]
    k = b.shape[1]
    step = np.eye(n) - cfg.dt * a
    noise_scale = sqrt(cfg.dt)
    window = get_window("hann", cfg.segment_length)
    times = np.arange(cfg.segment_length) * cfg.dt
    phases = np.exp(1j * np.outer(times, omegas)) * window[:, None]

    x = _complex_normal(rng, (n_trajectories, n)) @ start_sqrt.T
    total = np.zeros((len(omegas), n, n), dtype=complex)
    buffer = np.empty((_BLOCK, n_trajectories, n), dtype=complex)
    for _ in range(cfg.n_segments):
        transform = np.zeros((len(omegas), n_trajectories, n), dtype=complex)
        for offset in range(0, cfg.segment_length, _BLOCK):
            length = min(_BLOCK, cfg.segment_length - offset)
            kicks = _complex_normal(rng, (length, n_trajectories, k)) @ b.T * noise_scale
            for i in range(length):
                buffer[i] = x
                x = x @ step.T + kicks[i]
            if not np.all(np.isfinite(x)) or np.max(np.abs(x)) > DIVERGENCE_LIMIT:
                raise UnstableIntegration("trajectory norm exceeded the divergence limit.")
            transform += np.einsum("so,stn->otn", phases[offset : offset + length], buffer[:length])
        total += np.einsum("otn,otm->onm", transform, transform.conj())
    return total


def simulate_psd(
    A: DriftMatrix | np.ndarray,
    B: np.ndarray | None,
    cfg: TrajectoryConfig,
    omega_grid: Sequence[float],
) -> np.ndarray:
    """Averaged Hann-windowed periodogram estimates of S(Omega), shape (len(omega_grid), n, n).

    Trajectories start from the stationary distribution and are split into
    chunks with index-derived seeds; chunk sums are reduced in chunk order, so
    the result does not depend on ``cfg.max_workers``.
    """
    a = _drift_array(A)
    b = np.atleast_2d(np.asarray(cfg.noise_factorization if B is None else B, dtype=complex))
    check_stable(a)
    fastest = float(np.max(np.abs(np.linalg.eigvals(a))))
    if cfg.dt * fastest >= MAX_STEP_RATIO:
        raise ConfigError("dt", f"dt * max|eig(A)| = {cfg.dt * fastest:.3g} must stay below {MAX_STEP_RATIO}.")
    omegas = np.asarray(omega_grid, dtype=float)
    n = a.shape[0]
    covariance = solve_continuous_lyapunov(a, b @ b.conj().T)
    start_sqrt = _psd_sqrt(covariance)

    sizes = [cfg.chunk_size] * (cfg.n_trajectories // cfg.chunk_size)
    if cfg.n_trajectories % cfg.chunk_size:
        sizes.append(cfg.n_trajectories % cfg.chunk_size)
    seeds = np.random.SeedSequence(cfg.seed).spawn(len(sizes))
    logger.info(
        "oracle.simulate_psd n=%d trajectories=%d steps=%d dt=%.3g chunks=%d",
        n,
        cfg.n_trajectories,
        cfg.n_steps,
        cfg.dt,
        len(sizes),
    )

    def task(index: int) -> np.ndarray:
        return _run_chunk(a, b, start_sqrt, cfg, omegas, sizes[index], seeds[index])

    if cfg.max_workers > 1 and len(sizes) > 1:
        with ThreadPoolExecutor(max_workers=cfg.max_workers) as pool:
            partials = list(pool.map(task, range(len(sizes))))
    else:
        partials = [task(index) for index in range(len(sizes))]

    total = np.zeros((len(omegas), n, n), dtype=complex)
    for partial in partials:
        total += partial
    window = get_window("hann", cfg.segment_length)
    n_periodograms = cfg.n_trajectories * cfg.n_segments
    return total * cfg.dt / (float(np.sum(window**2)) * n_periodograms)


def euler_spectral_matrix(A: DriftMatrix | np.ndarray, D: np.ndarray, omega: float, dt: float) -> np.ndarray:
    """Exact S(Omega) of the recursion x <- (1 - dt A) x + sqrt(dt) B xi with B B^dagger = D.

    This is what :func:`simulate_psd` estimates. The resolvent (A - i Omega)^-1
    becomes (A + (exp(-i Omega dt) - 1) / dt)^-1, which tends to it as dt -> 0.
    """
    a = _drift_array(A)
    d = np.atleast_2d(np.asarray(D, dtype=complex))
    n = a.shape[0]
    shift = (np.exp(-1j * omega * dt) - 1.0) / dt
    r = np.linalg.solve(a + shift * np.eye(n), np.eye(n, dtype=complex))
    return r @ d @ r.conj().T


def _ket(level: int) -> np.ndarray:
    return np.eye(3, dtype=complex)[:, level]


def liouvillian(params: PhysicalParams, a1: complex, a2: complex) -> np.ndarray:
    """9x9 Liouvillian on column-stacked single-atom density matrices."""
    e, g1, g2 = _ket(0), _ket(1), _ket(2)
    lower1 = np.outer(g1, e)
    lower2 = np.outer(g2, e)
    hamiltonian = (
        params.delta_L1 * np.outer(g1, g1)
        + params.delta_L2 * np.outer(g2, g2)
        + params.g1 * (a1 * lower1.conj().T + np.conj(a1) * lower1)
        + params.g2 * (a2 * lower2.conj().T + np.conj(a2) * lower2)
    )
    collapse = [sqrt(params.Gamma1) * lower1, sqrt(params.Gamma2) * lower2]
    if params.gamma12 > 0:
        collapse.append(sqrt(params.gamma12 / 2.0) * np.diag([0.0, 1.0, -1.0]).astype(complex))

    identity = np.eye(3)
    # vec(X Y Z) = (Z^T kron X) vec(Y) for column stacking.
    generator = -1j * (np.kron(identity, hamiltonian) - np.kron(hamiltonian.T, identity))
    for jump in collapse:
        number = jump.conj().T @ jump
        generator += np.kron(jump.conj(), jump) - 0.5 * np.kron(identity, number) - 0.5 * np.kron(number.T, identity)
    return generator


def integrate_density_matrix(
    params: PhysicalParams, a1: complex, a2: complex, rho0: np.ndarray, t_end: float
) -> np.ndarray:
    """Single-atom Lindblad evolution at frozen field amplitudes."""
    vector = np.asarray(rho0, dtype=complex).reshape(9, order="F")
    evolved = expm(liouvillian(params, a1, a2) * t_end) @ vector
    return evolved.reshape(3, 3, order="F")


def steady_density_matrix(params: PhysicalParams, a1: complex, a2: complex) -> np.ndarray:
    """Trace-one stationary state of the Liouvillian (minimum-norm choice if degenerate)."""
    system = np.vstack([liouvillian(params, a1, a2), np.eye(3).reshape(1, 9, order="F")])
    rhs = np.zeros(10, dtype=complex)
    rhs[-1] = 1.0
    solution = np.linalg.lstsq(system, rhs, rcond=None)[0]
    rho = solution.reshape(3, 3, order="F")
    return 0.5 * (rho + rho.conj().T)


def integrate_mean_field(params: PhysicalParams, x0: np.ndarray, t_end: float) -> np.ndarray:
    """Stiff integration of the mean-field drift in the reduced real coordinates."""
    unit = params.Gamma if params.Gamma > 0 else 1.0

    def rhs(_: float, u: np.ndarray) -> np.ndarray:
        return unit * real_residual(params, u)

    def jac(_: float, u: np.ndarray) -> np.ndarray:
        return unit * real_jacobian(params, u)

    result = solve_ivp(rhs, (0.0, t_end), to_real(params, x0), method="Radau", jac=jac, rtol=1e-11, atol=1e-13)
    if not result.success:
        raise UnstableIntegration(f"mean-field integration failed: {result.message}")
    return from_real(params, result.y[:, -1])
