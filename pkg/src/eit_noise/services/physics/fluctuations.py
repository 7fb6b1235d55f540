"""Linearized fluctuations around a steady state: drift and diffusion matrices.

Ordering: ``D_corr[mu, nu] = <F_mu F_nu^dagger>``, the ordering for which
``A Sigma + Sigma A^dagger = D_corr`` holds with ``Sigma = <dx dx^dagger>``.
D_corr is Hermitian. Only its symmetrized part is invariant under
conjugation through the pair permutation.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from math import sqrt

import numpy as np
from scipy.linalg import block_diag, solve_continuous_lyapunov

from eit_noise.core.exceptions import NonPhysicalState
from eit_noise.models import PhysicalParams
from eit_noise.services.physics.constants import (
    A1,
    A1D,
    A2,
    A2D,
    ATOMIC_OPERATORS,
    N_VARS,
    P_CONJ,
    S1M,
    S1P,
    S12,
    S12P,
    S2M,
    S2P,
    W1,
    W2,
)
from eit_noise.services.physics.model import build_generator, density_matrix_from_state, drift_jacobian
from eit_noise.services.physics.steady_state import POSITIVITY_TOL, SteadyState

logger = logging.getLogger(__name__)

PUMP_SECTOR = (S1M, S1P, W1, A1, A1D)
PROBE_SECTOR = (S2M, S2P, W2, A2, A2D)
COHERENCE_PAIR = (S12, S12P)


@dataclass(frozen=True)
class DriftMatrix:
    """Linear response matrix, d(dx)/dt = -A dx + F."""

    A: np.ndarray

    @property
    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvals(self.A)

    @property
    def min_decay_rate(self) -> float:
        return float(np.min(self.eigenvalues.real))


@dataclass(frozen=True)
class DiffusionMatrix:
    """Langevin-force correlations split into atomic and input-field sources.

    ``input_noise`` is the flux-normalized 4x4 matrix <dA_in dA_in^dagger> in the
    (a1, a1d, a2, a2d) order; it enters the intracavity rows through
    ``input_coupling`` = sqrt(gamma/tau).
    """

    atomic: np.ndarray
    input_noise: np.ndarray
    input_coupling: float
    rho: np.ndarray | None = field(default=None, compare=False)

    @property
    def D_corr(self) -> np.ndarray:
        return block_diag(self.atomic, self.input_coupling**2 * self.input_noise)

    @property
    def source_gain(self) -> np.ndarray:
        """Diagonal map G from the noise sources (atomic forces, input fields) to F."""
        return np.diag(np.concatenate([np.ones(8), np.full(4, self.input_coupling)]))

    @property
    def source_noise(self) -> np.ndarray:
        return block_diag(self.atomic, self.input_noise)


def drift_matrix(params: PhysicalParams, ss: SteadyState) -> DriftMatrix:
    a = -drift_jacobian(params, ss.x)
    a.setflags(write=False)
    return DriftMatrix(A=a)


def _adjoint_op(op: np.ndarray) -> np.ndarray:
    return op.conj().T


def atomic_diffusion(params: PhysicalParams, rho: np.ndarray, a1: complex, a2: complex) -> np.ndarray:
    """Einstein-relation diffusion of the collective atomic forces.

    D[mu, nu] = N Tr[rho (G(O_mu O_nu^+) - O_mu G(O_nu^+) - G(O_mu) O_nu^+)]
    with G the adjoint generator at the given field amplitudes.
    """
    generator = build_generator(params, a1, a2)
    images = [generator.adjoint(op) for op in ATOMIC_OPERATORS]
    image_daggers = [_adjoint_op(image) for image in images]
    out = np.empty((8, 8), dtype=complex)
    for mu, op_mu in enumerate(ATOMIC_OPERATORS):
        for nu, op_nu in enumerate(ATOMIC_OPERATORS):
            op_nu_dag = _adjoint_op(op_nu)
            combination = (
                generator.adjoint(op_mu @ op_nu_dag) - op_mu @ image_daggers[nu] - images[mu] @ op_nu_dag
            )
            out[mu, nu] = params.N * np.trace(rho @ combination)
    return out


def input_noise(params: PhysicalParams) -> np.ndarray:
    """Flux-normalized input correlations: vacuum plus classical amplitude excess noise."""
    out = np.zeros((4, 4), dtype=complex)
    for k, (fano, alpha) in enumerate(((params.fano1_in, params.alpha1_in), (params.fano2_in, params.alpha2_in))):
        i, j = 2 * k, 2 * k + 1
        out[i, i] = 1.0
        excess = (fano - 1.0) / 4.0
        if excess > 0:
            phase = np.exp(2j * np.angle(complex(alpha)))
            out[i, i] += excess
            out[j, j] += excess
            out[i, j] = excess * phase
            out[j, i] = excess * np.conj(phase)
    return out


def diffusion_matrix(params: PhysicalParams, ss: SteadyState) -> DiffusionMatrix:
    rho = density_matrix_from_state(params, ss.x)
    rho = 0.5 * (rho + rho.conj().T)
    lowest = float(np.min(np.linalg.eigvalsh(rho)))
    if lowest < -POSITIVITY_TOL:
        raise NonPhysicalState(f"reconstructed density matrix has eigenvalue {lowest:.3e}.")
    atomic = atomic_diffusion(params, rho, ss.a1, ss.a2)
    return DiffusionMatrix(
        atomic=atomic,
        input_noise=input_noise(params),
        input_coupling=sqrt(params.gamma / params.tau),
        rho=rho,
    )


def symmetrized_diffusion(D: DiffusionMatrix) -> DiffusionMatrix:
    """1/2 (D + P conj(D) P), applied to each source block."""
    p_at = P_CONJ[:8, :8]
    p_in = P_CONJ[8:, 8:]
    return DiffusionMatrix(
        atomic=0.5 * (D.atomic + p_at @ D.atomic.conj() @ p_at),
        input_noise=0.5 * (D.input_noise + p_in @ D.input_noise.conj() @ p_in),
        input_coupling=D.input_coupling,
        rho=D.rho,
    )


def lyapunov_covariance(A: DriftMatrix | np.ndarray, D: DiffusionMatrix | np.ndarray) -> np.ndarray:
    """Stationary covariance Sigma solving A Sigma + Sigma A^dagger = D."""
    a = A.A if isinstance(A, DriftMatrix) else np.asarray(A)
    d = D.D_corr if isinstance(D, DiffusionMatrix) else np.asarray(D)
    return solve_continuous_lyapunov(a, d)


def _cut(matrix: np.ndarray, rows: tuple[int, ...], cols: tuple[int, ...]) -> None:
    matrix[np.ix_(rows, cols)] = 0.0
    matrix[np.ix_(cols, rows)] = 0.0


def force_zero_coherence(A: DriftMatrix, D: DiffusionMatrix) -> tuple[DriftMatrix, DiffusionMatrix]:
    """Diagnostic: remove every channel through which the two transitions share noise.

    The ground-state coherence pair becomes an isolated unit-rate mode with no
    force, and all drift and diffusion entries between the pump sector and the
    probe sector are zeroed.
    """
    a = np.array(A.A, dtype=complex)
    coherence = COHERENCE_PAIR
    others = tuple(i for i in range(N_VARS) if i not in coherence)
    _cut(a, coherence, others)
    a[S12, S12P] = a[S12P, S12] = 0.0
    a[S12, S12] = a[S12P, S12P] = 1.0
    _cut(a, PUMP_SECTOR, PROBE_SECTOR)

    atomic = np.array(D.atomic, dtype=complex)
    atomic[list(coherence), :] = 0.0
    atomic[:, list(coherence)] = 0.0
    atomic_pump = tuple(i for i in PUMP_SECTOR if i < 8)
    atomic_probe = tuple(i for i in PROBE_SECTOR if i < 8)
    _cut(atomic, atomic_pump, atomic_probe)

    noise = np.array(D.input_noise, dtype=complex)
    _cut(noise, (0, 1), (2, 3))
    logger.debug("fluctuations.force_zero_coherence applied")
    return DriftMatrix(A=a), DiffusionMatrix(atomic=atomic, input_noise=noise, input_coupling=D.input_coupling, rho=D.rho)
