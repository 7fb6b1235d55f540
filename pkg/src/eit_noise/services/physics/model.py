"""Mean-field model of N three-level Lambda atoms coupled to two cavity modes.

Atomic rows of the drift are generated from the adjoint Lindblad generator of a
single atom: for every operator O_mu of the basis, G^dagger(O_mu) is expanded
back onto the basis plus the identity. The expansion is linear in the field
amplitudes through the Hamiltonian, which makes the drift bilinear in
(atomic variables, field amplitudes) and gives the Jacobian in closed form.

Decay rates are the ones that follow from the generator: an optical coherence
relaxes at (Gamma1 + Gamma2)/2 (+ gamma12/4). Field equations written with a
polarization decay of Gamma1/4 correspond to a different operator
normalization; no rescaling is applied here.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import lru_cache
from math import sqrt

import numpy as np

from eit_noise.core.exceptions import ZeroTotalDecay
from eit_noise.models import PhysicalParams
from eit_noise.services.physics.constants import (
    A1,
    A1D,
    A2,
    A2D,
    ATOMIC_OPERATORS,
    IDENTITY3,
    N_VARS,
    S1M,
    S1P,
    S12,
    S12P,
    S2M,
    S2P,
    W1,
    W2,
    sigma,
)

logger = logging.getLogger(__name__)

_RATE_FIELDS = ("Gamma1", "Gamma2", "gamma12", "gamma", "Delta_c1", "Delta_c2", "delta_L1", "delta_L2")
_SQRT_RATE_FIELDS = ("g1", "g2", "alpha1_in", "alpha2_in")

# Columns: the eight atomic operators and the identity, flattened row-major.
_BASIS = np.column_stack([op.reshape(9) for op in ATOMIC_OPERATORS] + [IDENTITY3.reshape(9)])
_BASIS_INV = np.linalg.inv(_BASIS)


def nondimensionalize(params: PhysicalParams) -> PhysicalParams:
    """Express ``params`` in units where Gamma1 + Gamma2 = 1."""
    total = params.Gamma1 + params.Gamma2
    if total <= 0:
        raise ZeroTotalDecay("Gamma1 + Gamma2 must be positive to define the frequency unit.")
    root = sqrt(total)
    changes: dict[str, float | complex] = {name: getattr(params, name) / total for name in _RATE_FIELDS}
    changes.update({name: getattr(params, name) / root for name in _SQRT_RATE_FIELDS})
    changes["tau"] = params.tau * total
    return params.model_copy(update=changes)


def redimensionalize(params: PhysicalParams, Gamma: float) -> PhysicalParams:
    """Inverse of :func:`nondimensionalize` for a total decay rate ``Gamma``."""
    if Gamma <= 0:
        raise ZeroTotalDecay("Gamma must be positive.")
    root = sqrt(Gamma)
    changes: dict[str, float | complex] = {name: getattr(params, name) * Gamma for name in _RATE_FIELDS}
    changes.update({name: getattr(params, name) * root for name in _SQRT_RATE_FIELDS})
    changes["tau"] = params.tau / Gamma
    return params.model_copy(update=changes)


@dataclass(frozen=True)
class LindbladGenerator:
    hamiltonian_single: np.ndarray
    jump_ops: tuple[np.ndarray, ...]

    def adjoint(self, op: np.ndarray) -> np.ndarray:
        """Heisenberg-picture generator G^dagger(op)."""
        h = self.hamiltonian_single
        result = 1j * (h @ op - op @ h)
        for jump in self.jump_ops:
            jump_dag = jump.conj().T
            result = result + jump_dag @ op @ jump - 0.5 * (jump_dag @ jump @ op + op @ jump_dag @ jump)
        return result


def _interaction_terms(params: PhysicalParams) -> tuple[np.ndarray, ...]:
    """Hamiltonian pieces multiplying a1, a1^dagger, a2, a2^dagger."""
    return (
        params.g1 * sigma(0, 1),
        params.g1 * sigma(1, 0),
        params.g2 * sigma(0, 2),
        params.g2 * sigma(2, 0),
    )


def jump_operators(params: PhysicalParams) -> tuple[np.ndarray, ...]:
    jumps = [sqrt(params.Gamma1) * sigma(1, 0), sqrt(params.Gamma2) * sigma(2, 0)]
    if params.gamma12 > 0:
        jumps.append(sqrt(params.gamma12 / 2.0) * (sigma(1, 1) - sigma(2, 2)))
    return tuple(jumps)


def build_generator(
    params: PhysicalParams,
    a1: complex,
    a2: complex,
    a1d: complex | None = None,
    a2d: complex | None = None,
) -> LindbladGenerator:
    """Single-atom generator in the rotating frame at field amplitudes (a1, a2).

    ``a1d``/``a2d`` default to the conjugates; passing them separately is only
    needed when the drift is evaluated off the physical (conjugate-paired) manifold.
    """
    a1d = np.conj(a1) if a1d is None else a1d
    a2d = np.conj(a2) if a2d is None else a2d
    hamiltonian = params.delta_L1 * sigma(1, 1) + params.delta_L2 * sigma(2, 2)
    for amplitude, term in zip((a1, a1d, a2, a2d), _interaction_terms(params)):
        hamiltonian = hamiltonian + amplitude * term
    return LindbladGenerator(hamiltonian_single=hamiltonian, jump_ops=jump_operators(params))


def expand_on_basis(op: np.ndarray) -> np.ndarray:
    """Coefficients of ``op`` on (O_0 .. O_7, identity)."""
    return _BASIS_INV @ op.reshape(9)


@dataclass(frozen=True)
class DriftCoefficients:
    """Atomic drift f_at = (m0 + sum_k a_k m_field[k]) x_at + N (c0 + sum_k a_k c_field[k])."""

    m0: np.ndarray
    c0: np.ndarray
    m_field: np.ndarray
    c_field: np.ndarray
    field_matrix: np.ndarray
    field_drive: np.ndarray


@lru_cache(maxsize=128)
def drift_coefficients(params: PhysicalParams) -> DriftCoefficients:
    base = build_generator(params, 0.0, 0.0, 0.0, 0.0)
    m0 = np.zeros((8, 8), dtype=complex)
    c0 = np.zeros(8, dtype=complex)
    for mu, op in enumerate(ATOMIC_OPERATORS):
        coefficients = expand_on_basis(base.adjoint(op))
        m0[mu] = coefficients[:8]
        c0[mu] = coefficients[8]

    m_field = np.zeros((4, 8, 8), dtype=complex)
    c_field = np.zeros((4, 8), dtype=complex)
    for k, term in enumerate(_interaction_terms(params)):
        for mu, op in enumerate(ATOMIC_OPERATORS):
            coefficients = expand_on_basis(1j * (term @ op - op @ term))
            m_field[k, mu] = coefficients[:8]
            c_field[k, mu] = coefficients[8]

    field_matrix = np.zeros((4, N_VARS), dtype=complex)
    half_width = params.gamma / 2.0
    field_matrix[0, A1] = -(half_width + 1j * params.Delta_c1)
    field_matrix[0, S1M] = -1j * params.g1 / params.tau
    field_matrix[1, A1D] = -(half_width - 1j * params.Delta_c1)
    field_matrix[1, S1P] = 1j * params.g1 / params.tau
    field_matrix[2, A2] = -(half_width + 1j * params.Delta_c2)
    field_matrix[2, S2M] = -1j * params.g2 / params.tau
    field_matrix[3, A2D] = -(half_width - 1j * params.Delta_c2)
    field_matrix[3, S2P] = 1j * params.g2 / params.tau

    coupling = sqrt(params.gamma / params.tau)
    alpha1 = complex(params.alpha1_in)
    alpha2 = complex(params.alpha2_in)
    field_drive = coupling * np.array([alpha1, alpha1.conjugate(), alpha2, alpha2.conjugate()])

    for array in (m0, c0, m_field, c_field, field_matrix, field_drive):
        array.setflags(write=False)
    return DriftCoefficients(m0, c0, m_field, c_field, field_matrix, field_drive)


def drift(params: PhysicalParams, x: np.ndarray) -> np.ndarray:
    """Mean-field equations of motion dx/dt = f(x)."""
    x = np.asarray(x, dtype=complex)
    coeffs = drift_coefficients(params)
    fields = x[A1 : A2D + 1]
    m = coeffs.m0 + np.tensordot(fields, coeffs.m_field, axes=1)
    c = coeffs.c0 + fields @ coeffs.c_field
    out = np.empty(N_VARS, dtype=complex)
    out[:8] = m @ x[:8] + params.N * c
    out[8:] = coeffs.field_matrix @ x + coeffs.field_drive
    return out


def drift_jacobian(params: PhysicalParams, x: np.ndarray) -> np.ndarray:
    """Analytic Jacobian df/dx, treating every component (and its partner) as independent."""
    x = np.asarray(x, dtype=complex)
    coeffs = drift_coefficients(params)
    fields = x[A1 : A2D + 1]
    jac = np.zeros((N_VARS, N_VARS), dtype=complex)
    jac[:8, :8] = coeffs.m0 + np.tensordot(fields, coeffs.m_field, axes=1)
    jac[:8, 8:] = (np.einsum("kmn,n->mk", coeffs.m_field, x[:8]) + params.N * coeffs.c_field.T)
    jac[8:, :] = coeffs.field_matrix
    return jac


def density_matrix_from_state(params: PhysicalParams, x: np.ndarray) -> np.ndarray:
    """Single-atom density matrix implied by the collective atomic variables."""
    per_atom = np.asarray(x, dtype=complex)[:8] / params.N
    w1 = per_atom[W1].real
    w2 = per_atom[W2].real
    excited = (1.0 + w1 + w2) / 3.0
    rho = np.zeros((3, 3), dtype=complex)
    rho[0, 0] = excited
    rho[1, 1] = excited - w1
    rho[2, 2] = excited - w2
    # Tr(rho |i><j|) = rho[j, i]
    rho[0, 1] = per_atom[S1M]
    rho[1, 0] = per_atom[S1P]
    rho[0, 2] = per_atom[S2M]
    rho[2, 0] = per_atom[S2P]
    rho[1, 2] = per_atom[S12]
    rho[2, 1] = per_atom[S12P]
    return rho


def state_from_density_matrix(params: PhysicalParams, rho: np.ndarray, a1: complex, a2: complex) -> np.ndarray:
    x = np.empty(N_VARS, dtype=complex)
    for mu, op in enumerate(ATOMIC_OPERATORS):
        x[mu] = params.N * np.trace(rho @ op)
    x[W1] = x[W1].real
    x[W2] = x[W2].real
    x[A1], x[A1D], x[A2], x[A2D] = a1, np.conj(a1), a2, np.conj(a2)
    return x


def ground_state(params: PhysicalParams, a1: complex = 0j, a2: complex = 0j, level: int = 1) -> np.ndarray:
    """All atoms in ground level ``level`` (1 or 2) with the given field amplitudes."""
    rho = sigma(level, level)
    return state_from_density_matrix(params, rho, a1, a2)


def empty_cavity_amplitudes(params: PhysicalParams) -> tuple[complex, complex]:
    coupling = sqrt(params.gamma / params.tau)
    half_width = params.gamma / 2.0
    a1 = coupling * complex(params.alpha1_in) / (half_width + 1j * params.Delta_c1)
    a2 = coupling * complex(params.alpha2_in) / (half_width + 1j * params.Delta_c2)
    return a1, a2


def drive_from_rabi(params: PhysicalParams, rabi: float, field: int) -> complex:
    """Input amplitude giving an empty-cavity half-Rabi frequency g*|a| = ``rabi``."""
    g, detuning = (params.g1, params.Delta_c1) if field == 1 else (params.g2, params.Delta_c2)
    if g == 0:
        return 0j
    coupling = sqrt(params.gamma / params.tau)
    return rabi * (params.gamma / 2.0 + 1j * detuning) / (g * coupling)


def output_amplitudes(params: PhysicalParams, x: np.ndarray) -> tuple[complex, complex]:
    """Mean output fields a_out = sqrt(gamma*tau) a - alpha_in."""
    coupling = sqrt(params.gamma * params.tau)
    return (
        coupling * complex(x[A1]) - complex(params.alpha1_in),
        coupling * complex(x[A2]) - complex(params.alpha2_in),
    )


def susceptibility(params: PhysicalParams, x: np.ndarray, field: int) -> complex:
    """Atomic loading kappa of a cavity field: its row reads -(gamma/2 + i Delta_c + kappa) a + drive.

    Re(kappa) is the absorption rate added by the atoms, Im(kappa) the frequency pull.
    """
    g, pol, amp = (params.g1, S1M, A1) if field == 1 else (params.g2, S2M, A2)
    if abs(x[amp]) == 0:
        return 0j
    return complex(1j * (g / params.tau) * x[pol] / x[amp])
