"""Fixed points of the twelve mean-field equations."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from math import sqrt
from typing import Sequence

import numpy as np

from eit_noise.core.exceptions import ConfigError, NoConvergence, ScanError, UnstableOnly
from eit_noise.models import PhysicalParams
from eit_noise.services.physics.constants import A1, A1D, A2, A2D, N_VARS, S1M, S1P, S12, S12P, S2M, S2P, W1, W2
from eit_noise.services.physics.model import (
    density_matrix_from_state,
    drift,
    drift_jacobian,
    empty_cavity_amplitudes,
    output_amplitudes,
    state_from_density_matrix,
)

logger = logging.getLogger(__name__)

RESIDUAL_TOL = 1e-12
MAX_NEWTON_STEPS = 200
RAMP_STEPS = 10
STABILITY_TOL = 1e-10
POSITIVITY_TOL = 1e-9

# Reduced real coordinates: (Re, Im) of s1m, s2m, s12 per atom, w1/N, w2/N,
# (Re, Im) of sqrt(tau) a1 and sqrt(tau) a2.
_ROWS = (S1M, S1M, S2M, S2M, S12, S12, W1, W2, A1, A1, A2, A2)
_IMAG = np.array([False, True, False, True, False, True, False, False, False, True, False, True])
_PAIRS = ((S1M, S1P), (S2M, S2P), (S12, S12P))


@dataclass(frozen=True)
class SteadyState:
    x: np.ndarray
    residual: float
    stable: bool
    n_atoms: float

    @property
    def a1(self) -> complex:
        return complex(self.x[A1])

    @property
    def a2(self) -> complex:
        return complex(self.x[A2])

    @property
    def s12(self) -> complex:
        return complex(self.x[S12])

    @property
    def excited_population(self) -> float:
        """Number of atoms in the excited state."""
        return float((self.n_atoms + self.x[W1].real + self.x[W2].real) / 3.0)


def _rate_unit(params: PhysicalParams) -> float:
    return params.Gamma if params.Gamma > 0 else 1.0


def _real_to_state_matrix(params: PhysicalParams) -> np.ndarray:
    """Complex matrix T with x = T u for the reduced real coordinates u."""
    n = params.N
    inv_root_tau = 1.0 / sqrt(params.tau)
    t = np.zeros((N_VARS, N_VARS), dtype=complex)
    for k, (index, partner) in enumerate(_PAIRS):
        t[index, 2 * k] = n
        t[partner, 2 * k] = n
        t[index, 2 * k + 1] = 1j * n
        t[partner, 2 * k + 1] = -1j * n
    t[W1, 6] = n
    t[W2, 7] = n
    for k, (index, partner) in enumerate(((A1, A1D), (A2, A2D))):
        t[index, 8 + 2 * k] = inv_root_tau
        t[partner, 8 + 2 * k] = inv_root_tau
        t[index, 9 + 2 * k] = 1j * inv_root_tau
        t[partner, 9 + 2 * k] = -1j * inv_root_tau
    return t


def _row_scale(params: PhysicalParams) -> np.ndarray:
    unit = _rate_unit(params)
    scale = np.full(N_VARS, 1.0 / (params.N * unit))
    scale[8:] = sqrt(params.tau) / unit
    return scale


def to_real(params: PhysicalParams, x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=complex)
    root_tau = sqrt(params.tau)
    per_atom = x[:8] / params.N
    return np.array(
        [
            per_atom[S1M].real,
            per_atom[S1M].imag,
            per_atom[S2M].real,
            per_atom[S2M].imag,
            per_atom[S12].real,
            per_atom[S12].imag,
            per_atom[W1].real,
            per_atom[W2].real,
            root_tau * x[A1].real,
            root_tau * x[A1].imag,
            root_tau * x[A2].real,
            root_tau * x[A2].imag,
        ]
    )


def from_real(params: PhysicalParams, u: np.ndarray) -> np.ndarray:
    """State vector with exact conjugate pairing from reduced coordinates."""
    return _real_to_state_matrix(params) @ np.asarray(u, dtype=float)


def real_residual(params: PhysicalParams, u: np.ndarray) -> np.ndarray:
    """Scaled drift in reduced coordinates: per-atom rates and sqrt(tau)-scaled field rates, in units of Gamma."""
    values = drift(params, from_real(params, u))[list(_ROWS)] * _row_scale(params)[list(_ROWS)]
    return np.where(_IMAG, values.imag, values.real)


def real_jacobian(params: PhysicalParams, u: np.ndarray) -> np.ndarray:
    x = from_real(params, u)
    jac = (drift_jacobian(params, x) @ _real_to_state_matrix(params))[list(_ROWS)]
    jac = jac * _row_scale(params)[list(_ROWS), None]
    return np.where(_IMAG[:, None], jac.imag, jac.real)


def residual_norm(params: PhysicalParams, x: np.ndarray) -> float:
    return float(np.max(np.abs(real_residual(params, to_real(params, x)))))


def is_stable(params: PhysicalParams, x: np.ndarray) -> bool:
    """No growing fluctuation mode around ``x`` (marginal modes allowed)."""
    eigenvalues = np.linalg.eigvals(-drift_jacobian(params, x))
    scale = max(1.0, float(np.max(np.abs(eigenvalues))))
    return bool(np.min(eigenvalues.real) > -STABILITY_TOL * scale)


def is_physical(params: PhysicalParams, x: np.ndarray) -> bool:
    rho = density_matrix_from_state(params, x)
    rho = 0.5 * (rho + rho.conj().T)
    return bool(np.min(np.linalg.eigvalsh(rho)) > -POSITIVITY_TOL)


def newton(params: PhysicalParams, x0: np.ndarray, max_steps: int = MAX_NEWTON_STEPS) -> tuple[np.ndarray, float]:
    """Damped Newton iteration on the reduced real coordinates.

    Returns the state and its scaled residual; raises NoConvergence when the
    budget runs out or the line search stalls.
    """
    u = to_real(params, x0)
    r = real_residual(params, u)
    norm = float(np.max(np.abs(r)))
    for step in range(max_steps):
        if norm < RESIDUAL_TOL:
            logger.debug("newton.converged steps=%d residual=%.3e", step, norm)
            return from_real(params, u), norm
        jac = real_jacobian(params, u)
        try:
            delta = np.linalg.solve(jac, -r)
        except np.linalg.LinAlgError:
            delta = np.linalg.lstsq(jac, -r, rcond=None)[0]
        lam = 1.0
        while lam > 1e-12:
            trial = u + lam * delta
            r_trial = real_residual(params, trial)
            norm_trial = float(np.max(np.abs(r_trial)))
            if np.isfinite(norm_trial) and norm_trial < norm:
                u, r, norm = trial, r_trial, norm_trial
                break
            lam *= 0.5
        else:
            raise NoConvergence(f"line search stalled after {step} Newton steps (residual {norm:.3e}).")
    if norm < RESIDUAL_TOL:
        return from_real(params, u), norm
    raise NoConvergence(f"Newton budget of {max_steps} steps exhausted (residual {norm:.3e}).")


def initial_state(params: PhysicalParams, level: int = 1) -> np.ndarray:
    """Empty-cavity fields with atoms in ground level ``level`` (1, 2, or 0 for an equal ground mixture)."""
    a1, a2 = empty_cavity_amplitudes(params)
    if level == 0:
        rho = np.diag([0.0, 0.5, 0.5]).astype(complex)
    else:
        rho = np.zeros((3, 3), dtype=complex)
        rho[level, level] = 1.0
    return state_from_density_matrix(params, rho, a1, a2)


def _finish(params: PhysicalParams, x: np.ndarray, residual: float) -> SteadyState:
    x = x.copy()
    x[W1] = x[W1].real
    x[W2] = x[W2].real
    x.setflags(write=False)
    return SteadyState(x=x, residual=residual, stable=is_stable(params, x), n_atoms=params.N)


def _ramp(params: PhysicalParams) -> np.ndarray:
    x = initial_state(params, level=1)
    for k in range(1, RAMP_STEPS + 1):
        fraction = k / RAMP_STEPS
        stage = params.model_copy(update={"g1": params.g1 * fraction, "g2": params.g2 * fraction})
        x, _ = newton(stage, x)
    return x


def solve(params: PhysicalParams) -> SteadyState:
    """Steady state reached by switching the couplings on adiabatically.

    Falls back to cold starts from |1>, |2> and an equal ground mixture when the
    ramp fails or ends on an unstable branch.
    """
    if params.g1 == 0 and params.g2 == 0:
        x = initial_state(params, level=1)
        return _finish(params, x, residual_norm(params, x))

    converged: list[SteadyState] = []
    try:
        x = _ramp(params)
        candidate = _finish(params, x, residual_norm(params, x))
        if candidate.stable and is_physical(params, candidate.x):
            return candidate
        converged.append(candidate)
        logger.info("steady_state.fallback reason=unstable_branch")
    except NoConvergence as exc:
        logger.info("steady_state.fallback reason=ramp_failed detail=%s", exc)

    for level in (1, 2, 0):
        try:
            x, residual = newton(params, initial_state(params, level=level))
        except NoConvergence:
            continue
        if not is_physical(params, x):
            continue
        candidate = _finish(params, x, residual)
        if candidate.stable:
            return candidate
        converged.append(candidate)

    if converged:
        raise UnstableOnly(f"{len(converged)} fixed point(s) found, none dynamically stable.")
    raise NoConvergence("no seed converged to a physical fixed point.")


def _check_monotone(grid: Sequence[float]) -> None:
    steps = np.diff(np.asarray(grid, dtype=float))
    if steps.size and not (np.all(steps >= 0) or np.all(steps <= 0)):
        raise ConfigError("delta_L2_grid", "probe-detuning grid must be monotone.")


def continuation_scan(params: PhysicalParams, delta_L2_grid: Sequence[float]) -> list[SteadyState]:
    """Steady states along the probe-detuning grid, each seeded from its predecessor."""
    _check_monotone(delta_L2_grid)
    logger.info("steady_state.scan n_points=%d", len(delta_L2_grid))
    states: list[SteadyState] = []
    failures: list[tuple[int, Exception]] = []
    previous: SteadyState | None = None
    for index, detuning in enumerate(delta_L2_grid):
        point = params.model_copy(update={"delta_L2": float(detuning)})
        try:
            state = None
            if previous is not None:
                try:
                    x, residual = newton(point, np.array(previous.x))
                    candidate = _finish(point, x, residual)
                    if candidate.stable and is_physical(point, x):
                        state = candidate
                except NoConvergence:
                    pass
                if state is None:
                    logger.info("steady_state.fallback index=%d", index)
            if state is None:
                state = solve(point)
        except (NoConvergence, UnstableOnly) as exc:
            failures.append((index, exc))
            previous = None
            continue
        states.append(state)
        previous = state
    if failures:
        raise ScanError(failures)
    return states


@dataclass(frozen=True)
class TransmissionProfile:
    """Intracavity photon numbers tau|a|^2 and output fluxes |a_out|^2 along a scan."""

    intracavity_pump: np.ndarray
    intracavity_probe: np.ndarray
    output_pump: np.ndarray
    output_probe: np.ndarray


def transmission_profile(params: PhysicalParams, states: Sequence[SteadyState]) -> TransmissionProfile:
    outputs = np.array([output_amplitudes(params, state.x) for state in states], dtype=complex).reshape(-1, 2)
    fields = np.array([(state.a1, state.a2) for state in states], dtype=complex).reshape(-1, 2)
    photons = params.tau * np.abs(fields) ** 2
    flux = np.abs(outputs) ** 2
    return TransmissionProfile(
        intracavity_pump=photons[:, 0],
        intracavity_probe=photons[:, 1],
        output_pump=flux[:, 0],
        output_probe=flux[:, 1],
    )
