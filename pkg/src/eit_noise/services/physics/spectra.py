"""Spectral matrix, output-field noise and pump/probe intensity correlations.

Fourier convention: x(Omega) = integral of x(t) exp(i Omega t), so that
(A - i Omega) dx(Omega) = F(Omega) and S(Omega) = R D R^dagger with
R = (A - i Omega)^-1.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from math import sqrt
from typing import Sequence

import numpy as np
from scipy.integrate import quad_vec
from scipy.linalg import lu_factor, lu_solve

from eit_noise.core.exceptions import (
    EitValidationError,
    NumericalError,
    ScanError,
    SingularResolvent,
    UnstableDrift,
    ZeroOutputField,
)
from eit_noise.models import PhysicalParams, SpectrumRecord
from eit_noise.services.physics.constants import FIELDS
from eit_noise.services.physics.fluctuations import (
    DiffusionMatrix,
    DriftMatrix,
    diffusion_matrix,
    drift_matrix,
    force_zero_coherence,
)
from eit_noise.services.physics.model import output_amplitudes
from eit_noise.services.physics.steady_state import STABILITY_TOL, SteadyState, continuation_scan

logger = logging.getLogger(__name__)

CONDITION_LIMIT = 1e14
ZERO_FIELD = 1e-12

# Rows of the source-to-output map that are pure input reflection.
_REFLECTION = np.hstack([np.zeros((4, 8)), np.eye(4)])


@dataclass(frozen=True)
class SpectralMatrix:
    """Intracavity spectral matrix at +omega, with the -omega resolvent kept for symmetrization."""

    omega: float
    S: np.ndarray
    D: np.ndarray
    resolvent: np.ndarray
    resolvent_neg: np.ndarray
    diffusion: DiffusionMatrix | None = None

    @property
    def S_neg(self) -> np.ndarray:
        return self.resolvent_neg @ self.D @ self.resolvent_neg.conj().T


def _drift_array(A: DriftMatrix | np.ndarray) -> np.ndarray:
    return np.asarray(A.A if isinstance(A, DriftMatrix) else A, dtype=complex)


def _diffusion_array(D: DiffusionMatrix | np.ndarray) -> np.ndarray:
    return np.asarray(D.D_corr if isinstance(D, DiffusionMatrix) else D, dtype=complex)


def check_stable(a: np.ndarray) -> None:
    eigenvalues = np.linalg.eigvals(a)
    scale = max(1.0, float(np.max(np.abs(eigenvalues))))
    lowest = float(np.min(eigenvalues.real))
    if lowest < -STABILITY_TOL * scale:
        raise UnstableDrift(f"drift matrix has a growing mode (min Re eig = {lowest:.3e}).")


def resolvent(a: np.ndarray, omega: float) -> np.ndarray:
    shifted = a - 1j * omega * np.eye(a.shape[0])
    condition = np.linalg.cond(shifted)
    if not np.isfinite(condition) or condition > CONDITION_LIMIT:
        raise SingularResolvent(f"A - i*omega is singular at omega={omega!r} (condition {condition:.3e}).")
    return lu_solve(lu_factor(shifted), np.eye(a.shape[0], dtype=complex))


def spectral_matrix(A: DriftMatrix | np.ndarray, D: DiffusionMatrix | np.ndarray, omega: float) -> SpectralMatrix:
    a = _drift_array(A)
    d = _diffusion_array(D)
    check_stable(a)
    r_pos = resolvent(a, omega)
    r_neg = r_pos if omega == 0 else resolvent(a, -omega)
    s = r_pos @ d @ r_pos.conj().T
    return SpectralMatrix(
        omega=float(omega),
        S=s,
        D=d,
        resolvent=r_pos,
        resolvent_neg=r_neg,
        diffusion=D if isinstance(D, DiffusionMatrix) else None,
    )


def output_transfer(params: PhysicalParams, resolvent_matrix: np.ndarray, D: DiffusionMatrix) -> np.ndarray:
    """Map from the noise sources (atomic forces, input fields) to (a1_out, a1_out^+, a2_out, a2_out^+).

    dA_out = sqrt(gamma*tau) dA - dA_in; with input coupling sqrt(gamma/tau) the
    empty cavity is a unitary filter.
    """
    coupling_out = sqrt(params.gamma * params.tau)
    return coupling_out * resolvent_matrix[FIELDS, :] @ D.source_gain - _REFLECTION


def _quadrature_weights(phases: Sequence[float], shift: float = 0.0) -> np.ndarray:
    weights = np.zeros((2, 4), dtype=complex)
    for k, phase in enumerate(phases):
        angle = phase + shift
        weights[k, 2 * k] = np.exp(-1j * angle)
        weights[k, 2 * k + 1] = np.exp(1j * angle)
    return weights


def quadrature_spectra(
    S: SpectralMatrix, params: PhysicalParams, ss: SteadyState, shift: float = 0.0
) -> tuple[np.ndarray, np.ndarray]:
    """Symmetrized 2x2 spectra of the output quadratures and the output amplitudes.

    ``shift`` = 0 selects the amplitude quadratures, pi/2 the phase quadratures.
    Returns (Q_sym, |a_out|^2).
    """
    if S.diffusion is None:
        raise ValueError("output spectra require a DiffusionMatrix with its input-noise block.")
    a_out = np.array(output_amplitudes(params, ss.x))
    phases = np.angle(a_out)
    weights = _quadrature_weights(phases, shift)
    noise = S.diffusion.source_noise
    transfer_pos = weights @ output_transfer(params, S.resolvent, S.diffusion)
    transfer_neg = weights @ output_transfer(params, S.resolvent_neg, S.diffusion)
    q_pos = transfer_pos @ noise @ transfer_pos.conj().T
    q_neg = transfer_neg @ noise @ transfer_neg.conj().T
    return 0.5 * (q_pos + q_neg.T), np.abs(a_out) ** 2


def _require_bright(intensities: np.ndarray) -> None:
    for label, intensity in zip(("pump", "probe"), intensities):
        if sqrt(intensity) < ZERO_FIELD:
            raise ZeroOutputField(f"{label} output field vanishes; its amplitude quadrature is undefined.")


def output_spectra(S: SpectralMatrix, params: PhysicalParams, ss: SteadyState, omega: float) -> SpectrumRecord:
    """Shot-normalized amplitude (and phase) quadrature noise of both output beams."""
    if S.omega != float(omega):
        raise ValueError(f"spectral matrix was built at omega={S.omega!r}, not {omega!r}.")
    amplitude, intensities = quadrature_spectra(S, params, ss)
    _require_bright(intensities)
    phase, _ = quadrature_spectra(S, params, ss, shift=np.pi / 2)
    s_pump, s_probe = float(amplitude[0, 0].real), float(amplitude[1, 1].real)
    return SpectrumRecord(
        delta_L2=params.delta_L2,
        omega=float(omega),
        s_pump=s_pump,
        s_probe=s_probe,
        fano_pump=s_pump,
        fano_probe=s_probe,
        phase_pump=float(phase[0, 0].real),
        phase_probe=float(phase[1, 1].real),
    )


def correlation_record(S: SpectralMatrix, params: PhysicalParams, ss: SteadyState, omega: float) -> SpectrumRecord:
    """Adds the balanced sum/difference photocurrent noise and the correlation C."""
    record = output_spectra(S, params, ss, omega)
    amplitude, intensities = quadrature_spectra(S, params, ss)
    i1, i2 = (float(value) for value in intensities)
    total = i1 + i2
    local = (i1 * record.s_pump + i2 * record.s_probe) / total
    cross = 2.0 * sqrt(i1 * i2) * float(amplitude[0, 1].real) / total
    s_sum = local + cross
    s_diff = local - cross
    gap = s_sum - s_diff
    return record.model_copy(
        update={
            "s_sum": s_sum,
            "s_diff": s_diff,
            "correlation": gap / 4.0,
            "correlation_2C": gap / 2.0,
            "correlation_norm": gap / (s_sum + s_diff),
        }
    )


def lyapunov_integral(A: DriftMatrix | np.ndarray, D: DiffusionMatrix | np.ndarray, epsrel: float = 1e-10) -> np.ndarray:
    """(1/2 pi) times the integral of S(Omega) over the real line, by adaptive quadrature."""
    a = _drift_array(A)
    d = _diffusion_array(D)
    check_stable(a)
    n = a.shape[0]
    identity = np.eye(n)

    def integrand(omega: float) -> np.ndarray:
        r = np.linalg.solve(a - 1j * omega * identity, identity)
        s = r @ d @ r.conj().T
        return np.concatenate([s.real.ravel(), s.imag.ravel()])

    eigenvalues = np.linalg.eigvals(a)
    edge = 10.0 * float(np.max(np.abs(eigenvalues)))
    breakpoints = sorted({float(value) for value in eigenvalues.imag if abs(value) < edge})
    total = np.zeros(2 * n * n)
    pieces = ((-np.inf, -edge, None), (-edge, edge, breakpoints or None), (edge, np.inf, None))
    for lower, upper, points in pieces:
        value, _ = quad_vec(integrand, lower, upper, epsabs=0.0, epsrel=epsrel, points=points, limit=20000)
        total += value
    total /= 2.0 * np.pi
    return (total[: n * n] + 1j * total[n * n :]).reshape(n, n)


def spectrum_point(
    params: PhysicalParams, ss: SteadyState, omega: float, zero_coherence: bool = False
) -> tuple[SpectrumRecord, DriftMatrix, DiffusionMatrix]:
    """Per-point pipeline: A, D -> S(omega) -> record."""
    a = drift_matrix(params, ss)
    d = diffusion_matrix(params, ss)
    if zero_coherence:
        a, d = force_zero_coherence(a, d)
    s = spectral_matrix(a, d, omega)
    return correlation_record(s, params, ss, omega), a, d


def scan(
    params: PhysicalParams,
    delta_L2_grid: Sequence[float],
    omega: float,
    zero_coherence: bool = False,
    max_workers: int = 1,
) -> list[SpectrumRecord]:
    """Sequential continuation phase, then an independent spectra phase in grid order."""
    states = continuation_scan(params, delta_L2_grid)
    points = [params.model_copy(update={"delta_L2": float(value)}) for value in delta_L2_grid]
    results = run_spectra_phase(points, states, omega, zero_coherence, max_workers)
    return [record for record, _, _ in results]


_POINT_ERRORS = (EitValidationError, NumericalError)


def run_spectra_phase(
    points: Sequence[PhysicalParams],
    states: Sequence[SteadyState],
    omega: float,
    zero_coherence: bool = False,
    max_workers: int = 1,
) -> list[tuple[SpectrumRecord, DriftMatrix, DiffusionMatrix]]:
    """Evaluate every grid point; results and failures are reported in grid order."""

    def task(index: int) -> tuple[SpectrumRecord, DriftMatrix, DiffusionMatrix] | Exception:
        try:
            return spectrum_point(points[index], states[index], omega, zero_coherence)
        except _POINT_ERRORS as exc:
            return exc

    indices = range(len(states))
    if max_workers > 1 and len(states) > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            outcomes = list(pool.map(task, indices))
    else:
        outcomes = [task(index) for index in indices]

    failures = [(index, outcome) for index, outcome in enumerate(outcomes) if isinstance(outcome, Exception)]
    if failures:
        logger.warning("spectra.failed count=%d", len(failures))
        raise ScanError(failures)
    logger.info("spectra.done n_points=%d omega=%s", len(outcomes), omega)
    return outcomes  # type: ignore[return-value]
