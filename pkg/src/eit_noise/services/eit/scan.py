from __future__ import annotations

import logging

import numpy as np

from eit_noise.core.config import Settings
from eit_noise.models import PointDiagnostics, RunConfig, ScanResult
from eit_noise.services.physics.fluctuations import lyapunov_covariance
from eit_noise.services.physics.model import nondimensionalize
from eit_noise.services.physics.spectra import run_spectra_phase
from eit_noise.services.physics.steady_state import continuation_scan, transmission_profile

logger = logging.getLogger(__name__)


def complex_to_pairs(matrix: np.ndarray) -> list[list[list[float]]]:
    return [[[float(value.real), float(value.imag)] for value in row] for row in np.asarray(matrix, dtype=complex)]


class ScanMixin:
    settings: Settings

    def run_scan(self, config: RunConfig) -> ScanResult:
        """Probe-detuning scan: continuation phase, then the parallel spectra phase."""
        params = nondimensionalize(config.physical_params())
        grid = config.grid()
        workers = min(self.settings.max_threads, max(1, len(grid)))
        logger.info(
            "scan.start n_points=%d omega=%s workers=%d zero_coherence=%s",
            len(grid),
            config.omega,
            workers,
            config.force_zero_coherence,
        )
        states = continuation_scan(params, grid)
        points = [params.model_copy(update={"delta_L2": float(value)}) for value in grid]
        outcomes = run_spectra_phase(points, states, config.omega, config.force_zero_coherence, workers)
        profile = transmission_profile(params, states)

        diagnostics = None
        if config.include_diagnostics:
            diagnostics = [
                PointDiagnostics(
                    delta_L2=point.delta_L2,
                    residual=state.residual,
                    stable=state.stable,
                    drift=complex_to_pairs(a.A),
                    diffusion=complex_to_pairs(d.D_corr),
                    covariance=complex_to_pairs(lyapunov_covariance(a, d)),
                )
                for point, state, (_, a, d) in zip(points, states, outcomes)
            ]
        logger.info("scan.done n_points=%d", len(outcomes))
        return ScanResult(
            records=[record for record, _, _ in outcomes],
            intracavity_pump=[float(value) for value in profile.intracavity_pump],
            intracavity_probe=[float(value) for value in profile.intracavity_probe],
            diagnostics=diagnostics,
        )
