from eit_noise.services.physics.fluctuations import (
    DiffusionMatrix,
    DriftMatrix,
    diffusion_matrix,
    drift_matrix,
    force_zero_coherence,
    lyapunov_covariance,
    symmetrized_diffusion,
)
from eit_noise.services.physics.model import (
    LindbladGenerator,
    build_generator,
    drift,
    drift_jacobian,
    nondimensionalize,
    redimensionalize,
)
from eit_noise.services.physics.spectra import (
    SpectralMatrix,
    correlation_record,
    lyapunov_integral,
    output_spectra,
    scan,
    spectral_matrix,
)
from eit_noise.services.physics.steady_state import SteadyState, continuation_scan, solve, transmission_profile

__all__ = [
    "DiffusionMatrix",
    "DriftMatrix",
    "LindbladGenerator",
    "SpectralMatrix",
    "SteadyState",
    "build_generator",
    "continuation_scan",
    "correlation_record",
    "diffusion_matrix",
    "drift",
    "drift_jacobian",
    "drift_matrix",
    "force_zero_coherence",
    "lyapunov_covariance",
    "lyapunov_integral",
    "nondimensionalize",
    "output_spectra",
    "redimensionalize",
    "scan",
    "solve",
    "spectral_matrix",
    "symmetrized_diffusion",
    "transmission_profile",
]
