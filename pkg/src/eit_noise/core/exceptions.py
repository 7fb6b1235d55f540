from __future__ import annotations


class EitValidationError(ValueError):
    """Raised when user input or domain constraints are invalid."""


class ConfigError(EitValidationError):
    """Raised when a run configuration field is missing or invalid."""

    def __init__(self, field: str, message: str) -> None:
        super().__init__(f"{field}: {message}")
        self.field = field


class ZeroTotalDecay(EitValidationError):
    """Raised when Gamma1 + Gamma2 vanishes and no frequency unit exists."""


class ZeroOutputField(EitValidationError):
    """Raised when an output field is too dim for its quadrature phase to be defined."""


class NumericalError(RuntimeError):
    """Raised when a numerical stage of the pipeline fails."""


class NoConvergence(NumericalError):
    """Raised when the steady-state iteration budget is exhausted."""


class UnstableOnly(NumericalError):
    """Raised when every located fixed point has a growing mode."""


class NonPhysicalState(NumericalError):
    """Raised when a reconstructed density matrix is not positive."""


class SingularResolvent(NumericalError):
    """Raised when (A - i*omega*I) cannot be inverted reliably."""


class UnstableDrift(NumericalError):
    """Raised when a drift matrix with a growing mode reaches the spectra stage."""


class UnstableIntegration(NumericalError):
    """Raised when a stochastic trajectory diverges."""


class ScanError(NumericalError):
    """Aggregates per-grid-point failures of a scan."""

    def __init__(self, failures: list[tuple[int, Exception]]) -> None:
        self.failures = failures
        detail = "; ".join(f"index={index} {type(exc).__name__}: {exc}" for index, exc in failures)
        super().__init__(f"{len(failures)} grid point(s) failed: {detail}")
