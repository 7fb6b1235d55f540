from __future__ import annotations

from pydantic import BaseModel, Field

CSV_COLUMNS = (
    "delta_L2",
    "omega",
    "s_pump",
    "s_probe",
    "fano_pump",
    "fano_probe",
    "s_sum",
    "s_diff",
    "correlation_2C",
    "correlation_norm",
)

COLUMN_UNITS = {
    "delta_L2": "Gamma",
    "omega": "Gamma",
    "s_pump": "shot-normalized",
    "s_probe": "shot-normalized",
    "fano_pump": "shot-normalized",
    "fano_probe": "shot-normalized",
    "s_sum": "shot-normalized",
    "s_diff": "shot-normalized",
    "correlation_2C": "shot-normalized",
    "correlation_norm": "dimensionless",
}


class SpectrumRecord(BaseModel):
    delta_L2: float = Field(description="Probe detuning in units of Gamma.")
    omega: float = Field(description="Analysis frequency in units of Gamma.")
    s_pump: float = Field(description="Pump output amplitude-quadrature noise over shot noise.")
    s_probe: float = Field(description="Probe output amplitude-quadrature noise over shot noise.")
    fano_pump: float
    fano_probe: float
    s_sum: float | None = None
    s_diff: float | None = None
    correlation: float | None = Field(default=None, description="C = (s_sum - s_diff) / 4.")
    correlation_2C: float | None = None
    correlation_norm: float | None = None
    phase_pump: float | None = Field(default=None, description="Pump phase-quadrature noise (diagnostics).")
    phase_probe: float | None = Field(default=None, description="Probe phase-quadrature noise (diagnostics).")

    def csv_row(self) -> list[float | None]:
        return [getattr(self, column) for column in CSV_COLUMNS]


ComplexMatrix = list[list[list[float]]]


class PointDiagnostics(BaseModel):
    """Linearization at one grid point; complex entries stored as [re, im] pairs."""

    delta_L2: float
    residual: float
    stable: bool
    drift: ComplexMatrix
    diffusion: ComplexMatrix
    covariance: ComplexMatrix


class ScanResult(BaseModel):
    records: list[SpectrumRecord]
    intracavity_pump: list[float] = Field(default_factory=list, description="Intracavity photon number tau*|a1|^2.")
    intracavity_probe: list[float] = Field(default_factory=list, description="Intracavity photon number tau*|a2|^2.")
    diagnostics: list[PointDiagnostics] | None = None
