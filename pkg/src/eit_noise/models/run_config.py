from __future__ import annotations

from enum import Enum

from pydantic import BaseModel, ConfigDict, Field, model_validator

from eit_noise.models.params import ComplexAmplitude, PhysicalParams


class OutputFormat(str, Enum):
    CSV = "csv"
    JSON = "json"


class RunConfig(BaseModel):
    """Everything needed to reproduce one detuning scan.

    Physical fields are in units of Gamma (Gamma1 + Gamma2 is normally 1).
    ``rabi1``/``rabi2`` are empty-cavity half-Rabi frequencies g*|a|; when set
    they override the corresponding input amplitude.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    g1: float = Field(ge=0)
    g2: float = Field(ge=0)
    Gamma1: float = Field(default=0.5, ge=0)
    Gamma2: float = Field(default=0.5, ge=0)
    gamma12: float = Field(default=0.0, ge=0)
    gamma: float = Field(default=0.1, gt=0)
    tau: float = Field(default=1e-3, gt=0)
    Delta_c1: float = 0.0
    Delta_c2: float = 0.0
    delta_L1: float = 0.0
    delta_L2: float = 0.0
    N: float = Field(default=1e4, ge=1)
    alpha1_in: ComplexAmplitude = 0j
    alpha2_in: ComplexAmplitude = 0j
    rabi1: float | None = Field(default=None, ge=0)
    rabi2: float | None = Field(default=None, ge=0)
    fano1_in: float = Field(default=1.0, ge=1)
    fano2_in: float = Field(default=1.0, ge=1)

    scan_min: float = -2.0
    scan_max: float = 2.0
    n_points: int = Field(default=401, ge=1)
    omega: float = Field(default=1.0 / (6.0 * 3.141592653589793), ge=0)
    output: str | None = None
    format: OutputFormat = OutputFormat.CSV
    include_diagnostics: bool = False
    force_zero_coherence: bool = False
    seed: int = Field(
        default=20240521,
        ge=0,
        lt=2**64,
        description="Echoed into result metadata only; scans draw no random numbers.",
    )

    @model_validator(mode="after")
    def _validate_grid(self) -> "RunConfig":
        if self.scan_min > self.scan_max:
            raise ValueError("scan_min must not exceed scan_max.")
        if self.Gamma1 + self.Gamma2 <= 0:
            raise ValueError("Gamma1 + Gamma2 must be positive.")
        for field, rabi, g in (("rabi1", self.rabi1, self.g1), ("rabi2", self.rabi2, self.g2)):
            if rabi and g == 0:
                raise ValueError(f"{field} requires a nonzero coupling.")
        return self

    def physical_params(self) -> PhysicalParams:
        from eit_noise.services.physics.model import drive_from_rabi

        params = PhysicalParams(
            **{name: getattr(self, name) for name in PhysicalParams.model_fields},
        )
        changes: dict[str, complex] = {}
        if self.rabi1 is not None:
            changes["alpha1_in"] = drive_from_rabi(params, self.rabi1, field=1)
        if self.rabi2 is not None:
            changes["alpha2_in"] = drive_from_rabi(params, self.rabi2, field=2)
        return params.updated(**changes) if changes else params

    def grid(self) -> list[float]:
        if self.n_points == 1:
            return [self.scan_min]
        step = (self.scan_max - self.scan_min) / (self.n_points - 1)
        return [self.scan_min + index * step for index in range(self.n_points)]
