from __future__ import annotations

from typing import Annotated, Any

from pydantic import BaseModel, BeforeValidator, ConfigDict, Field


def _parse_complex(value: Any) -> Any:
    """Accept config-file spellings such as ``"1.5 - 0.2j"``."""
    if isinstance(value, str):
        return complex(value.replace(" ", ""))
    return value


ComplexAmplitude = Annotated[complex, BeforeValidator(_parse_complex)]


class PhysicalParams(BaseModel):
    """Model constants of the cavity/three-level-atom system.

    Rates and detunings are angular frequencies. The intracavity amplitude is
    normalized to [A, A^dagger] = 1/tau, so ``g`` and the input amplitudes carry
    units of sqrt(rate). After :func:`nondimensionalize` every rate is in units
    of Gamma = Gamma1 + Gamma2.
    """

    model_config = ConfigDict(frozen=True)

    g1: float = Field(ge=0, description="Coupling on |1> <-> |0> (pump transition).")
    g2: float = Field(ge=0, description="Coupling on |2> <-> |0> (probe transition).")
    Gamma1: float = Field(ge=0, description="Spontaneous emission rate |0> -> |1>.")
    Gamma2: float = Field(ge=0, description="Spontaneous emission rate |0> -> |2>.")
    gamma12: float = Field(default=0.0, ge=0, description="Ground-state decoherence rate.")
    gamma: float = Field(gt=0, description="Cavity linewidth.")
    tau: float = Field(gt=0, description="Cavity length divided by the speed of light.")
    Delta_c1: float = Field(default=0.0, description="Cavity detuning for the pump.")
    Delta_c2: float = Field(default=0.0, description="Cavity detuning for the probe.")
    delta_L1: float = Field(default=0.0, description="Pump detuning from its atomic transition.")
    delta_L2: float = Field(default=0.0, description="Probe detuning from its atomic transition.")
    N: float = Field(ge=1, description="Number of atoms.")
    alpha1_in: ComplexAmplitude = Field(default=0j, description="Pump input amplitude (flux normalized).")
    alpha2_in: ComplexAmplitude = Field(default=0j, description="Probe input amplitude (flux normalized).")
    fano1_in: float = Field(default=1.0, ge=1, description="Pump input intensity noise over shot noise.")
    fano2_in: float = Field(default=1.0, ge=1, description="Probe input intensity noise over shot noise.")

    @property
    def Gamma(self) -> float:
        return self.Gamma1 + self.Gamma2

    def updated(self, **changes: Any) -> "PhysicalParams":
        """Return a validated copy with ``changes`` applied."""
        return PhysicalParams.model_validate({**self.model_dump(), **changes})
