from eit_noise.core.config import Settings, get_settings
from eit_noise.core.exceptions import EitValidationError, NumericalError
from eit_noise.core.logging import configure_logging

__all__ = [
    "Settings",
    "get_settings",
    "EitValidationError",
    "NumericalError",
    "configure_logging",
]
