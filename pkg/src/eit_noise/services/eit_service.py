from eit_noise.core.config import Settings
from eit_noise.services.eit import ScanMixin, ValidationMixin


class EitNoiseService(ScanMixin, ValidationMixin):
    def __init__(self, settings: Settings) -> None:
        self.settings = settings
