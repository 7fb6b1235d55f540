from eit_noise.services.eit.scan import ScanMixin
from eit_noise.services.eit.validation import ValidationMixin, ValidationReport

__all__ = ["ScanMixin", "ValidationMixin", "ValidationReport"]
