from eit_noise.models.params import PhysicalParams
from eit_noise.models.records import COLUMN_UNITS, CSV_COLUMNS, PointDiagnostics, ScanResult, SpectrumRecord
from eit_noise.models.run_config import OutputFormat, RunConfig

__all__ = [
    "COLUMN_UNITS",
    "CSV_COLUMNS",
    "OutputFormat",
    "PhysicalParams",
    "PointDiagnostics",
    "RunConfig",
    "ScanResult",
    "SpectrumRecord",
]
