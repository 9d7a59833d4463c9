"""
Services package initialization.

Services hold the model's computations; management commands and Celery
tasks call into them and never reimplement them.
"""

from .closed_forms import ClosedFormService, MixtureConvention
from .master_equation import MasterEquationService
from .simulator import SimulationService
from .fitting import FittingService
from .ingest import IngestService

__all__ = [
    'ClosedFormService',
    'MixtureConvention',
    'MasterEquationService',
    'SimulationService',
    'FittingService',
    'IngestService',
]
