"""
Serializers package initialization.
"""

from .fields import BoundField, FloatListField, PlainDataField, SignificantFloatField
from .params_serializer import ModelParamsSerializer, SimConfigSerializer, load
from .report_serializer import (
    ClosedFormPmfSerializer,
    EnsemblePmfSerializer,
    FitReportSerializer,
    RunManifestSerializer,
)

__all__ = [
    'BoundField',
    'FloatListField',
    'PlainDataField',
    'SignificantFloatField',
    'ModelParamsSerializer',
    'SimConfigSerializer',
    'load',
    'ClosedFormPmfSerializer',
    'EnsemblePmfSerializer',
    'FitReportSerializer',
    'RunManifestSerializer',
]
