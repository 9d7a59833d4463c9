"""
Models package initialization.

This module exports all domain types for easy importing. None of them is
persisted; they are immutable value objects passed between services.
"""

from .params import (
    INFINITY,
    GammaExponent,
    ModelParams,
    ResidentialCase,
    ResidentialTimeSpec,
    is_infinite,
    parse_bound,
)
from .distributions import ClosedFormPmf, DegreeHistogram, EnsemblePmf, PmfSource
from .growth import GrowthState, ModifiedDegreeTree
from .simulation import SimConfig, SimulationMode
from .edges import DegreeMode, Delimiter, Directedness, EdgeListSpec, SelfLoopPolicy
from .reports import FitConfig, FitReport, GammaConvention, MasterEquationGrid, RunManifest

__all__ = [
    'INFINITY',
    'GammaExponent',
    'ModelParams',
    'ResidentialCase',
    'ResidentialTimeSpec',
    'is_infinite',
    'parse_bound',
    'ClosedFormPmf',
    'DegreeHistogram',
    'EnsemblePmf',
    'PmfSource',
    'GrowthState',
    'ModifiedDegreeTree',
    'SimConfig',
    'SimulationMode',
    'DegreeMode',
    'Delimiter',
    'Directedness',
    'EdgeListSpec',
    'SelfLoopPolicy',
    'FitConfig',
    'FitReport',
    'GammaConvention',
    'MasterEquationGrid',
    'RunManifest',
]
