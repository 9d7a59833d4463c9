"""
Simulation configuration.
"""

import re
from dataclasses import dataclass, replace
from typing import Optional

from django.db import models

from core.exceptions import ConfigurationError
from networks.models.params import ModelParams


class SimulationMode(models.TextChoices):
    STANDARD = 'standard', 'Standard'
    POISSON_FIXED_SET = 'poisson-fixed', 'Poisson fixed set'


_POISSON_MODE = re.compile(r'^poisson-fixed:(\d+)$')


@dataclass(frozen=True)
class SimConfig:
    """
    One ensemble of growth runs.

    In the Poisson fixed-set mode `fixed_count` isolated nodes exist before
    the first arrival and only their degrees are reported.
    """

    params: ModelParams
    target_size: int
    runs: int = 1
    mode: str = SimulationMode.STANDARD
    fixed_count: int = 0
    rng_seed: int = 0
    record_tail_variance: bool = True

    def __post_init__(self):
        if self.target_size < 2:
            raise ConfigurationError(f"target size N must be at least 2, got {self.target_size}")
        if self.runs < 1:
            raise ConfigurationError(f"runs M must be at least 1, got {self.runs}")
        if self.mode not in SimulationMode.values:
            raise ConfigurationError(f"unknown simulation mode {self.mode!r}")
        if self.mode == SimulationMode.POISSON_FIXED_SET:
            if not 1 <= self.fixed_count < self.target_size:
                raise ConfigurationError(
                    f"fixed_count must satisfy 1 ≤ fixed_count < N, got {self.fixed_count}"
                )
        if not 0 <= self.rng_seed < 2 ** 64:
            raise ConfigurationError("rng_seed must be a 64-bit unsigned integer")

    @staticmethod
    def parse_mode(text: str) -> tuple:
        """'standard' or 'poisson-fixed:<count>' -> (mode, fixed_count)."""
        text = (text or SimulationMode.STANDARD).strip()
        if text == SimulationMode.STANDARD:
            return SimulationMode.STANDARD, 0
        match = _POISSON_MODE.match(text)
        if not match:
            raise ConfigurationError(
                f"mode must be 'standard' or 'poisson-fixed:<count>', got {text!r}"
            )
        return SimulationMode.POISSON_FIXED_SET, int(match.group(1))

    @property
    def is_poisson_mode(self) -> bool:
        return self.mode == SimulationMode.POISSON_FIXED_SET

    @property
    def reported_starting_degree(self) -> int:
        """Lowest degree included in per-run pmfs (0 for the fixed set)."""
        return 0 if self.is_poisson_mode else self.params.starting_degree

    @property
    def mode_label(self) -> str:
        if self.is_poisson_mode:
            return f"{SimulationMode.POISSON_FIXED_SET}:{self.fixed_count}"
        return SimulationMode.STANDARD

    def with_seed(self, seed: Optional[int]) -> 'SimConfig':
        return replace(self, rng_seed=int(seed or 0))
