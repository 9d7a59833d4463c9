"""
Results produced by the integrator, the fitting pipeline and the commands.
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from core.exceptions import ConfigurationError, DomainError


@dataclass(frozen=True)
class MasterEquationGrid:
    """
    Solution p_k(t) of the degree master equation on a fixed time grid.

    Rows are stored times, columns degrees 0..k_max. `leak` is the mass
    that flowed past k_max by the last stored time.
    """

    k_max: int
    dt: float
    t_end: float
    times: np.ndarray
    probabilities: np.ndarray
    leak: float = 0.0
    leak_warning: bool = False

    def __post_init__(self):
        if self.probabilities.shape != (len(self.times), self.k_max + 1):
            raise ConfigurationError(
                f"grid shape {self.probabilities.shape} does not match "
                f"{len(self.times)} times × {self.k_max + 1} degrees"
            )

    @property
    def degrees(self) -> np.ndarray:
        return np.arange(self.k_max + 1)

    @property
    def mass(self) -> np.ndarray:
        """Σ_k p_k(t) at every stored time."""
        return self.probabilities.sum(axis=1)

    def index_of(self, t: float) -> int:
        if t < 0 or t > self.t_end + 1e-12:
            raise DomainError(f"time {t} outside [0, {self.t_end}]")
        return int(np.argmin(np.abs(self.times - t)))

    def at(self, t: float) -> np.ndarray:
        return self.probabilities[self.index_of(t)]


@dataclass
class FitReport:
    """
    Fitted trichotomy parameters and errors for one histogram.

    The stitched fitted pmf covers degrees k_min..k_max of the histogram;
    `head_clipped`, `tail_skipped` and `warnings` record phases that
    degraded instead of failing.
    `lower_bound` and `upper_bound` are the L and U inside p_a and p_b.
    """

    dataset: str
    lower_threshold: int
    upper_threshold: int
    exponent: float
    amplitude: float
    gamma: float
    gamma_convention: str
    lower_bound: Optional[int] = None
    upper_bound: Optional[int] = None
    head_params: List[float] = field(default_factory=list)
    head_parameter: Optional[float] = None
    tail_coefficient: Optional[float] = None
    tail_parameter: Optional[float] = None
    rmse_trichotomy: float = 0.0
    rmse_power_law_only: float = 0.0
    per_phase_rmse: Tuple[Optional[float], Optional[float], Optional[float]] = (None, None, None)
    power_law_amplitude: float = 0.0
    power_law_gamma: float = 0.0
    k_min: int = 1
    k_max: int = 1
    fitted_pmf: Optional[np.ndarray] = None
    empirical_pmf: Optional[np.ndarray] = None
    head_clipped: bool = False
    tail_skipped: bool = False
    warnings: List[str] = field(default_factory=list)

    @property
    def degrees(self) -> np.ndarray:
        return np.arange(self.k_min, self.k_max + 1)

    @property
    def error_reduction(self) -> float:
        """1 − rmse_trichotomy / rmse_power_law_only."""
        if not self.rmse_power_law_only:
            return 0.0
        return 1.0 - self.rmse_trichotomy / self.rmse_power_law_only

    def table_row(self) -> Dict[str, Any]:
        return {
            'dataset': self.dataset,
            'lower_threshold': self.lower_threshold,
            'upper_threshold': self.upper_threshold,
            'exponent': self.exponent,
            'rmse_ours': self.rmse_trichotomy,
            'rmse_pl': self.rmse_power_law_only,
        }


@dataclass(frozen=True)
class RunManifest:
    """Everything needed to reproduce one command invocation."""

    command: str
    configuration: Dict[str, Any]
    artifacts: List[str]
    version: str
    rng_seed: Optional[int] = None


class GammaConvention:
    """How the fitted slope magnitude s maps to γ in the head/tail parameters."""
    LITERAL = 'literal'  # γ = s
    THEOREM = 'theorem'  # γ = s - 1
    CHOICES = (LITERAL, THEOREM)


@dataclass(frozen=True)
class FitConfig:
    """Options of the three-step fit; None boundaries are chosen from the data."""

    dataset: str = 'dataset'
    initial_lower_threshold: Optional[int] = None
    initial_upper_threshold: Optional[int] = None
    max_head_params: int = 1
    gamma_convention: str = GammaConvention.LITERAL
    mixture_convention: str = 'inclusive'

    def __post_init__(self):
        if self.max_head_params < 1:
            raise ConfigurationError(f"max_head_params must be at least 1, got {self.max_head_params}")
        if self.gamma_convention not in GammaConvention.CHOICES:
            raise ConfigurationError(f"unknown gamma convention {self.gamma_convention!r}")
        if self.mixture_convention not in ('exclusive', 'inclusive'):
            raise ConfigurationError(f"unknown mixture convention {self.mixture_convention!r}")
        lo, hi = self.initial_lower_threshold, self.initial_upper_threshold
        if lo is not None and hi is not None and lo >= hi:
            raise ConfigurationError(f"initial boundaries need ℒ₀ < 𝒰₀, got {lo} ≥ {hi}")
