"""
Probability mass functions over node degrees.

ClosedFormPmf holds an evaluated theoretical (or oracle) pmf, DegreeHistogram
holds empirical counts, EnsemblePmf holds the average of several simulated
runs together with the cross-run variance of every bin.
"""

from collections import Counter
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, Mapping, Optional

import numpy as np
from django.db import models

from core.exceptions import DataError, DomainError, NumericalError


class PmfSource(models.TextChoices):
    """Which closed form (or oracle) produced a pmf."""
    POISSON = 'poisson', 'Poisson network'
    EXP_NETWORK = 'exp_network', 'Exponential network'
    TRUNC_GEOM_MIXTURE = 'trunc_geom_mixture', 'Truncated geometric mixture'
    BA_POWER_LAW = 'ba_power_law', 'BA power law'
    TRUNC_POWER_LAW_MIXTURE = 'trunc_power_law_mixture', 'Truncated power-law mixture'
    TRICHOTOMY = 'trichotomy', 'Trichotomy'
    MASTER_EQUATION = 'master_equation', 'Master-equation oracle'
    SIMULATION = 'simulation', 'Simulation ensemble'


SUM_TOLERANCE = 1e-9


@dataclass(frozen=True)
class ClosedFormPmf:
    """
    A pmf evaluated over the consecutive degrees k_min..k_max.

    Invariants: every probability is nonnegative and the total never
    exceeds one by more than 1e-9.
    """

    k_min: int
    probabilities: np.ndarray
    source: str
    params: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        probs = np.asarray(self.probabilities, dtype=float)
        object.__setattr__(self, 'probabilities', probs)
        if probs.ndim != 1:
            raise NumericalError("pmf must be a vector")
        if not np.all(np.isfinite(probs)):
            raise NumericalError(f"{self.source} pmf has non-finite entries")
        if np.any(probs < 0):
            raise NumericalError(f"{self.source} pmf has negative entries")
        if probs.sum() > 1 + SUM_TOLERANCE:
            raise NumericalError(f"{self.source} pmf sums to {probs.sum()!r} > 1")

    @property
    def k_max(self) -> int:
        return self.k_min + len(self.probabilities) - 1

    @property
    def degrees(self) -> np.ndarray:
        return np.arange(self.k_min, self.k_max + 1)

    @property
    def total(self) -> float:
        return float(self.probabilities.sum())

    def at(self, k: int) -> float:
        if not self.k_min <= k <= self.k_max:
            raise DomainError(f"degree {k} outside support {self.k_min}..{self.k_max}")
        return float(self.probabilities[k - self.k_min])

    def as_dict(self) -> Dict[int, float]:
        return {int(k): float(p) for k, p in zip(self.degrees, self.probabilities)}


@dataclass(frozen=True)
class DegreeHistogram:
    """
    Empirical degree counts.

    The pmf is the dense vector over k_min..k_max (unobserved degrees in
    between have probability 0).
    """

    counts: Mapping[int, int]
    starting_degree: int = 1

    def __post_init__(self):
        cleaned = {}
        for degree, count in self.counts.items():
            degree, count = int(degree), int(count)
            if count < 0:
                raise DataError(f"negative count {count} for degree {degree}")
            if degree < self.starting_degree:
                raise DataError(f"degree {degree} below starting degree {self.starting_degree}")
            if count:
                cleaned[degree] = count
        object.__setattr__(self, 'counts', dict(sorted(cleaned.items())))

    @classmethod
    def from_degrees(cls, degrees: Iterable[int], starting_degree: int = 1) -> 'DegreeHistogram':
        """Count a degree sequence, dropping nodes below the starting degree."""
        degrees = np.asarray(list(degrees) if not isinstance(degrees, np.ndarray) else degrees)
        degrees = degrees[degrees >= starting_degree]
        return cls(counts=Counter(int(d) for d in degrees), starting_degree=starting_degree)

    @classmethod
    def from_pmf(cls, pmf: ClosedFormPmf, total: int) -> 'DegreeHistogram':
        """Round an exact pmf to counts over `total` nodes (noise-free synthetic data)."""
        counts = np.rint(pmf.probabilities * total).astype(np.int64)
        return cls(
            counts={int(k): int(c) for k, c in zip(pmf.degrees, counts) if c > 0},
            starting_degree=min(pmf.k_min, 1),
        )

    @property
    def total(self) -> int:
        return int(sum(self.counts.values()))

    @property
    def is_empty(self) -> bool:
        return not self.counts

    @property
    def k_min(self) -> int:
        self.require_data()
        return next(iter(self.counts))

    @property
    def k_max(self) -> int:
        self.require_data()
        return next(reversed(self.counts))

    @property
    def degrees(self) -> np.ndarray:
        return np.arange(self.k_min, self.k_max + 1)

    @property
    def count_vector(self) -> np.ndarray:
        vector = np.zeros(self.k_max - self.k_min + 1, dtype=np.int64)
        for degree, count in self.counts.items():
            vector[degree - self.k_min] = count
        return vector

    @property
    def pmf(self) -> np.ndarray:
        return self.count_vector / self.total

    @property
    def occupied(self) -> np.ndarray:
        return self.count_vector > 0

    def probability(self, k: int) -> float:
        if self.is_empty:
            return 0.0
        return self.counts.get(int(k), 0) / self.total

    def pmf_over(self, k_lo: int, k_hi: int) -> np.ndarray:
        """pmf values for k_lo..k_hi (zero outside the observed support)."""
        return np.array([self.probability(k) for k in range(k_lo, k_hi + 1)])

    def scaled(self, factor: int) -> 'DegreeHistogram':
        return DegreeHistogram(
            counts={k: c * factor for k, c in self.counts.items()},
            starting_degree=self.starting_degree,
        )

    def require_data(self):
        if self.is_empty:
            raise DataError("histogram is empty", code='empty_input')


@dataclass(frozen=True)
class EnsemblePmf:
    """
    The average of per-run empirical pmfs over k_min..k_max, with the
    cross-run variance of every bin and the mean effective γ (S_N / N).

    `top_decile_variance` is the cross-run variance of the degree of the
    r-th best connected node, averaged over the ranks r in the top decile
    of nodes; None when the runs did not record it.
    """

    k_min: int
    mean_pmf: np.ndarray
    per_bin_variance: np.ndarray
    runs: int
    effective_gamma: Optional[float] = None
    top_decile_variance: Optional[float] = None

    @property
    def k_max(self) -> int:
        return self.k_min + len(self.mean_pmf) - 1

    @property
    def degrees(self) -> np.ndarray:
        return np.arange(self.k_min, self.k_max + 1)

    def as_pmf(self) -> ClosedFormPmf:
        return ClosedFormPmf(
            k_min=self.k_min,
            probabilities=self.mean_pmf,
            source=PmfSource.SIMULATION,
            params={'runs': self.runs},
        )

    def to_histogram(self, total: int) -> DegreeHistogram:
        """Scale the averaged pmf back to counts (for fitting ensemble output)."""
        counts = np.rint(self.mean_pmf * total).astype(np.int64)
        return DegreeHistogram(
            counts={int(k): int(c) for k, c in zip(self.degrees, counts) if c > 0},
            starting_degree=self.k_min,
        )

