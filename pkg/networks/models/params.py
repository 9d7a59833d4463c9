"""
Model parameters of the bounded preferential attachment network.

This module defines the five-parameter model (L, ℒ, 𝒰, U, λ), the
power-law exponent γ and the residential-time law used to average
per-node degree dynamics into a network degree distribution.

Fields:
    - lower_bound (L): attachment weight of every node in the initializing phase
    - lower_threshold (ℒ): last degree of the initializing phase
    - upper_threshold (𝒰): last degree of the fast-evolving phase
    - upper_bound (U): frozen attachment weight of super nodes
    - arrival_rate (λ): normalized arrival rate λ₀/L
    - init_conn_probs (p_i⁰): probability of a new node making i initial
      connections, i = 1..ℒ+1
    - starting_degree (k⁰): 1 when only connected nodes are counted, 0 when
      isolated nodes are counted as well
"""

import math
from dataclasses import dataclass, field, replace
from typing import Optional, Tuple, Union

from django.db import models

from core.exceptions import ParameterError

# Infinite bounds are always this float, never a large integer.
INFINITY = math.inf

Bound = Union[int, float]

PROBABILITY_TOLERANCE = 1e-12


def is_infinite(value: Bound) -> bool:
    return isinstance(value, float) and math.isinf(value)


def parse_bound(value) -> Bound:
    """Parse a CLI/JSON bound: 'inf', 'N' and None mean unbounded."""
    if value is None:
        return INFINITY
    if isinstance(value, str):
        text = value.strip().lower()
        if text in ('inf', 'infinity', '∞'):
            return INFINITY
        value = int(text)
    if isinstance(value, float):
        if math.isinf(value):
            return INFINITY
        if not value.is_integer():
            raise ParameterError(f"Bound must be an integer, got {value}")
        value = int(value)
    return int(value)


@dataclass(frozen=True)
class ModelParams:
    """
    The bounded preferential attachment model.

    Invariants (checked at construction):
        L ≤ ℒ ≤ 𝒰 ≤ U, U = ∞ only together with 𝒰 = ∞,
        p_i⁰ ≥ 0 and Σ p_i⁰ = 1, k⁰ ∈ {0, 1}.
    """

    lower_bound: int
    lower_threshold: int
    upper_threshold: Bound
    upper_bound: Bound
    arrival_rate: float = 1.0
    init_conn_probs: Tuple[float, ...] = (1.0,)
    starting_degree: int = 1

    def __post_init__(self):
        object.__setattr__(self, 'upper_threshold', parse_bound(self.upper_threshold))
        object.__setattr__(self, 'upper_bound', parse_bound(self.upper_bound))
        object.__setattr__(self, 'init_conn_probs', tuple(float(p) for p in self.init_conn_probs))
        self.validate()

    def validate(self):
        """Check every invariant; raise ParameterError naming the violated rule."""
        L, LL, UU, U = self.lower_bound, self.lower_threshold, self.upper_threshold, self.upper_bound

        if not isinstance(L, int) or L < 1:
            raise ParameterError(f"lower bound L must be a positive integer, got {L}")
        if not isinstance(LL, int) or LL < 1:
            raise ParameterError(f"lower threshold ℒ must be a positive integer, got {LL}")
        if not is_infinite(UU) and UU < 1:
            raise ParameterError(f"upper threshold 𝒰 must be a positive integer, got {UU}")
        if not is_infinite(U) and U < 1:
            raise ParameterError(f"upper bound U must be a positive integer, got {U}")
        if L > LL:
            raise ParameterError(f"L ≤ ℒ violated (L={L}, ℒ={LL})")
        if LL > UU:
            raise ParameterError(f"ℒ ≤ 𝒰 violated (ℒ={LL}, 𝒰={UU})")
        if UU > U:
            raise ParameterError(f"𝒰 ≤ U violated (𝒰={UU}, U={U})")
        if is_infinite(U) != is_infinite(UU):
            raise ParameterError("U = ∞ is permitted only jointly with 𝒰 = ∞")
        if not self.arrival_rate > 0 or not math.isfinite(self.arrival_rate):
            raise ParameterError(f"arrival rate λ must be positive, got {self.arrival_rate}")
        if self.starting_degree not in (0, 1):
            raise ParameterError(f"starting degree k⁰ must be 0 or 1, got {self.starting_degree}")

        probs = self.init_conn_probs
        if not probs:
            raise ParameterError("init_conn_probs must not be empty")
        if len(probs) > LL + 1:
            raise ParameterError(
                f"init_conn_probs has {len(probs)} entries; at most ℒ+1={LL + 1} allowed"
            )
        if any(p < 0 or not math.isfinite(p) for p in probs):
            raise ParameterError("init_conn_probs entries must be nonnegative")
        if abs(math.fsum(probs) - 1.0) > PROBABILITY_TOLERANCE:
            raise ParameterError(f"init_conn_probs must sum to 1, got {math.fsum(probs)!r}")

    # Properties

    @property
    def is_unbounded(self) -> bool:
        """True when U = 𝒰 = ∞ (no maturing phase)."""
        return is_infinite(self.upper_bound)

    @property
    def max_initial_connections(self) -> int:
        return len(self.init_conn_probs)

    def init_prob(self, i: int) -> float:
        """p_i⁰ for i ≥ 1 (zero outside the declared vector)."""
        if 1 <= i <= len(self.init_conn_probs):
            return self.init_conn_probs[i - 1]
        return 0.0

    def modified_degree(self, k: int) -> Bound:
        """
        The modified degree k̂ of a node with degree k.

        L for k ≤ ℒ (isolated nodes included), k for ℒ < k ≤ 𝒰, U beyond 𝒰.
        The master equation's convention that the state below k⁰ has
        weight 0 lives in its rate vector, not here.
        """
        if k <= self.lower_threshold:
            return self.lower_bound
        if k <= self.upper_threshold:
            return k
        return self.upper_bound

    def with_changes(self, **changes) -> 'ModelParams':
        return replace(self, **changes)

    def as_dict(self) -> dict:
        return {
            'lower_bound': self.lower_bound,
            'lower_threshold': self.lower_threshold,
            'upper_threshold': self.upper_threshold,
            'upper_bound': self.upper_bound,
            'arrival_rate': self.arrival_rate,
            'init_conn_probs': list(self.init_conn_probs),
            'starting_degree': self.starting_degree,
        }

    def __str__(self):
        def show(b):
            return '∞' if is_infinite(b) else str(b)
        return (
            f"(L={self.lower_bound}, ℒ={self.lower_threshold}, "
            f"𝒰={show(self.upper_threshold)}, U={show(self.upper_bound)})"
        )


@dataclass(frozen=True)
class GammaExponent:
    """The exponent γ ∈ [L, L+1]; the middle power law has slope −(γ+1)."""

    gamma: float
    lower_bound: int

    def __post_init__(self):
        if not math.isfinite(self.gamma):
            raise ParameterError(f"γ must be finite, got {self.gamma}")
        if not (self.lower_bound - 1e-12 <= self.gamma <= self.lower_bound + 1 + 1e-12):
            raise ParameterError(
                f"γ={self.gamma} outside [L, L+1] = [{self.lower_bound}, {self.lower_bound + 1}]"
            )

    @classmethod
    def for_params(cls, params: ModelParams, gamma: float) -> 'GammaExponent':
        return cls(gamma=float(gamma), lower_bound=params.lower_bound)

    def __float__(self):
        return float(self.gamma)


class ResidentialCase(models.TextChoices):
    """Which exponential law governs the time a node has spent in the network."""
    BA = 'ba', 'ℒ = 1, 𝒰 = ∞ (rate 2λ)'
    LARGE_U = 'large_u', 'U comparable to N (rate λ(L+1))'
    SMALL_U = 'small_u', 'U ≪ N (rate λL)'
    CUSTOM = 'custom', 'explicit γ (rate λγ)'


@dataclass(frozen=True)
class ResidentialTimeSpec:
    """
    Exponential residential-time law truncated to [0, 𝒯].

    The density rate·e^{−rate·t}/(1 − e^{−rate·𝒯}) integrates to one over
    the horizon; 𝒯 = ∞ is allowed.
    """

    case: str
    rate: float
    horizon: float = INFINITY
    gamma: Optional[float] = field(default=None)

    def __post_init__(self):
        if self.case not in ResidentialCase.values:
            raise ParameterError(f"Unknown residential-time case {self.case!r}")
        if not (self.rate > 0 and math.isfinite(self.rate)):
            raise ParameterError(f"residential-time rate must be positive, got {self.rate}")
        if not self.horizon > 0:
            raise ParameterError(f"horizon 𝒯 must be positive, got {self.horizon}")

    @property
    def normalization(self) -> float:
        """1 − e^{−rate·𝒯}, the mass of the untruncated law inside the horizon."""
        if math.isinf(self.horizon):
            return 1.0
        return -math.expm1(-self.rate * self.horizon)
