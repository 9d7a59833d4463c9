"""
Closed-form degree distributions of the bounded attachment model.

Every evaluator works in log space (log-gamma for factorial and Gamma
ratios) and exponentiates once per value, so large degrees never overflow.
Vectors over a whole support are returned as ClosedFormPmf; the per-degree
evaluators are thin lookups on top of them.
"""

import logging
import math
from functools import lru_cache
from typing import Optional, Sequence, Tuple, Union

import numpy as np
from scipy.special import gammaln

from core.exceptions import DomainError, ParameterError
from networks.models import (
    ClosedFormPmf,
    GammaExponent,
    ModelParams,
    PmfSource,
    ResidentialCase,
    ResidentialTimeSpec,
    is_infinite,
)

logger = logging.getLogger(__name__)

GammaLike = Union[GammaExponent, float]


class MixtureConvention:
    """Upper index of the truncated-geometric head mixture."""
    EXCLUSIVE = 'exclusive'  # Σ_{i=1}^{k-1}
    INCLUSIVE = 'inclusive'  # Σ_{i=1}^{k}
    CHOICES = (EXCLUSIVE, INCLUSIVE)


def _probability_vector(init_probs: Sequence[float]) -> np.ndarray:
    probs = np.asarray(init_probs, dtype=float)
    if probs.ndim != 1 or probs.size == 0:
        raise ParameterError("initial connection probabilities must be a non-empty vector")
    if np.any(probs < 0):
        raise ParameterError("initial connection probabilities must be nonnegative")
    if abs(math.fsum(probs) - 1.0) > 1e-12:
        raise ParameterError(f"initial connection probabilities must sum to 1, got {probs.sum()!r}")
    return probs


def support_vector(pmf) -> Tuple[int, np.ndarray]:
    """(k_min, dense probability vector) of any pmf-like object."""
    if isinstance(pmf, ClosedFormPmf):
        return pmf.k_min, pmf.probabilities
    if hasattr(pmf, 'mean_pmf'):
        return pmf.k_min, np.asarray(pmf.mean_pmf, dtype=float)
    if hasattr(pmf, 'counts'):
        return pmf.k_min, pmf.pmf
    if isinstance(pmf, dict):
        if not pmf:
            return 0, np.zeros(0)
        k_min, k_max = min(pmf), max(pmf)
        vector = np.zeros(k_max - k_min + 1)
        for k, p in pmf.items():
            vector[k - k_min] = p
        return k_min, vector
    k_min, vector = pmf
    return int(k_min), np.asarray(vector, dtype=float)


class ClosedFormService:
    """
    Evaluators for the Poisson, exponential, power-law, truncated mixture
    and trichotomy distributions, plus the residential-time densities.
    """

    # Modified degree

    @staticmethod
    def modified_degree(k: int, params: ModelParams) -> int:
        return params.modified_degree(k)


    @staticmethod
    def poisson_network_pmf(k: int, mean: float) -> float:
        """mean^k e^{-mean} / k!, evaluated in log space."""
        if not mean > 0:
            raise ParameterError(f"Poisson mean must be positive, got {mean}")
        if k < 0:
            raise DomainError(f"degree must be nonnegative, got {k}")
        return float(np.exp(k * math.log(mean) - mean - gammaln(k + 1)))

    @staticmethod
    def poisson_support_pmf(mean: float, k_max: int) -> ClosedFormPmf:
        """Poisson pmf over 0..k_max; mean 0 is the point mass at degree 0."""
        if mean < 0:
            raise ParameterError(f"Poisson mean must be nonnegative, got {mean}")
        if mean == 0:
            probabilities = np.zeros(k_max + 1)
            probabilities[0] = 1.0
        else:
            k = np.arange(k_max + 1)
            probabilities = np.exp(k * math.log(mean) - mean - gammaln(k + 1))
        return ClosedFormPmf(
            k_min=0, probabilities=probabilities,
            source=PmfSource.POISSON, params={'mean': mean},
        )

    @staticmethod
    def exp_network_pmf(k: int) -> float:
        """geom(1/2) on k ≥ 1: 2^{-k}."""
        if k < 1:
            raise DomainError(f"exponential network pmf needs k ≥ 1, got {k}")
        return math.ldexp(1.0, -k)

    @staticmethod
    def exp_network_support_pmf(k_max: int) -> ClosedFormPmf:
        k = np.arange(1, k_max + 1)
        return ClosedFormPmf(
            k_min=1, probabilities=np.exp2(-k.astype(float)),
            source=PmfSource.EXP_NETWORK,
        )

    @staticmethod
    def truncated_geometric(k: int, i: int, p: float) -> float:
        """The i-th truncated geometric component p(1-p)^{k-i} for k ≥ i."""
        if not 0 < p <= 1:
            raise ParameterError(f"geometric parameter must lie in (0, 1], got {p}")
        if k < i:
            return 0.0
        return p * (1 - p) ** (k - i)

    @staticmethod
    def trunc_geom_mixture_pmf(
        k: int,
        init_probs: Sequence[float],
        convention: str = MixtureConvention.EXCLUSIVE,
    ) -> float:
        """
        Mixture of consecutively truncated geom(1/2) components.

        EXCLUSIVE sums i = 1..k-1 (so k = 1 gives 0), INCLUSIVE sums i = 1..k.
        """
        if k < 1:
            raise DomainError(f"mixture pmf needs k ≥ 1, got {k}")
        if convention not in MixtureConvention.CHOICES:
            raise ParameterError(f"unknown mixture convention {convention!r}")
        probs = _probability_vector(init_probs)
        upper = k - 1 if convention == MixtureConvention.EXCLUSIVE else k
        upper = min(upper, probs.size)
        if upper < 1:
            return 0.0
        i = np.arange(1, upper + 1)
        return float(np.sum(probs[:upper] * 0.5 * np.exp2(-(k - i).astype(float))))

    @staticmethod
    def trunc_geom_mixture_support_pmf(
        init_probs: Sequence[float],
        k_max: int,
        convention: str = MixtureConvention.EXCLUSIVE,
    ) -> ClosedFormPmf:
        probabilities = [
            ClosedFormService.trunc_geom_mixture_pmf(k, init_probs, convention)
            for k in range(1, k_max + 1)
        ]
        return ClosedFormPmf(
            k_min=1, probabilities=probabilities,
            source=PmfSource.TRUNC_GEOM_MIXTURE,
            params={'init_probs': list(init_probs), 'convention': convention},
        )


    @staticmethod
    def ba_power_law_pmf(k: int) -> float:
        """4 / (k(k+1)(k+2))."""
        if k < 1:
            raise DomainError(f"power-law pmf needs k ≥ 1, got {k}")
        return 4.0 / (k * (k + 1) * (k + 2))

    @staticmethod
    def ba_support_pmf(k_max: int) -> ClosedFormPmf:
        k = np.arange(1, k_max + 1, dtype=float)
        return ClosedFormPmf(
            k_min=1, probabilities=4.0 / (k * (k + 1) * (k + 2)),
            source=PmfSource.BA_POWER_LAW,
        )

    @staticmethod
    def trunc_power_law_mixture_pmf(k: int, init_probs: Sequence[float]) -> float:
        """Σ_{i=1}^{k} p_i (2/(2+i)) Π_{j=i}^{k-1} j/(j+3)."""
        if k < 1:
            raise DomainError(f"mixture pmf needs k ≥ 1, got {k}")
        probs = _probability_vector(init_probs)
        upper = min(k, probs.size)
        i = np.arange(1, upper + 1, dtype=float)
        log_product = (gammaln(k) - gammaln(i)) - (gammaln(k + 3) - gammaln(i + 3))
        terms = probs[:upper] * (2.0 / (2.0 + i)) * np.exp(log_product)
        return float(terms.sum())

    @staticmethod
    def trunc_power_law_mixture_support_pmf(init_probs: Sequence[float], k_max: int) -> ClosedFormPmf:
        probabilities = [
            ClosedFormService.trunc_power_law_mixture_pmf(k, init_probs)
            for k in range(1, k_max + 1)
        ]
        return ClosedFormPmf(
            k_min=1, probabilities=probabilities,
            source=PmfSource.TRUNC_POWER_LAW_MIXTURE,
            params={'init_probs': list(init_probs)},
        )


    @staticmethod
    def default_gamma(params: ModelParams, network_size: int) -> GammaExponent:
        """γ = L + min(1, U/N), i.e. ≈ L for U ≪ N and L+1 for U ~ N or U = ∞."""
        if network_size < 1:
            raise ParameterError(f"network size must be positive, got {network_size}")
        if is_infinite(params.upper_bound):
            return GammaExponent.for_params(params, params.lower_bound + 1)
        share = min(1.0, params.upper_bound / network_size)
        return GammaExponent.for_params(params, params.lower_bound + share)

    @staticmethod
    def trichotomy_support_pmf(params: ModelParams, gamma: GammaLike, network_size: int) -> ClosedFormPmf:
        """
        The normalized three-branch pmf over 1..N.

        Geometric head up to ℒ, power law with slope -(γ+1) up to 𝒰,
        geometric tail beyond 𝒰.
        """
        gamma = ClosedFormService._coerce_gamma(params, gamma)
        if network_size < 1:
            raise ParameterError(f"network size must be positive, got {network_size}")
        log_pmf = _trichotomy_log_terms(params, gamma, int(network_size))
        log_pmf = log_pmf - log_pmf.max()
        weights = np.exp(log_pmf)
        probabilities = weights / math.fsum(weights)
        return ClosedFormPmf(
            k_min=1, probabilities=probabilities,
            source=PmfSource.TRICHOTOMY,
            params={**params.as_dict(), 'gamma': gamma, 'network_size': int(network_size)},
        )

    @staticmethod
    def trichotomy_pmf(k: int, params: ModelParams, gamma: GammaLike, network_size: int) -> float:
        gamma = ClosedFormService._coerce_gamma(params, gamma)
        if not 1 <= k <= network_size:
            raise DomainError(f"degree {k} outside support 1..{network_size}")
        return _cached_trichotomy(params, gamma, int(network_size)).at(k)

    @staticmethod
    def _coerce_gamma(params: ModelParams, gamma: GammaLike) -> float:
        if isinstance(gamma, GammaExponent):
            gamma = gamma.gamma
        return float(GammaExponent.for_params(params, gamma))

    # Residential time

    @staticmethod
    def residential_time_spec(
        case: str,
        params: ModelParams,
        horizon: float = math.inf,
        gamma: Optional[GammaLike] = None,
    ) -> ResidentialTimeSpec:
        """Exponential law with rate 2λ, λ(L+1), λL or λγ depending on the case."""
        lam, L = params.arrival_rate, params.lower_bound
        if case == ResidentialCase.BA:
            rate = 2 * lam
        elif case == ResidentialCase.LARGE_U:
            rate = lam * (L + 1)
        elif case == ResidentialCase.SMALL_U:
            rate = lam * L
        elif case == ResidentialCase.CUSTOM:
            if gamma is None:
                raise ParameterError("the custom residential-time case needs an explicit γ")
            gamma = ClosedFormService._coerce_gamma(params, gamma)
            rate = lam * gamma
        else:
            raise ParameterError(f"unknown residential-time case {case!r}")
        gamma_value = float(gamma) if gamma is not None else None
        return ResidentialTimeSpec(case=case, rate=rate, horizon=horizon, gamma=gamma_value)

    @staticmethod
    def residential_time_density(t, spec: ResidentialTimeSpec):
        """rate·e^{-rate·t} / (1 - e^{-rate·𝒯}) on [0, 𝒯]; accepts scalars or arrays."""
        values = np.asarray(t, dtype=float)
        if np.any(values < 0) or np.any(values > spec.horizon):
            raise DomainError(f"time outside [0, {spec.horizon}]")
        density = spec.rate * np.exp(-spec.rate * values) / spec.normalization
        return float(density) if density.ndim == 0 else density

    # Comparison helpers

    @staticmethod
    def tv_distance(p, q) -> float:
        """Half the L1 distance over the union of both supports."""
        p_min, p_vec = support_vector(p)
        q_min, q_vec = support_vector(q)
        lo = min(p_min, q_min)
        hi = max(p_min + p_vec.size, q_min + q_vec.size)
        left = np.zeros(hi - lo)
        right = np.zeros(hi - lo)
        left[p_min - lo:p_min - lo + p_vec.size] = p_vec
        right[q_min - lo:q_min - lo + q_vec.size] = q_vec
        return 0.5 * float(np.abs(left - right).sum())

    @staticmethod
    def loglog_slope(pmf, k_lo: int, k_hi: int) -> float:
        """OLS slope of log p against log k over the occupied bins of [k_lo, k_hi]."""
        k_min, vector = support_vector(pmf)
        k = np.arange(k_min, k_min + vector.size)
        mask = (k >= max(k_lo, 1)) & (k <= k_hi) & (vector > 0)
        if mask.sum() < 2:
            raise DomainError(f"fewer than two occupied bins in [{k_lo}, {k_hi}]")
        slope, _ = np.polyfit(np.log(k[mask]), np.log(vector[mask]), 1)
        return float(slope)


@lru_cache(maxsize=32)
def _cached_trichotomy(params: ModelParams, gamma: float, network_size: int) -> ClosedFormPmf:
    return ClosedFormService.trichotomy_support_pmf(params, gamma, network_size)


def _trichotomy_log_terms(params: ModelParams, gamma: float, network_size: int) -> np.ndarray:
    """Unnormalized log p_k for k = 1..N."""
    L = params.lower_bound
    LL = params.lower_threshold
    UU = params.upper_threshold
    U = params.upper_bound
    k = np.arange(1, network_size + 1, dtype=float)

    log_ratio = math.log(L / (gamma + L))
    log_head_param = math.log(gamma / (gamma + L))
    # log of (γ/L)·(L/(γ+L))^ℒ·Γ(γ+ℒ+1)/(ℒ-1)!, shared by middle and tail
    log_middle_const = (
        math.log(gamma / L) + LL * log_ratio
        + gammaln(gamma + LL + 1) - gammaln(LL)
    )

    def log_middle(x):
        return log_middle_const + gammaln(x) - gammaln(x + gamma + 1)

    log_pmf = np.empty_like(k)
    head = k <= LL
    log_pmf[head] = log_head_param + (k[head] - 1) * log_ratio

    if is_infinite(UU):
        middle = ~head
        tail = np.zeros_like(head)
    else:
        middle = (k > LL) & (k <= UU)
        tail = k > UU
    log_pmf[middle] = log_middle(k[middle])

    if tail.any():
        log_at_threshold = float(log_middle(float(UU)))
        log_pmf[tail] = (
            math.log(gamma / (gamma + U))
            + (k[tail] - UU - 1) * math.log(U / (gamma + U))
            + math.log(UU / gamma)
            + log_at_threshold
        )
    return log_pmf
