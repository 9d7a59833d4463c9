"""
Three-step fitting of a trichotomy degree distribution.

1. Power-law middle: log-log least squares on [ℒ, 𝒰] with a greedy
   boundary search that moves ℒ, then 𝒰, one degree at a time.
2. Head: a mixture of consecutively truncated geometric components with
   parameter p_a = γ/(L+γ), weights fitted by least squares on the
   probability simplex.
3. Tail: a single geometric with p_b = γ/(U+γ) and a coefficient c fitted
   in log space.

L and U are the attachment bounds behind the phases, L ≤ ℒ and 𝒰 ≤ U.
They are anchored at the starting boundaries (given, or read off the
histogram shape) and only move if the search leaves them behind. The
reported ℒ and 𝒰 are the phase splits between the anchors and the
searched segment with the least total RMSE.

Zero-count bins are skipped in every log-space regression. Errors are
reported as RMSE in linear probability space over occupied bins, next to
the RMSE of a single power law fitted to the whole support.
"""

import logging
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np
from django.conf import settings
from scipy.optimize import nnls

from core.exceptions import DomainError, FitError
from networks.models import DegreeHistogram, FitConfig, FitReport, GammaConvention

logger = logging.getLogger(__name__)

PHASE_POWER_LAW = 'power_law'
PHASE_HEAD = 'head'
PHASE_TAIL = 'tail'
PHASE_BASELINE = 'baseline'

MIN_SEGMENT_POINTS = 3
MIN_TAIL_POINTS = 2
SHAPE_BINS = 400
SIMPLEX_PENALTY = 1e4


@dataclass(frozen=True)
class SegmentFit:
    lower: int
    upper: int
    amplitude: float
    gamma: float
    mse: float


@dataclass
class HeadEstimate:
    weights: List[float] = field(default_factory=list)
    parameter: Optional[float] = None
    fitted: Optional[np.ndarray] = None
    clipped: bool = False
    warnings: List[str] = field(default_factory=list)

    @property
    def is_empty(self) -> bool:
        return not self.weights


@dataclass
class TailEstimate:
    coefficient: Optional[float]
    log_coefficient: Optional[float] = None
    parameter: float = 0.0
    skipped: bool = False
    warning: Optional[str] = None


@dataclass
class StitchedFit:
    """One candidate split of the support into head, middle and tail."""

    lower: int
    upper: int
    head: HeadEstimate
    tail: TailEstimate
    fitted: np.ndarray
    rmse: float


def _tolerance() -> float:
    return settings.TRICHONET['BOUNDARY_MSE_TOLERANCE']


class FittingService:
    """
    Service class for fitting trichotomy and power-law models to histograms.
    """

    # Errors

    @staticmethod
    def rmse(fitted, empirical) -> float:
        """√(Σ(ŷ−y)²/n) over the bins where the empirical pmf is positive."""
        fitted = np.asarray(fitted, dtype=float)
        empirical = np.asarray(empirical, dtype=float)
        if fitted.shape != empirical.shape:
            raise DomainError(f"support mismatch: {fitted.shape} vs {empirical.shape}")
        occupied = empirical > 0
        if not occupied.any():
            return 0.0
        residual = fitted[occupied] - empirical[occupied]
        return float(np.sqrt(np.mean(residual ** 2)))

    # Step 1

    @staticmethod
    def segment_regression(
        hist: DegreeHistogram,
        lower: int,
        upper: int,
        phase: str = PHASE_POWER_LAW,
    ) -> SegmentFit:
        """
        Least squares of log p = log a − γ log k over the occupied bins of [lower, upper].

        Raises:
            FitError: If fewer than three occupied bins lie in the segment
        """
        k = np.arange(max(lower, hist.k_min, 1), min(upper, hist.k_max) + 1)
        p = hist.pmf_over(k[0], k[-1]) if k.size else np.zeros(0)
        occupied = p > 0
        if occupied.sum() < MIN_SEGMENT_POINTS:
            raise FitError(
                f"segment [{lower}, {upper}] has {int(occupied.sum())} occupied bins; "
                f"{MIN_SEGMENT_POINTS} needed",
                phase=phase,
            )
        x = np.log(k[occupied])
        y = np.log(p[occupied])
        slope, intercept = np.polyfit(x, y, 1)
        residual = y - (intercept + slope * x)
        return SegmentFit(
            lower=int(lower),
            upper=int(upper),
            amplitude=float(np.exp(intercept)),
            gamma=float(-slope),
            mse=float(np.mean(residual ** 2)),
        )

    @staticmethod
    def initial_boundaries(hist: DegreeHistogram) -> Tuple[int, int]:
        """
        Starting (ℒ₀, 𝒰₀) read off the shape of the histogram.

        On the run of occupied degrees that starts at the mode, log p is
        split into a head linear in k, a middle linear in log k and a tail
        linear in k. The split with the least weighted squared error
        (weights ∝ counts, the inverse variance of a log count) gives ℒ₀ as
        the last head degree and 𝒰₀ as the last middle degree. Runs too
        short for three phases fall back to the whole occupied support.
        """
        k = hist.degrees
        p = hist.pmf
        start = int(np.argmax(np.where(k >= 1, p, -1.0)))
        gaps = np.flatnonzero(p[start:] <= 0)
        end = start + (int(gaps[0]) if gaps.size else p.size - start)
        end = min(end, start + SHAPE_BINS)
        n = end - start

        if n < 1 + MIN_SEGMENT_POINTS + MIN_TAIL_POINTS:
            occupied = k[p > 0]
            return max(int(occupied[0]), 1), int(occupied[-1])

        run_k = k[start:end].astype(float)
        log_p = np.log(p[start:end])
        weights = p[start:end] / p[start:end].max()
        linear = _line_sse(run_k, log_p, weights)
        loglog = _line_sse(np.log(run_k), log_p, weights)

        last_head = np.arange(n)[:, None]
        last_middle = np.arange(n)[None, :]
        feasible = (
            (last_middle - last_head >= MIN_SEGMENT_POINTS)
            & (n - 1 - last_middle >= MIN_TAIL_POINTS)
        )
        total = np.where(
            feasible,
            linear[0, last_head + 1] + loglog[last_head + 1, last_middle + 1] + linear[last_middle + 1, n],
            np.inf,
        )
        head_end, middle_end = np.unravel_index(int(np.argmin(total)), total.shape)
        lower, upper = int(run_k[head_end]), int(run_k[middle_end])
        logger.debug(f"Shape split of {n} bins: head to {lower}, middle to {upper}")
        return lower, upper

    @staticmethod
    def fit_power_law_segment(
        hist: DegreeHistogram,
        lower: Optional[int] = None,
        upper: Optional[int] = None,
    ) -> SegmentFit:
        """
        Fit the middle power law and search its boundaries.

        ℒ moves first with 𝒰 fixed (down while the MSE does not grow, then
        up while it strictly shrinks, keeping the better); then 𝒰 moves the
        same way with ℒ fixed. Equal MSE favours the wider segment.

        Args:
            hist: Degree histogram
            lower: Initial ℒ₀ (default: read off the histogram shape)
            upper: Initial 𝒰₀ (default: read off the histogram shape)

        Returns:
            SegmentFit with the final boundaries, amplitude a and γ_fit

        Raises:
            FitError: If the initial segment is degenerate
        """
        hist.require_data()
        lower, upper = _starting_boundaries(hist, lower, upper)

        start = FittingService.segment_regression(hist, lower, upper)
        best = _search_boundary(hist, start, move_lower=True)
        best = _search_boundary(hist, best, move_lower=False)

        logger.info(
            f"Power-law segment [{best.lower}, {best.upper}] slope {-best.gamma:.4f} "
            f"(started at [{lower}, {upper}])"
        )
        return best

    # Step 2

    @staticmethod
    def head_components(
        degrees: np.ndarray,
        count: int,
        parameter: float,
        convention: str = 'inclusive',
    ) -> np.ndarray:
        """
        Columns of the i-th truncated geometric component, i = 1..count.

        inclusive places component i on k ≥ i, exclusive on k > i.
        """
        shift = 0 if convention == 'inclusive' else 1
        columns = np.zeros((degrees.size, count))
        for i in range(1, count + 1):
            support = degrees >= i + shift
            columns[support, i - 1] = parameter * (1 - parameter) ** (degrees[support] - i)
        return columns

    @staticmethod
    def fit_head(
        hist: DegreeHistogram,
        gamma: float,
        lower_threshold: int,
        max_head_params: int = 1,
        convention: str = 'inclusive',
        lower_bound: Optional[int] = None,
    ) -> HeadEstimate:
        """
        Fit the head mixture on [k_min, ℒ] with p_a = γ/(L+γ).

        With n free weights p_1⁰..p_n⁰ the (n+1)-th component carries the
        remaining 1 − Σ p_i⁰, and all n+1 weights stay on the probability
        simplex. Starting from n = 1, a further weight is added only while
        it improves the head RMSE by more than the remainder threshold, up
        to max_head_params.

        Args:
            lower_bound: L in p_a (default: ℒ)

        Returns:
            HeadEstimate (empty when ℒ < 2); `clipped` is set when the
            unconstrained least-squares weights left the simplex
        """
        if lower_threshold < 2:
            return HeadEstimate(warnings=[f"ℒ={lower_threshold} < 2: no head phase"])
        if not gamma > 0:
            raise FitError(f"γ={gamma} must be positive", phase=PHASE_HEAD)

        bound = lower_threshold if lower_bound is None else lower_bound
        parameter = gamma / (bound + gamma)
        k = np.arange(max(hist.k_min, 1), lower_threshold + 1)
        target = hist.pmf_over(k[0], k[-1])
        threshold = settings.TRICHONET['HEAD_REMAINDER_THRESHOLD']
        limit = max(1, min(max_head_params, lower_threshold - 1))

        best = None
        for n in range(1, limit + 1):
            raw, weights = _solve_head_weights(k, target, n, parameter, convention)
            fitted = FittingService.head_components(k, n + 1, parameter, convention) @ weights
            error = FittingService.rmse(fitted, target)
            if best is not None:
                best_error = best[2]
                improvement = (best_error - error) / best_error if best_error > 0 else 0.0
                if improvement < threshold:
                    break
            best = (raw, weights, error, fitted)
            if error == 0:
                break

        raw, weights, _, fitted = best
        estimate = HeadEstimate(parameter=parameter, weights=weights.tolist(), fitted=fitted)
        if np.any(raw < -1e-9) or np.any(raw > 1 + 1e-9):
            estimate.clipped = True
            estimate.warnings.append(
                f"head weights {np.round(raw, 6).tolist()} projected onto the simplex "
                f"as {np.round(weights, 6).tolist()}"
            )
            logger.debug(f"Head mixture weights projected: {raw.tolist()} -> {weights.tolist()}")
        return estimate

    # Step 3

    @staticmethod
    def fit_tail(
        hist: DegreeHistogram,
        gamma: float,
        upper_threshold: int,
        upper_bound: Optional[int] = None,
    ) -> TailEstimate:
        """
        Fit c in c·p_b(1−p_b)^{k−1}, p_b = γ/(U+γ), on [𝒰, k_max] by log-space least squares.

        Args:
            upper_bound: U in p_b (default: 𝒰)

        Returns:
            TailEstimate; skipped (c undefined) when fewer than two tail bins are occupied
        """
        if not gamma > 0:
            raise FitError(f"γ={gamma} must be positive", phase=PHASE_TAIL)
        bound = upper_threshold if upper_bound is None else upper_bound
        parameter = gamma / (bound + gamma)
        if upper_threshold >= hist.k_max:
            return TailEstimate(
                coefficient=None, parameter=parameter, skipped=True,
                warning=f"𝒰={upper_threshold} leaves no tail below k_max={hist.k_max}",
            )

        k = np.arange(upper_threshold, hist.k_max + 1)
        p = hist.pmf_over(upper_threshold, hist.k_max)
        occupied = p > 0
        if occupied.sum() < MIN_TAIL_POINTS:
            return TailEstimate(
                coefficient=None, parameter=parameter, skipped=True,
                warning=f"tail [{upper_threshold}, {hist.k_max}] has {int(occupied.sum())} occupied bin(s)",
            )

        k, p = k[occupied], p[occupied]
        log_shape = np.log(parameter) + (k - 1) * np.log1p(-parameter)
        log_coefficient = float(np.mean(np.log(p) - log_shape))
        with np.errstate(over='ignore'):
            coefficient = float(np.exp(log_coefficient))
        return TailEstimate(
            coefficient=coefficient, log_coefficient=log_coefficient, parameter=parameter,
        )

    # Baseline

    @staticmethod
    def fit_pure_power_law(hist: DegreeHistogram) -> Tuple[float, float, float]:
        """
        Single power law a·k^{-γ} over the whole occupied support.

        γ is the log-log least-squares slope. a is then the least-squares
        amplitude on the pmf scale, the scale the RMSE is measured on.
        Degrees below 1 are predicted as zero.

        Returns:
            (a, γ, rmse)
        """
        hist.require_data()
        segment = FittingService.segment_regression(
            hist, hist.k_min, hist.k_max, phase=PHASE_BASELINE
        )
        k = hist.degrees
        p = hist.pmf
        positive = k >= 1
        shape = np.zeros(k.size)
        shape[positive] = np.power(k[positive].astype(float), -segment.gamma)

        occupied = positive & (p > 0)
        amplitude = float(np.dot(shape[occupied], p[occupied]) / np.dot(shape[occupied], shape[occupied]))
        return amplitude, segment.gamma, FittingService.rmse(amplitude * shape, p)

    # Pipeline

    @staticmethod
    def stitch(
        hist: DegreeHistogram,
        segment: SegmentFit,
        gamma: float,
        lower: int,
        upper: int,
        config: FitConfig,
        lower_bound: Optional[int] = None,
        upper_bound: Optional[int] = None,
    ) -> StitchedFit:
        """
        Head mixture on [k_min, ℒ], the segment's power law on (ℒ, 𝒰] and
        the geometric tail on (𝒰, k_max]. A missing head or a skipped tail
        falls back to the power law on that range.
        """
        head = FittingService.fit_head(
            hist, gamma, lower, config.max_head_params, config.mixture_convention,
            lower_bound=lower_bound,
        )
        tail = FittingService.fit_tail(hist, gamma, upper, upper_bound=upper_bound)

        k = hist.degrees
        fitted = np.zeros(k.size)
        positive = k >= 1
        fitted[positive] = segment.amplitude * np.power(k[positive].astype(float), -segment.gamma)
        if not head.is_empty:
            fitted[positive & (k <= lower)] = head.fitted
        if not tail.skipped:
            tail_mask = k > upper
            kt = k[tail_mask].astype(float)
            fitted[tail_mask] = np.exp(
                tail.log_coefficient + np.log(tail.parameter) + (kt - 1) * np.log1p(-tail.parameter)
            )
        return StitchedFit(
            lower=lower, upper=upper, head=head, tail=tail, fitted=fitted,
            rmse=FittingService.rmse(fitted, hist.pmf),
        )

    @staticmethod
    def fit_trichotomy(hist: DegreeHistogram, config: Optional[FitConfig] = None) -> FitReport:
        """
        Run Steps 1 to 3 and assemble the report.

        The bounds are L = min(ℒ₀, ℒ_seg) and U = max(𝒰₀, 𝒰_seg), where
        [ℒ_seg, 𝒰_seg] is the searched power-law segment. Every split ℒ in
        [L, ℒ_seg] and 𝒰 in [𝒰_seg, U] is stitched and the one with the
        least total RMSE is reported; ties keep the widest power law.

        Raises:
            FitError: If Step 1 or the baseline cannot be fitted
        """
        config = config or FitConfig()
        hist.require_data()

        lower0, upper0 = _starting_boundaries(
            hist, config.initial_lower_threshold, config.initial_upper_threshold
        )
        segment = FittingService.fit_power_law_segment(hist, lower0, upper0)
        gamma = segment.gamma
        if config.gamma_convention == GammaConvention.THEOREM:
            gamma = segment.gamma - 1.0
        warnings: List[str] = []
        if not gamma > 0:
            warnings.append(f"γ={gamma:.4f} from slope {-segment.gamma:.4f} is not positive")
            gamma = max(gamma, 1e-6)

        lower_bound = min(lower0, segment.lower)
        upper_bound = max(upper0, segment.upper)
        tolerance = _tolerance()
        best: Optional[StitchedFit] = None
        for lower in range(lower_bound, segment.lower + 1):
            for upper in range(upper_bound, segment.upper - 1, -1):
                candidate = FittingService.stitch(
                    hist, segment, gamma, lower, upper, config,
                    lower_bound=lower_bound, upper_bound=upper_bound,
                )
                if best is None or candidate.rmse < best.rmse - tolerance:
                    best = candidate

        head, tail = best.head, best.tail
        warnings.extend(head.warnings)
        if tail.skipped:
            warnings.append(tail.warning)
            logger.warning(f"Tail fit skipped for {config.dataset}: {tail.warning}")

        k = hist.degrees
        empirical = hist.pmf
        fitted = best.fitted
        head_mask = (k >= 1) & (k <= best.lower)
        middle_mask = (k > best.lower) & (k <= best.upper)
        tail_mask = k > best.upper

        def phase_rmse(mask):
            if not (mask & (empirical > 0)).any():
                return None
            return FittingService.rmse(fitted[mask], empirical[mask])

        pl_amplitude, pl_gamma, pl_rmse = FittingService.fit_pure_power_law(hist)

        report = FitReport(
            dataset=config.dataset,
            lower_threshold=best.lower,
            upper_threshold=best.upper,
            exponent=-segment.gamma,
            amplitude=segment.amplitude,
            gamma=gamma,
            gamma_convention=config.gamma_convention,
            lower_bound=lower_bound,
            upper_bound=upper_bound,
            head_params=head.weights,
            head_parameter=head.parameter,
            tail_coefficient=tail.coefficient,
            tail_parameter=tail.parameter,
            rmse_trichotomy=best.rmse,
            rmse_power_law_only=pl_rmse,
            per_phase_rmse=(phase_rmse(head_mask), phase_rmse(middle_mask), phase_rmse(tail_mask)),
            power_law_amplitude=pl_amplitude,
            power_law_gamma=pl_gamma,
            k_min=hist.k_min,
            k_max=hist.k_max,
            fitted_pmf=fitted,
            empirical_pmf=empirical,
            head_clipped=head.clipped,
            tail_skipped=tail.skipped,
            warnings=warnings,
        )
        logger.info(
            f"Fitted {config.dataset}: ℒ={report.lower_threshold}, 𝒰={report.upper_threshold} "
            f"(L={lower_bound}, U={upper_bound}), exponent {report.exponent:.4f}, "
            f"rmse {report.rmse_trichotomy:.3e} vs power law {report.rmse_power_law_only:.3e}"
        )
        return report


def _starting_boundaries(
    hist: DegreeHistogram,
    lower: Optional[int],
    upper: Optional[int],
) -> Tuple[int, int]:
    """Fill a missing ℒ₀ or 𝒰₀ from the histogram shape and check the pair."""
    if lower is None or upper is None:
        default_lower, default_upper = FittingService.initial_boundaries(hist)
        lower = default_lower if lower is None else lower
        upper = default_upper if upper is None else upper
    lower, upper = int(lower), int(upper)
    if lower >= upper:
        raise FitError(f"need ℒ₀ < 𝒰₀, got {lower} ≥ {upper}", phase=PHASE_POWER_LAW)
    if lower < max(hist.k_min, 1) or upper > hist.k_max:
        raise FitError(
            f"[{lower}, {upper}] leaves the support {hist.k_min}..{hist.k_max}",
            phase=PHASE_POWER_LAW,
        )
    return lower, upper


def _search_boundary(hist: DegreeHistogram, start: SegmentFit, move_lower: bool) -> SegmentFit:
    """Greedy one-boundary search: wider while MSE does not grow, narrower while it shrinks."""
    tolerance = _tolerance()
    widen = -1 if move_lower else 1

    def walk(step: int, wider: bool) -> SegmentFit:
        current = start
        while True:
            lower = current.lower + (step if move_lower else 0)
            upper = current.upper + (0 if move_lower else step)
            if lower < max(hist.k_min, 1) or upper > hist.k_max or lower >= upper:
                return current
            try:
                candidate = FittingService.segment_regression(hist, lower, upper)
            except FitError:
                return current
            accepted = (
                candidate.mse <= current.mse + tolerance if wider
                else candidate.mse < current.mse - tolerance
            )
            if not accepted:
                return current
            current = candidate

    wide = walk(widen, wider=True)
    narrow = walk(-widen, wider=False)
    if narrow.mse < wide.mse - tolerance:
        return narrow
    return wide


def _solve_head_weights(k, target, free, parameter, convention) -> Tuple[np.ndarray, np.ndarray]:
    """
    Weights p_1⁰..p_{n+1}⁰ of the head mixture.

    Returns the unconstrained least-squares solution (last weight 1 − Σ)
    and the nonnegative solution, whose unit sum is enforced by a heavily
    weighted extra row.
    """
    columns = FittingService.head_components(k, free + 1, parameter, convention)
    last = columns[:, -1]
    solution, *_ = np.linalg.lstsq(columns[:, :-1] - last[:, None], target - last, rcond=None)
    raw = np.append(solution, 1.0 - solution.sum())

    scale = SIMPLEX_PENALTY * max(1.0, float(np.abs(columns).max()))
    design = np.vstack([columns, np.full(free + 1, scale)])
    weights, _ = nnls(design, np.append(target, scale))
    return raw, weights / weights.sum()


def _line_sse(x: np.ndarray, y: np.ndarray, w: np.ndarray) -> np.ndarray:
    """
    Weighted residual sum of squares of a line y ~ x on every run of positions.

    Entry [i, j] covers positions i..j−1 and comes from running sums, so
    the whole table costs O(n²). Empty runs are inf.
    """
    x = x - x.mean()
    y = y - y.mean()
    s, sx, sy, sxx, sxy, syy = (
        _run_sums(v) for v in (w, w * x, w * y, w * x * x, w * x * y, w * y * y)
    )
    with np.errstate(divide='ignore', invalid='ignore'):
        vxx = sxx - sx * sx / s
        vxy = sxy - sx * sy / s
        vyy = syy - sy * sy / s
        explained = np.where(vxx > 0, vxy * vxy / vxx, 0.0)
        sse = np.maximum(vyy - explained, 0.0)
    return np.where(s > 0, sse, np.inf)


def _run_sums(values: np.ndarray) -> np.ndarray:
    cumulative = np.concatenate([[0.0], np.cumsum(values)])
    return cumulative[None, :] - cumulative[:, None]
