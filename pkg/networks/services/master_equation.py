"""
Numerical oracle for the degree master equation.

Integrates dp_k/dt = λ k̂(k-1) p_{k-1} - λ k̂(k) p_k forward in time with a
fixed-step fourth-order Runge-Kutta scheme, then averages p_k(t) against
the residential-time density. Shares no code with the simulator, so the
two can be checked against each other.
"""

import logging
import math
from typing import Optional, Sequence

import numpy as np
from django.conf import settings
from scipy.integrate import trapezoid

from core.exceptions import ConfigurationError, NumericalError
from networks.models import (
    ClosedFormPmf,
    MasterEquationGrid,
    ModelParams,
    PmfSource,
    ResidentialTimeSpec,
    is_infinite,
)
from networks.services.closed_forms import ClosedFormService

logger = logging.getLogger(__name__)


def _numerics(key):
    return settings.TRICHONET[key]


class MasterEquationService:
    """
    Forward integration of the one-dimensional degree dynamics.

    State index k runs over 0..k_max. With k⁰ = 1 state 0 is inert (its
    rate is 0 by convention); with k⁰ = 0 it is the big-bang state, which
    empties at rate λL into state i with probability p_i⁰.
    """

    @staticmethod
    def minimum_k_max(params: ModelParams) -> int:
        if is_infinite(params.upper_threshold):
            return _numerics('MIN_KMAX_UNBOUNDED')
        return int(params.upper_threshold) + _numerics('MIN_KMAX_MARGIN')

    @staticmethod
    def rate_vector(params: ModelParams, k_max: int) -> np.ndarray:
        """λ·k̂(k) for k = 0..k_max, with the inert state below k⁰ set to 0."""
        rates = np.array(
            [params.modified_degree(k) for k in range(k_max + 1)], dtype=float
        ) * params.arrival_rate
        if params.starting_degree == 1:
            rates[0] = 0.0
        return rates

    @staticmethod
    def max_stable_dt(params: ModelParams, k_max: int) -> float:
        """Largest dt with dt·λ·max-rate ≤ the stability factor."""
        peak = MasterEquationService.rate_vector(params, k_max).max()
        return _numerics('STABILITY_FACTOR') / peak

    @staticmethod
    def initial_condition(params: ModelParams, k_max: int) -> np.ndarray:
        """p(0): the big-bang state for k⁰ = 0, else p_i⁰ on degrees 1..ℒ+1."""
        p = np.zeros(k_max + 1)
        if params.starting_degree == 0:
            p[0] = 1.0
        else:
            m = params.max_initial_connections
            p[1:m + 1] = params.init_conn_probs
        return p

    @staticmethod
    def integrate_degree_dynamics(
        params: ModelParams,
        t_end: float,
        k_max: Optional[int] = None,
        dt: Optional[float] = None,
        init: Optional[Sequence[float]] = None,
        store_every: Optional[int] = None,
    ) -> MasterEquationGrid:
        """
        Solve the master equation on [0, t_end].

        Args:
            params: Model parameters (λ and the modified-degree clamp)
            t_end: Horizon 𝒯 (finite)
            k_max: Degree truncation (default: the smallest admissible one)
            dt: Time step (default: the stability limit)
            init: Initial pmf over degrees 0.. (default: big-bang condition)
            store_every: Keep every n-th step (default: at most MAX_STORED_STEPS rows)

        Returns:
            MasterEquationGrid with leak diagnostics

        Raises:
            ConfigurationError: If the stability bound or k_max minimum is violated
            NumericalError: If probabilities go negative beyond tolerance
        """
        if not (t_end > 0 and math.isfinite(t_end)):
            raise ConfigurationError(f"t_end must be positive and finite, got {t_end}")

        minimum = MasterEquationService.minimum_k_max(params)
        k_max = minimum if k_max is None else int(k_max)
        if k_max < minimum:
            raise ConfigurationError(f"k_max={k_max} below the minimum {minimum} for {params}")

        rates = MasterEquationService.rate_vector(params, k_max)
        limit = _numerics('STABILITY_FACTOR') / rates.max()
        if dt is None:
            dt = limit
        if dt <= 0:
            raise ConfigurationError(f"dt must be positive, got {dt}")
        if dt * rates.max() > _numerics('STABILITY_FACTOR') * (1 + 1e-12):
            raise ConfigurationError(
                f"stability bound dt·λ·max-rate ≤ {_numerics('STABILITY_FACTOR')} violated: "
                f"dt={dt}, λ·max-rate={rates.max()} (need dt ≤ {limit:.6g})"
            )

        steps = max(1, math.ceil(t_end / dt - 1e-9))
        dt = t_end / steps
        if store_every is None:
            store_every = max(1, math.ceil(steps / _numerics('MAX_STORED_STEPS')))

        p = MasterEquationService._initial_vector(params, k_max, init)
        derivative = _derivative_function(params, rates)
        clip = _numerics('NEGATIVE_CLIP_TOLERANCE')

        times = [0.0]
        rows = [p.copy()]
        for step in range(1, steps + 1):
            k1 = derivative(p)
            k2 = derivative(p + 0.5 * dt * k1)
            k3 = derivative(p + 0.5 * dt * k2)
            k4 = derivative(p + dt * k3)
            p = p + (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)

            negative = p < 0
            if negative.any():
                if p.min() < -clip:
                    raise NumericalError(
                        f"probability {p.min():.3e} below -{clip} at t={step * dt:.6g}"
                    )
                p[negative] = 0.0

            if step % store_every == 0 or step == steps:
                times.append(step * dt)
                rows.append(p.copy())

        probabilities = np.vstack(rows)
        leak = float(max(0.0, 1.0 - probabilities[-1].sum()))
        leak_warning = leak > _numerics('LEAK_TOLERANCE')
        if leak_warning:
            logger.warning(
                f"Probability leak {leak:.3e} past k_max={k_max} exceeds "
                f"{_numerics('LEAK_TOLERANCE')} for {params}"
            )

        logger.info(f"Integrated master equation for {params}: {steps} steps, leak {leak:.3e}")
        return MasterEquationGrid(
            k_max=k_max,
            dt=dt,
            t_end=float(t_end),
            times=np.asarray(times),
            probabilities=probabilities,
            leak=leak,
            leak_warning=leak_warning,
        )

    @staticmethod
    def degree_pmf_at(grid: MasterEquationGrid, t: float, starting_degree: int = 0) -> ClosedFormPmf:
        """p_k(t) at the stored time nearest t, over degrees k⁰..k_max."""
        row = grid.at(t)
        return ClosedFormPmf(
            k_min=starting_degree,
            probabilities=row[starting_degree:],
            source=PmfSource.MASTER_EQUATION,
            params={'t': float(grid.times[grid.index_of(t)])},
        )

    @staticmethod
    def stationary_degree_pmf(
        params: ModelParams,
        spec: ResidentialTimeSpec,
        t_end: Optional[float] = None,
        k_max: Optional[int] = None,
        dt: Optional[float] = None,
        init: Optional[Sequence[float]] = None,
        grid: Optional[MasterEquationGrid] = None,
    ) -> ClosedFormPmf:
        """
        Average p_k(t) against the residential-time density with the
        trapezoidal rule on the stored grid, then normalize.

        A finite spec horizon must equal the grid horizon. An infinite
        horizon is integrated up to t_end and renormalized.
        """
        horizon = t_end if t_end is not None else spec.horizon
        if grid is not None:
            horizon = grid.t_end
        if not math.isfinite(horizon):
            raise ConfigurationError("an infinite residential horizon needs a finite t_end")
        if math.isfinite(spec.horizon) and not math.isclose(spec.horizon, horizon, rel_tol=1e-9):
            raise ConfigurationError(
                f"residential horizon {spec.horizon} does not match the grid horizon {horizon}"
            )

        if grid is None:
            grid = MasterEquationService.integrate_degree_dynamics(
                params, t_end=horizon, k_max=k_max, dt=dt, init=init,
            )

        density = ClosedFormService.residential_time_density(
            np.minimum(grid.times, spec.horizon), spec
        )
        averaged = trapezoid(grid.probabilities * density[:, None], grid.times, axis=0)
        averaged = np.clip(averaged, 0.0, None)[params.starting_degree:]
        total = averaged.sum()
        if not total > 0:
            raise NumericalError("stationary pmf has zero mass")

        return ClosedFormPmf(
            k_min=params.starting_degree,
            probabilities=averaged / total,
            source=PmfSource.MASTER_EQUATION,
            params={
                **params.as_dict(),
                'case': spec.case,
                'rate': spec.rate,
                'horizon': horizon,
                'leak': grid.leak,
            },
        )

    @staticmethod
    def _initial_vector(params: ModelParams, k_max: int, init) -> np.ndarray:
        if init is None:
            return MasterEquationService.initial_condition(params, k_max)
        init = np.asarray(init, dtype=float)
        if init.size > k_max + 1:
            raise ConfigurationError(f"initial pmf longer than k_max + 1 = {k_max + 1}")
        if np.any(init < 0) or abs(init.sum() - 1.0) > 1e-9:
            raise ConfigurationError("initial pmf must be nonnegative and sum to 1")
        p = np.zeros(k_max + 1)
        p[:init.size] = init
        return p


def _derivative_function(params: ModelParams, rates: np.ndarray):
    """The right-hand side p ↦ dp/dt as a closure over the rate vector."""
    m = params.max_initial_connections
    split = np.asarray(params.init_conn_probs, dtype=float)

    def derivative(p: np.ndarray) -> np.ndarray:
        outflow = rates * p
        d = -outflow
        d[2:] += outflow[1:-1]
        # state 0 feeds the initial-connection states directly
        d[1:m + 1] += outflow[0] * split
        return d

    return derivative
