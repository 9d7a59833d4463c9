"""
Tests for the master-equation oracle.
"""

import math

import numpy as np
import pytest

from core.exceptions import ConfigurationError, DomainError
from networks.models import INFINITY, ModelParams, ResidentialCase
from networks.services import ClosedFormService, MasterEquationService
from networks.tests.factories import ModelParamsFactory


@pytest.fixture
def exponential_params():
    return ModelParams(lower_bound=1, lower_threshold=1, upper_threshold=1, upper_bound=1)


@pytest.fixture
def ba_params():
    return ModelParams(lower_bound=1, lower_threshold=1, upper_threshold=INFINITY, upper_bound=INFINITY)


class TestSetup:
    """Test truncation, rates and the initial condition."""

    def test_minimum_k_max(self, ba_params):
        assert MasterEquationService.minimum_k_max(ModelParamsFactory()) == 58
        assert MasterEquationService.minimum_k_max(ba_params) == 200

    def test_rate_vector(self):
        rates = MasterEquationService.rate_vector(ModelParamsFactory(arrival_rate=0.5), 60)
        assert rates[0] == 0.0
        assert rates[1] == rates[2] == 1.0
        assert rates[5] == 2.5
        assert rates[9] == rates[60] == 4.0

    def test_big_bang_state_has_weight_l(self):
        rates = MasterEquationService.rate_vector(ModelParamsFactory(starting_degree=0), 60)
        assert rates[0] == 2.0

    def test_initial_condition(self):
        params = ModelParamsFactory(init_conn_probs=(0.25, 0.75))
        p = MasterEquationService.initial_condition(params, 60)
        assert p[1] == 0.25 and p[2] == 0.75
        assert p.sum() == 1.0

    def test_k_max_below_minimum(self):
        with pytest.raises(ConfigurationError, match='below the minimum'):
            MasterEquationService.integrate_degree_dynamics(ModelParamsFactory(), 1.0, k_max=20)

    def test_stability_bound(self, exponential_params):
        with pytest.raises(ConfigurationError, match='stability'):
            MasterEquationService.integrate_degree_dynamics(exponential_params, 1.0, dt=0.5)

    def test_max_stable_dt(self, ba_params):
        assert MasterEquationService.max_stable_dt(ba_params, 200) == pytest.approx(0.1 / 200)


class TestIntegration:
    """Test the transient solution against known closed forms."""

    def test_time_zero_is_initial_condition(self):
        params = ModelParamsFactory(init_conn_probs=(0.5, 0.5))
        grid = MasterEquationService.integrate_degree_dynamics(params, 1.0)
        expected = MasterEquationService.initial_condition(params, grid.k_max)
        np.testing.assert_array_equal(grid.probabilities[0], expected)

    def test_constant_weight_is_shifted_poisson(self, exponential_params):
        grid = MasterEquationService.integrate_degree_dynamics(exponential_params, 3.0)
        p = grid.at(3.0)
        assert p[1] == pytest.approx(math.exp(-3.0), abs=1e-6)
        assert p[4] == pytest.approx(27 * math.exp(-3.0) / 6, abs=1e-6)

    def test_linear_weight_is_geometric(self, ba_params):
        grid = MasterEquationService.integrate_degree_dynamics(ba_params, 1.0)
        expected = math.exp(-1) * (1 - math.exp(-1))
        assert grid.at(1.0)[2] == pytest.approx(expected, abs=1e-5)

    def test_probability_is_conserved(self, exponential_params):
        grid = MasterEquationService.integrate_degree_dynamics(exponential_params, 10.0, k_max=120)
        np.testing.assert_allclose(grid.mass, 1.0, atol=1e-6)
        assert not grid.leak_warning

    def test_small_k_max_reports_leak(self, exponential_params):
        grid = MasterEquationService.integrate_degree_dynamics(exponential_params, 60.0)
        assert grid.leak > 1e-6
        assert grid.leak_warning

    def test_stored_rows_are_capped(self, exponential_params):
        grid = MasterEquationService.integrate_degree_dynamics(exponential_params, 500.0)
        assert len(grid.times) <= 4001
        assert grid.times[-1] == pytest.approx(500.0)

    def test_big_bang_chain_gives_poisson(self):
        params = ModelParams(
            lower_bound=1, lower_threshold=1, upper_threshold=1, upper_bound=1, starting_degree=0,
        )
        grid = MasterEquationService.integrate_degree_dynamics(params, 2.0)
        pmf = MasterEquationService.degree_pmf_at(grid, 2.0)
        poisson = ClosedFormService.poisson_support_pmf(2.0, grid.k_max)
        assert ClosedFormService.tv_distance(pmf, poisson) < 1e-6

    def test_time_outside_grid(self, exponential_params):
        grid = MasterEquationService.integrate_degree_dynamics(exponential_params, 1.0)
        with pytest.raises(DomainError):
            grid.at(2.0)

    def test_custom_initial_pmf(self, exponential_params):
        grid = MasterEquationService.integrate_degree_dynamics(exponential_params, 1.0, init=[0, 0, 1.0])
        assert grid.probabilities[0][2] == 1.0

    def test_invalid_initial_pmf(self, exponential_params):
        with pytest.raises(ConfigurationError):
            MasterEquationService.integrate_degree_dynamics(exponential_params, 1.0, init=[0.5, 0.2])


class TestStationaryPmf:
    """Test the residential-time average against the collapsed closed forms."""

    def test_exponential_network(self, exponential_params):
        spec = ClosedFormService.residential_time_spec(ResidentialCase.SMALL_U, exponential_params)
        pmf = MasterEquationService.stationary_degree_pmf(
            exponential_params, spec, t_end=40.0, k_max=150, dt=0.02,
        )
        reference = ClosedFormService.exp_network_support_pmf(150)
        assert ClosedFormService.tv_distance(pmf, reference) <= 0.005
        assert pmf.total == pytest.approx(1.0)

    def test_ba_network(self, ba_params):
        spec = ClosedFormService.residential_time_spec(ResidentialCase.BA, ba_params)
        pmf = MasterEquationService.stationary_degree_pmf(ba_params, spec, t_end=6.0, k_max=1000)
        reference = ClosedFormService.ba_support_pmf(1000)
        assert ClosedFormService.tv_distance(pmf, reference) <= 0.005

    def test_dt_halving_converges(self, exponential_params):
        spec = ClosedFormService.residential_time_spec(ResidentialCase.SMALL_U, exponential_params)
        coarse = MasterEquationService.stationary_degree_pmf(
            exponential_params, spec, t_end=10.0, k_max=80, dt=0.005,
        )
        fine = MasterEquationService.stationary_degree_pmf(
            exponential_params, spec, t_end=10.0, k_max=80, dt=0.0025,
        )
        np.testing.assert_allclose(coarse.probabilities, fine.probabilities, atol=1e-5)

    def test_horizon_mismatch(self, exponential_params):
        spec = ClosedFormService.residential_time_spec(
            ResidentialCase.SMALL_U, exponential_params, horizon=5.0,
        )
        with pytest.raises(ConfigurationError, match='does not match'):
            MasterEquationService.stationary_degree_pmf(exponential_params, spec, t_end=10.0)

    def test_infinite_horizon_needs_t_end(self, exponential_params):
        spec = ClosedFormService.residential_time_spec(ResidentialCase.SMALL_U, exponential_params)
        with pytest.raises(ConfigurationError):
            MasterEquationService.stationary_degree_pmf(exponential_params, spec)

    def test_reuses_grid(self, exponential_params):
        grid = MasterEquationService.integrate_degree_dynamics(exponential_params, 30.0, k_max=100)
        spec = ClosedFormService.residential_time_spec(
            ResidentialCase.SMALL_U, exponential_params, horizon=30.0,
        )
        pmf = MasterEquationService.stationary_degree_pmf(exponential_params, spec, grid=grid)
        assert pmf.params['leak'] == grid.leak
        assert pmf.k_min == 1

    def test_bounded_network_matches_trichotomy(self):
        params = ModelParamsFactory()
        spec = ClosedFormService.residential_time_spec(ResidentialCase.CUSTOM, params, gamma=2.477)
        pmf = MasterEquationService.stationary_degree_pmf(params, spec, t_end=15.0, k_max=300)
        reference = ClosedFormService.trichotomy_support_pmf(params, 2.477, 10 ** 5)
        assert ClosedFormService.tv_distance(pmf, reference) <= 0.02
