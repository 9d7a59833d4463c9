"""
Tests for serializers.
"""

import json
import math

import numpy as np
import pytest

from core.exceptions import ConfigurationError, ParameterError
from networks.models import INFINITY, ModelParams, RunManifest, SimulationMode
from networks.serializers import (
    ClosedFormPmfSerializer,
    EnsemblePmfSerializer,
    FitReportSerializer,
    ModelParamsSerializer,
    PlainDataField,
    RunManifestSerializer,
    SimConfigSerializer,
    load,
)
from networks.services import ClosedFormService, FittingService
from networks.tests.factories import (
    FitConfigFactory,
    ModelParamsFactory,
    SimConfigFactory,
    exact_histogram,
    piecewise_trichotomy_pmf,
)


class TestModelParamsSerializer:
    """Test ModelParamsSerializer."""

    def test_infinite_bounds_written_as_text(self):
        params = ModelParams(lower_bound=1, lower_threshold=1, upper_threshold=INFINITY, upper_bound=INFINITY)
        data = ModelParamsSerializer(params).data
        assert data['upper_bound'] == 'inf'
        assert data['upper_threshold'] == 'inf'
        assert data['lower_bound'] == 1

    def test_load(self):
        params = load(ModelParamsSerializer, {
            'lower_bound': 2, 'lower_threshold': 3, 'upper_threshold': 9, 'upper_bound': 12,
            'init_conn_probs': [0.5, 0.5],
        }, error_class=ParameterError)
        assert params == ModelParams(
            lower_bound=2, lower_threshold=3, upper_threshold=9, upper_bound=12,
            init_conn_probs=(0.5, 0.5),
        )

    def test_invariant_violation_names_rule(self):
        data = {'lower_bound': 3, 'lower_threshold': 3, 'upper_threshold': 2, 'upper_bound': 2}
        with pytest.raises(ParameterError, match=r'ℒ ≤ 𝒰 violated \(ℒ=3, 𝒰=2\)'):
            load(ModelParamsSerializer, data, error_class=ParameterError)

    def test_invalid_bound_text(self):
        data = {'lower_bound': 1, 'lower_threshold': 1, 'upper_threshold': 'lots', 'upper_bound': 'inf'}
        with pytest.raises(ParameterError, match='upper_threshold'):
            load(ModelParamsSerializer, data, error_class=ParameterError)

    def test_default_error_class(self):
        with pytest.raises(ConfigurationError, match='lower_bound'):
            load(ModelParamsSerializer, {'lower_threshold': 1, 'upper_threshold': 1, 'upper_bound': 1})


class TestSimConfigSerializer:

    def test_payload_round_trip(self):
        params = ModelParams(lower_bound=1, lower_threshold=1, upper_threshold=INFINITY, upper_bound=INFINITY)
        config = SimConfigFactory(params=params, runs=4, rng_seed=99)
        payload = json.loads(json.dumps(SimConfigSerializer(config).data))
        assert load(SimConfigSerializer, payload) == config

    def test_poisson_mode_needs_fixed_count(self):
        payload = SimConfigSerializer(SimConfigFactory()).data
        payload = dict(payload, mode=SimulationMode.POISSON_FIXED_SET, fixed_count=0)
        with pytest.raises(ConfigurationError, match='fixed_count'):
            load(SimConfigSerializer, payload)


class TestArtifactSerializers:
    """Test the JSON artifact serializers."""

    def test_closed_form_pmf(self):
        data = ClosedFormPmfSerializer(ClosedFormService.exp_network_support_pmf(3)).data
        assert data['source'] == 'exp_network'
        assert data['k_min'] == 1 and data['k_max'] == 3
        assert data['probabilities'] == [0.5, 0.25, 0.125]
        assert data['total'] == 0.875

    def test_ensemble_pmf(self):
        from networks.models import EnsemblePmf

        ensemble = EnsemblePmf(
            k_min=1, mean_pmf=np.array([2 / 3, 1 / 3]), per_bin_variance=np.zeros(2), runs=2,
        )
        data = EnsemblePmfSerializer(ensemble).data
        assert data['mean_pmf'] == [0.666666667, 0.333333333]
        assert data['effective_gamma'] is None
        assert data['top_decile_variance'] is None

    def test_manifest(self):
        manifest = RunManifest(
            command='simulate', configuration={'upper_bound': INFINITY, 'runs': np.int64(3)},
            artifacts=['out.csv'], version='1.0.0', rng_seed=5,
        )
        data = RunManifestSerializer(manifest).data
        assert data['configuration'] == {'upper_bound': 'inf', 'runs': 3}
        assert json.dumps(data)

    def test_plain_data_is_json_safe(self):
        value = PlainDataField().to_representation({'nested': (np.float64(0.1), np.bool_(True), None)})
        assert value == {'nested': [0.1, True, None]}


class TestFitReportSerializer:

    @pytest.fixture
    def report(self):
        pmf = piecewise_trichotomy_pmf(lower=5, upper=21, gamma=2.19, k_max=120)
        config = FitConfigFactory(dataset='piecewise', initial_lower_threshold=5, initial_upper_threshold=21)
        return FittingService.fit_trichotomy(exact_histogram(pmf), config)

    def test_round_trip_keeps_table_row(self, report):
        payload = json.loads(json.dumps(FitReportSerializer(report).data))
        serializer = FitReportSerializer(data=payload)
        assert serializer.is_valid(), serializer.errors
        loaded = serializer.save()
        assert loaded.dataset == 'piecewise'
        assert (loaded.lower_threshold, loaded.upper_threshold) == (5, 21)
        assert (loaded.lower_bound, loaded.upper_bound) == (report.lower_bound, report.upper_bound)
        assert loaded.exponent == pytest.approx(report.exponent, rel=1e-8)
        assert loaded.fitted_pmf.shape == report.fitted_pmf.shape

    def test_scalar_fields_suffice(self):
        payload = {
            'dataset': 'minimal', 'lower_threshold': 3, 'upper_threshold': 40,
            'exponent': -2.5, 'amplitude': 0.7, 'gamma': 1.5, 'gamma_convention': 'theorem',
            'rmse_trichotomy': 0.001, 'rmse_power_law_only': 0.01,
        }
        serializer = FitReportSerializer(data=payload)
        assert serializer.is_valid(), serializer.errors
        report = serializer.save()
        assert report.per_phase_rmse == (None, None, None)
        assert report.error_reduction == pytest.approx(0.9)

    def test_unordered_thresholds_rejected(self):
        payload = {
            'dataset': 'bad', 'lower_threshold': 40, 'upper_threshold': 3,
            'exponent': -2.5, 'amplitude': 0.7, 'gamma': 1.5, 'gamma_convention': 'theorem',
            'rmse_trichotomy': 0.001, 'rmse_power_law_only': 0.01,
        }
        assert not FitReportSerializer(data=payload).is_valid()

    def test_infinite_coefficient_as_text(self, report):
        from dataclasses import replace

        data = FitReportSerializer(replace(report, tail_coefficient=math.inf)).data
        assert data['tail_coefficient'] == 'inf'


def test_model_params_factory_serializes():
    data = ModelParamsSerializer(ModelParamsFactory()).data
    assert data['init_conn_probs'] == [1.0]
    assert data['starting_degree'] == 1
