"""
Serializers for the artifacts the commands write as JSON.
"""

import numpy as np
from rest_framework import serializers

from networks.models import FitReport, GammaConvention, PmfSource
from networks.serializers.fields import FloatListField, PlainDataField, SignificantFloatField


class ClosedFormPmfSerializer(serializers.Serializer):
    """Serializer for ClosedFormPmf (read-only)."""

    source = serializers.ChoiceField(choices=PmfSource.choices)
    k_min = serializers.IntegerField()
    k_max = serializers.IntegerField()
    total = SignificantFloatField()
    probabilities = FloatListField()
    params = PlainDataField()


class EnsemblePmfSerializer(serializers.Serializer):
    """Serializer for EnsemblePmf (read-only)."""

    k_min = serializers.IntegerField()
    k_max = serializers.IntegerField()
    runs = serializers.IntegerField()
    effective_gamma = SignificantFloatField(allow_null=True)
    top_decile_variance = SignificantFloatField(allow_null=True)
    mean_pmf = FloatListField()
    per_bin_variance = FloatListField()


class FitReportSerializer(serializers.Serializer):
    """
    Serializer for FitReport.

    Reading a report back (for comparison tables) only needs the scalar
    fields; the pmf vectors are optional on input.
    """

    dataset = serializers.CharField()
    lower_threshold = serializers.IntegerField(min_value=0)
    upper_threshold = serializers.IntegerField(min_value=1)
    exponent = SignificantFloatField()
    amplitude = SignificantFloatField()
    gamma = SignificantFloatField()
    gamma_convention = serializers.ChoiceField(choices=GammaConvention.CHOICES)
    lower_bound = serializers.IntegerField(allow_null=True, default=None)
    upper_bound = serializers.IntegerField(allow_null=True, default=None)
    head_params = FloatListField(default=list)
    head_parameter = SignificantFloatField(allow_null=True, default=None)
    tail_coefficient = SignificantFloatField(allow_null=True, default=None)
    tail_parameter = SignificantFloatField(allow_null=True, default=None)
    rmse_trichotomy = SignificantFloatField(min_value=0.0)
    rmse_power_law_only = SignificantFloatField(min_value=0.0)
    per_phase_rmse = serializers.ListField(
        child=SignificantFloatField(allow_null=True), min_length=3, max_length=3,
        default=[None, None, None],
    )
    power_law_amplitude = SignificantFloatField(default=0.0)
    power_law_gamma = SignificantFloatField(default=0.0)
    k_min = serializers.IntegerField(default=1)
    k_max = serializers.IntegerField(default=1)
    fitted_pmf = FloatListField(required=False, allow_null=True)
    empirical_pmf = FloatListField(required=False, allow_null=True)
    head_clipped = serializers.BooleanField(default=False)
    tail_skipped = serializers.BooleanField(default=False)
    warnings = serializers.ListField(child=serializers.CharField(), default=list)

    def validate(self, attrs):
        if attrs['lower_threshold'] >= attrs['upper_threshold']:
            raise serializers.ValidationError("ℒ must be below 𝒰")
        return attrs

    def create(self, validated_data):
        data = dict(validated_data)
        for name in ('fitted_pmf', 'empirical_pmf'):
            if data.get(name) is not None:
                data[name] = np.asarray(data[name], dtype=float)
        data['per_phase_rmse'] = tuple(data['per_phase_rmse'])
        return FitReport(**data)


class RunManifestSerializer(serializers.Serializer):
    """Serializer for RunManifest."""

    command = serializers.CharField()
    version = serializers.CharField()
    rng_seed = serializers.IntegerField(allow_null=True, required=False)
    configuration = PlainDataField()
    artifacts = serializers.ListField(child=serializers.CharField())
