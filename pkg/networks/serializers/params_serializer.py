"""
Serializers for model parameters and simulation configuration.

These validate command-line and task input. Violations of the model's
invariants come back as validation errors naming the violated rule.
"""

from rest_framework import serializers

from core.exceptions import ConfigurationError, ParameterError
from networks.models import ModelParams, SimConfig, SimulationMode
from networks.serializers.fields import BoundField


class ModelParamsSerializer(serializers.Serializer):
    """Serializer for ModelParams."""

    lower_bound = serializers.IntegerField(min_value=1)
    lower_threshold = serializers.IntegerField(min_value=1)
    upper_threshold = BoundField()
    upper_bound = BoundField()
    arrival_rate = serializers.FloatField(default=1.0)
    init_conn_probs = serializers.ListField(
        child=serializers.FloatField(min_value=0.0),
        default=[1.0],
        allow_empty=False,
    )
    starting_degree = serializers.ChoiceField(choices=[0, 1], default=1)

    def validate(self, attrs):
        """Run the model's own invariant checks."""
        try:
            ModelParams(**attrs)
        except ParameterError as exc:
            raise serializers.ValidationError(exc.detail)
        return attrs

    def create(self, validated_data):
        return ModelParams(**validated_data)


class SimConfigSerializer(serializers.Serializer):
    """Serializer for SimConfig (also the payload of the simulate_run task)."""

    params = ModelParamsSerializer()
    target_size = serializers.IntegerField(min_value=2)
    runs = serializers.IntegerField(min_value=1, default=1)
    mode = serializers.ChoiceField(choices=SimulationMode.choices, default=SimulationMode.STANDARD)
    fixed_count = serializers.IntegerField(min_value=0, default=0)
    rng_seed = serializers.IntegerField(min_value=0, max_value=2 ** 64 - 1, default=0)
    record_tail_variance = serializers.BooleanField(default=True)

    def validate(self, attrs):
        attrs = dict(attrs)
        attrs['params'] = ModelParams(**attrs['params'])
        try:
            SimConfig(**attrs)
        except ConfigurationError as exc:
            raise serializers.ValidationError(exc.detail)
        return attrs

    def create(self, validated_data):
        return SimConfig(**validated_data)


def load(serializer_class, data, error_class=ConfigurationError):
    """
    Validate `data` and build the domain object.

    Raises:
        error_class: With the flattened validation messages
    """
    serializer = serializer_class(data=data)
    if not serializer.is_valid():
        raise error_class(_flatten(serializer.errors))
    return serializer.save()


def _flatten(errors, prefix=''):
    messages = []
    if isinstance(errors, dict):
        for key, value in errors.items():
            label = '' if key == 'non_field_errors' else f"{prefix}{key}: "
            messages.append(_flatten(value, label))
    elif isinstance(errors, list):
        messages.extend(f"{prefix}{_flatten(item)}" for item in errors)
    else:
        return str(errors)
    return '; '.join(message for message in messages if message)
