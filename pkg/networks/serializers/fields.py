"""
Custom serializer fields for model bounds and floating output.
"""

import math

import numpy as np
from rest_framework import serializers

from core.exceptions import ParameterError
from core.formatting import round_float
from networks.models import INFINITY, is_infinite, parse_bound


class BoundField(serializers.Field):
    """A positive integer bound or "inf"."""

    default_error_messages = {
        'invalid': 'Expected a positive integer or "inf".',
    }

    def to_representation(self, value):
        if is_infinite(value):
            return 'inf'
        return int(value)

    def to_internal_value(self, data):
        try:
            return parse_bound(data)
        except (ParameterError, ValueError, TypeError):
            self.fail('invalid')


class SignificantFloatField(serializers.FloatField):
    """Float written with TRICHONET_FLOAT_DIGITS significant digits; ±inf as strings."""

    def to_representation(self, value):
        value = float(value)
        if math.isinf(value):
            return 'inf' if value > 0 else '-inf'
        return round_float(value)

    def to_internal_value(self, data):
        if isinstance(data, str) and data.strip().lower() in ('inf', '+inf', 'infinity'):
            return INFINITY
        if isinstance(data, str) and data.strip().lower() == '-inf':
            return -INFINITY
        return super().to_internal_value(data)


class FloatListField(serializers.ListField):
    child = SignificantFloatField()

    def to_representation(self, data):
        if isinstance(data, np.ndarray):
            data = data.tolist()
        return super().to_representation(data)


class PlainDataField(serializers.Field):
    """Free-form JSON data (configuration dicts) with JSON-safe numbers."""

    def to_representation(self, value):
        return _json_safe(value)

    def to_internal_value(self, data):
        if not isinstance(data, dict):
            raise serializers.ValidationError('Expected an object.')
        return data


def _json_safe(value):
    if isinstance(value, dict):
        return {str(key): _json_safe(item) for key, item in value.items()}
    if isinstance(value, (list, tuple, np.ndarray)):
        return [_json_safe(item) for item in value]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isinf(value):
            return 'inf' if value > 0 else '-inf'
        return round_float(value)
    if value is None or isinstance(value, str):
        return value
    return str(value)
