"""
Core app configuration.

The core app carries no models; it holds the exception hierarchy and the
numeric output formatting every command shares.
"""

from django.apps import AppConfig


class CoreConfig(AppConfig):
    name = 'core'
    verbose_name = 'Trichonet core utilities'
