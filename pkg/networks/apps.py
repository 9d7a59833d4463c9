"""
Networks app configuration.
"""

from django.apps import AppConfig


class NetworksConfig(AppConfig):
    name = 'networks'
    verbose_name = 'Bounded preferential attachment networks'
