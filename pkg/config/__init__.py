"""
Import the Celery app with Django so that `networks.tasks.simulate_run`
binds to it and `SimulationService` can dispatch ensemble groups.
"""
from .celery import app as celery_app

__all__ = ('celery_app',)
