"""
Celery configuration for the trichonet project.

This module initializes Celery and configures it to work with Django.
Workers only ever execute independent simulation runs.
"""

import os
from celery import Celery

# Set the default Django settings module for the 'celery' program.
os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'config.settings.development')

app = Celery('trichonet')

# - namespace='CELERY' means all celery-related configuration keys
#   should have a `CELERY_` prefix.
app.config_from_object('django.conf:settings', namespace='CELERY')

# Load task modules from all registered Django apps.
app.autodiscover_tasks()

app.conf.task_routes = {
    'networks.tasks.simulate_run': {'queue': 'simulations'},
}

# A lost worker must not lose a run silently; the run is re-queued instead.
app.conf.task_acks_late = True
app.conf.task_reject_on_worker_lost = True
app.conf.worker_prefetch_multiplier = 1
