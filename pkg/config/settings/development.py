"""
Development settings - extends base settings with development-specific configurations.
"""

from .base import *

DEBUG = True

# Ensembles run in-process unless a worker is explicitly configured.
# Set CELERY_TASK_ALWAYS_EAGER=False and a broker URL to use a real worker.
CELERY_TASK_ALWAYS_EAGER = config('CELERY_TASK_ALWAYS_EAGER', default=True, cast=bool)

LOGGING['handlers']['console']['formatter'] = 'verbose'
