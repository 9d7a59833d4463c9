"""
Test settings - run Celery tasks inline and keep the console quiet.
"""

from .base import *

DEBUG = False

CELERY_BROKER_URL = 'memory://'
CELERY_RESULT_BACKEND = 'cache+memory://'
CELERY_TASK_ALWAYS_EAGER = True
CELERY_TASK_EAGER_PROPAGATES = True

TRICHONET_THREADS = 1
TRICHONET_ENSEMBLE_BACKEND = 'local'

LOGGING['loggers']['networks']['level'] = 'WARNING'
LOGGING['loggers']['core']['level'] = 'WARNING'
