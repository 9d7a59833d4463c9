"""
Django settings for the trichonet project.

This is the base settings file that contains common settings for all environments.
Environment-specific settings are in development.py, test.py and production.py.
"""

from pathlib import Path
from decouple import config

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent.parent

# No request handling happens in this project, but Django still wants a key.
SECRET_KEY = config('SECRET_KEY', default='django-insecure-trichonet-local-key')

# Application definition
INSTALLED_APPS = [
    'django.contrib.contenttypes',

    # Third-party apps
    'rest_framework',

    # Local apps
    'core.apps.CoreConfig',
    'networks.apps.NetworksConfig',
]

# Internationalization
LANGUAGE_CODE = 'en-us'
TIME_ZONE = 'UTC'
USE_I18N = False
USE_TZ = True

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'

# Tool version recorded in every run manifest
TRICHONET_VERSION = '1.0.0'

# Worker cap for ensemble runs (the CLI's --threads falls back to this)
TRICHONET_THREADS = config('TRICHONET_THREADS', default=1, cast=int)

# 'local' runs an ensemble on a process pool, 'celery' dispatches a group
TRICHONET_ENSEMBLE_BACKEND = config('TRICHONET_ENSEMBLE_BACKEND', default='local')

# Significant digits of every float written to CSV/JSON
TRICHONET_FLOAT_DIGITS = config('TRICHONET_FLOAT_DIGITS', default=9, cast=int)

TRICHONET_OUTPUT_DIR = Path(config('TRICHONET_OUTPUT_DIR', default=str(BASE_DIR / 'output')))

# Numerical defaults for the services
TRICHONET = {
    # Master-equation integration
    'STABILITY_FACTOR': 0.1,
    'LEAK_TOLERANCE': 1e-6,
    'NEGATIVE_CLIP_TOLERANCE': 1e-12,
    'MIN_KMAX_MARGIN': 50,
    'MIN_KMAX_UNBOUNDED': 200,
    'MAX_STORED_STEPS': 4000,

    # Fitting
    'BOUNDARY_MSE_TOLERANCE': 1e-12,
    'HEAD_REMAINDER_THRESHOLD': 1e-3,
    'DEFAULT_MAX_HEAD_PARAMS': 1,
    'GAMMA_CONVENTION': 'literal',
    'MIXTURE_CONVENTION': 'inclusive',

    # Closed forms
    'NORMALIZATION_TOLERANCE': 1e-12,
}

# Celery Configuration
CELERY_BROKER_URL = config('CELERY_BROKER_URL', default='memory://')
CELERY_RESULT_BACKEND = config('CELERY_RESULT_BACKEND', default='cache+memory://')
CELERY_ACCEPT_CONTENT = ['json']
CELERY_TASK_SERIALIZER = 'json'
CELERY_RESULT_SERIALIZER = 'json'
CELERY_TIMEZONE = TIME_ZONE
CELERY_TASK_TRACK_STARTED = True
CELERY_TASK_TIME_LIMIT = 60 * 60  # one large run should never take an hour
CELERY_RESULT_EXPIRES = 3600  # 1 hour
CELERY_TASK_ALWAYS_EAGER = config('CELERY_TASK_ALWAYS_EAGER', default=False, cast=bool)
CELERY_TASK_EAGER_PROPAGATES = True

# Logging Configuration
LOGS_DIR = BASE_DIR / 'logs'

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'verbose': {
            'format': '{levelname} {asctime} {module} {process:d} {thread:d} {message}',
            'style': '{',
        },
        'simple': {
            'format': '{levelname} {message}',
            'style': '{',
        },
    },
    'handlers': {
        'console': {
            'level': 'INFO',
            'class': 'logging.StreamHandler',
            'formatter': 'simple',
        },
        'file': {
            'level': 'INFO',
            'class': 'logging.handlers.RotatingFileHandler',
            'filename': LOGS_DIR / 'trichonet.log',
            'maxBytes': 1024 * 1024 * 15,  # 15MB
            'backupCount': 10,
            'formatter': 'verbose',
        },
    },
    'root': {
        'handlers': ['console'],
        'level': 'WARNING',
    },
    'loggers': {
        'networks': {
            'handlers': ['console', 'file'],
            'level': config('TRICHONET_LOG_LEVEL', default='INFO'),
            'propagate': False,
        },
        'core': {
            'handlers': ['console', 'file'],
            'level': config('TRICHONET_LOG_LEVEL', default='INFO'),
            'propagate': False,
        },
        'celery': {
            'handlers': ['console', 'file'],
            'level': 'INFO',
            'propagate': False,
        },
    },
}

# Create logs directory if it doesn't exist
LOGS_DIR.mkdir(exist_ok=True)
