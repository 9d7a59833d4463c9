"""
Shared pytest fixtures.
"""

import pytest


@pytest.fixture
def output_dir(tmp_path, settings):
    """Point TRICHONET_OUTPUT_DIR at a temporary directory."""
    directory = tmp_path / 'output'
    settings.TRICHONET_OUTPUT_DIR = directory
    return directory


@pytest.fixture
def write_file(tmp_path):
    """Write text to a file under tmp_path and return its path."""
    def _write(name, text):
        path = tmp_path / name
        path.write_text(text, encoding='utf-8')
        return path
    return _write


@pytest.fixture
def celery_eager(settings):
    """Run the ensemble through the Celery group backend, executed eagerly."""
    from config.celery import app

    settings.TRICHONET_ENSEMBLE_BACKEND = 'celery'
    previous = app.conf.task_always_eager, app.conf.task_eager_propagates
    app.conf.task_always_eager = True
    app.conf.task_eager_propagates = True
    yield app
    app.conf.task_always_eager, app.conf.task_eager_propagates = previous
