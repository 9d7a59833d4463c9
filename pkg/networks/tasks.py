"""
Celery tasks for ensemble simulation.

Each task grows one network. Ensembles dispatch M of them as a group and
reduce the results in run-index order, so the outcome does not depend on
which worker finishes first.
"""

from celery import shared_task
import logging

logger = logging.getLogger(__name__)


@shared_task(bind=True, name='networks.tasks.simulate_run', acks_late=True)
def simulate_run(self, config_payload: dict, run_index: int):
    """
    Grow one network of an ensemble.

    Args:
        config_payload: SimConfigSerializer data of the ensemble
        run_index: Index of the run (selects the RNG substream)

    Returns:
        dict: run_index, k_min, pmf, effective_gamma and nodes of the run
    """
    # Import here to avoid circular imports
    from networks.serializers import SimConfigSerializer, load
    from networks.services import SimulationService

    try:
        config = load(SimConfigSerializer, config_payload)
        result = SimulationService.run_single(config, run_index)
        logger.info(f"Run {run_index} finished: {result['nodes']} nodes reported")
        return result
    except Exception as exc:
        logger.error(f"Error in simulation run {run_index}: {str(exc)}")
        raise
