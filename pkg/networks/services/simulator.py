"""
Stochastic growth of bounded preferential attachment networks.

Each run starts from the two-node chain (or, in the Poisson fixed-set mode,
from a set of isolated nodes) and adds nodes one at a time. A newcomer
makes m initial connections with probability p_m⁰ and attaches to m
distinct existing nodes, each drawn with probability proportional to its
modified degree. Arrival times are not simulated: attachment probabilities
depend only on the weights.

Ensembles run their members independently (in-process, on a local process
pool or as a Celery group) and reduce the results in run order.
"""

import logging
import time
from concurrent.futures import ProcessPoolExecutor
from typing import Any, Dict, List, Optional

import numpy as np
from django.conf import settings

from core.exceptions import ConfigurationError
from networks.models import EnsemblePmf, GrowthState, SimConfig

logger = logging.getLogger(__name__)

CONSISTENCY_CHECK_INTERVAL = 1000


def run_generator(rng_seed: int, run_index: int) -> np.random.Generator:
    """Generator of run `run_index`; the same stream as SeedSequence(rng_seed).spawn(M)[run_index]."""
    seed_sequence = np.random.SeedSequence(entropy=rng_seed, spawn_key=(run_index,))
    return np.random.default_rng(seed_sequence)


class SimulationService:
    """
    Service class for growing networks and averaging ensembles.
    """

    @staticmethod
    def sample_attachment_target(state: GrowthState, rng: np.random.Generator) -> int:
        """Node i with probability k̂ᵢ / S_n."""
        return state.sample_target(rng.random())

    @staticmethod
    def grow_state(
        config: SimConfig,
        run_index: int = 0,
        check_consistency: bool = False,
    ) -> GrowthState:
        """
        Grow one network to config.target_size nodes.

        Args:
            config: Simulation configuration
            run_index: Index of the run within the ensemble (selects the RNG substream)
            check_consistency: Recompute S_n from scratch every 1000 arrivals

        Returns:
            The final GrowthState
        """
        params = config.params
        rng = run_generator(config.rng_seed, run_index)

        if config.is_poisson_mode:
            state = GrowthState.isolated_nodes(params, config.target_size, config.fixed_count)
        else:
            state = GrowthState.two_node_chain(params, config.target_size)

        start = state.node_count
        arrivals = config.target_size - start
        if arrivals <= 0:
            return state

        probs = np.asarray(params.init_conn_probs, dtype=float)
        if probs.size == 1:
            connections = np.ones(arrivals, dtype=np.int64)
        else:
            connections = rng.choice(np.arange(1, probs.size + 1), size=arrivals, p=probs)
        # early arrivals cannot connect to more nodes than exist
        existing = np.arange(start, start + arrivals)
        connections = np.minimum(connections, existing)

        uniforms = rng.random(int(connections.sum()))
        next_uniform = iter(uniforms.tolist()).__next__

        for arrival, m in enumerate(connections.tolist()):
            targets = state.sample_distinct_targets(m, next_uniform)
            newcomer = state.add_node()
            state.connect(newcomer, targets)
            if check_consistency and (arrival + 1) % CONSISTENCY_CHECK_INTERVAL == 0:
                state.check_consistency()

        if check_consistency:
            state.check_consistency()
        return state

    @staticmethod
    def grow_network(config: SimConfig, run_index: int = 0) -> np.ndarray:
        """
        Degree sequence reported by one run.

        In the Poisson fixed-set mode only the fixed nodes are reported;
        otherwise every node with degree ≥ k⁰.
        """
        state = SimulationService.grow_state(config, run_index)
        degrees = state.degrees
        if config.is_poisson_mode:
            return degrees[:config.fixed_count]
        return degrees[degrees >= config.reported_starting_degree]

    @staticmethod
    def run_single(config: SimConfig, run_index: int) -> Dict[str, Any]:
        """
        One ensemble member as plain data: empirical pmf from k_min and S_N / N.

        With config.record_tail_variance the degrees of the top decile of
        nodes are included too, largest first.
        """
        state = SimulationService.grow_state(config, run_index)
        degrees = state.degrees
        if config.is_poisson_mode:
            degrees = degrees[:config.fixed_count]
        k_min = config.reported_starting_degree
        degrees = degrees[degrees >= k_min]
        counts = np.bincount(degrees)[k_min:]
        result = {
            'run_index': run_index,
            'k_min': k_min,
            'pmf': (counts / counts.sum()).tolist(),
            'effective_gamma': state.effective_gamma,
            'nodes': int(degrees.size),
        }
        if config.record_tail_variance:
            top = int(np.ceil(degrees.size / 10))
            result['top_degrees'] = np.sort(degrees)[::-1][:top].tolist()
        return result

    @staticmethod
    def run_ensemble(
        config: SimConfig,
        threads: Optional[int] = None,
        backend: Optional[str] = None,
    ) -> EnsemblePmf:
        """
        Run M independent growths and average their pmfs.

        Args:
            config: Simulation configuration
            threads: Worker cap for the local backend (default TRICHONET_THREADS)
            backend: 'local' or 'celery' (default TRICHONET_ENSEMBLE_BACKEND)

        Returns:
            EnsemblePmf with per-bin cross-run variance
        """
        threads = threads or settings.TRICHONET_THREADS
        backend = backend or settings.TRICHONET_ENSEMBLE_BACKEND
        started = time.monotonic()

        if backend == 'celery':
            results = SimulationService._run_with_celery(config)
        elif backend == 'local':
            results = SimulationService._run_locally(config, threads)
        else:
            raise ConfigurationError(f"unknown ensemble backend {backend!r}")

        ensemble = SimulationService.reduce_runs(results)
        logger.info(
            f"Ensemble of {config.runs} runs for {config.params} at N={config.target_size} "
            f"finished in {time.monotonic() - started:.2f}s via {backend}"
        )
        return ensemble

    @staticmethod
    def reduce_runs(results: List[Dict[str, Any]]) -> EnsemblePmf:
        """
        Average per-run pmfs in run-index order, padding shorter supports with zeros.

        When every run carries its top-decile degrees, their cross-run
        variance per rank is averaged over the ranks all runs share.
        """
        results = sorted(results, key=lambda r: r['run_index'])
        k_min = results[0]['k_min']
        width = max(len(r['pmf']) for r in results)
        matrix = np.zeros((len(results), width))
        for row, result in enumerate(results):
            matrix[row, :len(result['pmf'])] = result['pmf']

        return EnsemblePmf(
            k_min=k_min,
            mean_pmf=matrix.mean(axis=0),
            per_bin_variance=matrix.var(axis=0),
            runs=len(results),
            effective_gamma=float(np.mean([r['effective_gamma'] for r in results])),
            top_decile_variance=_top_decile_variance(results),
        )

    @staticmethod
    def _run_locally(config: SimConfig, threads: int) -> List[Dict[str, Any]]:
        indices = range(config.runs)
        workers = max(1, min(threads, config.runs))
        if workers == 1:
            return [SimulationService.run_single(config, i) for i in indices]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(SimulationService.run_single, [config] * config.runs, indices))

    @staticmethod
    def _run_with_celery(config: SimConfig) -> List[Dict[str, Any]]:
        # Import here to avoid circular imports
        from celery import group

        from networks.serializers import SimConfigSerializer
        from networks.tasks import simulate_run

        payload = SimConfigSerializer(config).data
        job = group(simulate_run.s(payload, index) for index in range(config.runs))
        return job.apply_async().get(disable_sync_subtasks=False)


def _top_decile_variance(results: List[Dict[str, Any]]) -> Optional[float]:
    if not all('top_degrees' in r for r in results):
        return None
    ranks = min(len(r['top_degrees']) for r in results)
    if ranks == 0:
        return 0.0
    matrix = np.array([r['top_degrees'][:ranks] for r in results], dtype=float)
    return float(matrix.var(axis=0).mean())
