"""
Management command to run a simulation ensemble.

Usage:
    python manage.py simulate --L 2 --U 8 --n 100000 --runs 10 --seed 42
    python manage.py simulate --L 1 --U 1 --n 5000 --mode poisson-fixed:100
"""

from django.conf import settings

from core.formatting import write_table
from networks.management.commands._base import TrichonetCommand
from networks.models import SimConfig
from networks.serializers import EnsemblePmfSerializer
from networks.services import SimulationService


class Command(TrichonetCommand):
    help = 'Grow an ensemble of bounded preferential-attachment networks and write the mean degree pmf'

    default_output_name = 'simulation.csv'

    def add_arguments(self, parser):
        self.add_model_arguments(parser)
        parser.add_argument('--n', dest='target_size', type=int, required=True, help='Network size N')
        parser.add_argument('--runs', type=int, default=1, help='Ensemble size M (default: 1)')
        parser.add_argument('--seed', type=int, default=0, help='Root RNG seed (default: 0)')
        parser.add_argument(
            '--mode', default='standard',
            help="'standard' or 'poisson-fixed:<count>' (default: standard)",
        )
        parser.add_argument(
            '--threads', type=int, default=None,
            help='Local worker processes (default: TRICHONET_THREADS)',
        )
        parser.add_argument(
            '--backend', choices=['local', 'celery'], default=None,
            help='Ensemble backend (default: TRICHONET_ENSEMBLE_BACKEND)',
        )
        parser.add_argument(
            '--no-tail-variance', dest='record_tail_variance', action='store_false',
            help='Skip the top-decile degree variance across runs',
        )
        self.add_output_argument(parser)

    def run(self, **options):
        params = self.model_params(options)
        mode, fixed_count = SimConfig.parse_mode(options['mode'])
        config = SimConfig(
            params=params,
            target_size=options['target_size'],
            runs=options['runs'],
            mode=mode,
            fixed_count=fixed_count,
            rng_seed=options['seed'],
            record_tail_variance=options['record_tail_variance'],
        )
        threads = options['threads'] or settings.TRICHONET_THREADS

        self.stdout.write(
            f"Simulating {config.runs} run(s) of {params} at N={config.target_size} ({config.mode_label})"
        )
        ensemble = SimulationService.run_ensemble(config, threads=threads, backend=options['backend'])

        output = self.output_path(options)
        table = write_table(
            output,
            {
                'degree': ensemble.degrees,
                'mean_probability': ensemble.mean_pmf,
                'variance': ensemble.per_bin_variance,
            },
            integer_columns=['degree'],
        )
        summary = self.write_json(output.with_suffix('.json'), EnsemblePmfSerializer(ensemble).data)

        if ensemble.effective_gamma is not None:
            self.stdout.write(f"Mean effective γ: {ensemble.effective_gamma:.6g}")
        if ensemble.top_decile_variance is not None:
            self.stdout.write(f"Top-decile degree variance: {ensemble.top_decile_variance:.6g}")

        artifacts = [table, summary]
        options = {**options, 'threads': threads}
        artifacts.append(self.write_manifest(output, options, artifacts, rng_seed=config.rng_seed))
        return artifacts
