"""
Management command to fit the trichotomy to an empirical degree distribution.

Usage:
    python manage.py fit --hist degrees.csv --dataset twitter
    python manage.py fit --edges edges.txt --directed --degree-mode in
    python manage.py fit --pmf output/simulation.csv --gamma-convention theorem
"""

from pathlib import Path

from django.conf import settings

from core.formatting import write_table
from networks.management.commands._base import TrichonetCommand
from networks.models import FitConfig, GammaConvention
from networks.serializers import FitReportSerializer
from networks.services import FittingService, IngestService, MixtureConvention


class Command(TrichonetCommand):
    help = 'Fit head, power-law and tail phases to a degree distribution and write the report'

    default_output_name = 'fit.json'

    def add_arguments(self, parser):
        source = parser.add_mutually_exclusive_group(required=True)
        source.add_argument('--hist', type=Path, help='Histogram CSV with columns degree,count')
        source.add_argument('--edges', type=Path, help='Edge list file')
        source.add_argument('--pmf', type=Path, help='pmf table written by simulate or eval')
        self.add_edge_list_arguments(parser)

        parser.add_argument('--L0', dest='initial_lower_threshold', type=int, default=None,
                            help='Initial lower boundary ℒ₀ (default: read off the histogram shape)')
        parser.add_argument('--U0', dest='initial_upper_threshold', type=int, default=None,
                            help='Initial upper boundary 𝒰₀ (default: read off the histogram shape)')
        parser.add_argument('--max-head-params', type=int,
                            default=settings.TRICHONET['DEFAULT_MAX_HEAD_PARAMS'],
                            help='Largest number of free head mixture weights')
        parser.add_argument('--gamma-convention', choices=GammaConvention.CHOICES,
                            default=settings.TRICHONET['GAMMA_CONVENTION'])
        parser.add_argument('--mixture-convention', choices=MixtureConvention.CHOICES,
                            default=settings.TRICHONET['MIXTURE_CONVENTION'])
        parser.add_argument('--dataset', default=None, help='Dataset label (default: input file stem)')
        self.add_output_argument(parser)

    def run(self, **options):
        hist, source = self.load_histogram(options)
        config = FitConfig(
            dataset=options['dataset'] or source.stem,
            initial_lower_threshold=options['initial_lower_threshold'],
            initial_upper_threshold=options['initial_upper_threshold'],
            max_head_params=options['max_head_params'],
            gamma_convention=options['gamma_convention'],
            mixture_convention=options['mixture_convention'],
        )

        report = FittingService.fit_trichotomy(hist, config)
        for warning in report.warnings:
            self.stderr.write(self.style.WARNING(warning))
        self.stdout.write(
            f"{report.dataset}: ℒ={report.lower_threshold} 𝒰={report.upper_threshold} "
            f"exponent={report.exponent:.4g} rmse={report.rmse_trichotomy:.3e} "
            f"(power law only {report.rmse_power_law_only:.3e})"
        )

        output = self.output_path(options)
        stem = output.with_suffix('')
        artifacts = [
            self.write_json(output, FitReportSerializer(report).data),
            write_table(
                Path(f"{stem}.curve.csv"),
                {
                    'degree': report.degrees,
                    'empirical': report.empirical_pmf,
                    'fitted': report.fitted_pmf,
                },
                integer_columns=['degree'],
            ),
            write_table(
                Path(f"{stem}.table.csv"),
                {key: [value] for key, value in report.table_row().items()},
                integer_columns=['lower_threshold', 'upper_threshold'],
            ),
        ]
        artifacts.append(self.write_manifest(output, options, artifacts))
        return artifacts

    def load_histogram(self, options):
        if options['hist']:
            return IngestService.parse_histogram(options['hist']), options['hist']
        if options['pmf']:
            return IngestService.parse_pmf_table(options['pmf']), options['pmf']
        spec = self.edge_list_spec(options['edges'], options)
        return IngestService.parse_edge_list(spec), options['edges']
