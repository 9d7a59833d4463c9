"""
Management command to tabulate fit reports side by side.

Usage:
    python manage.py compare output/fit_twitter.json output/fit_citation.json
"""

import json
from pathlib import Path

from core.exceptions import ConfigurationError, DataError
from core.formatting import format_float, write_table
from networks.management.commands._base import TrichonetCommand
from networks.serializers import FitReportSerializer

TABLE_COLUMNS = ['dataset', 'lower_threshold', 'upper_threshold', 'exponent', 'rmse_ours', 'rmse_pl']


class Command(TrichonetCommand):
    help = 'Build the comparison table (dataset, ℒ, 𝒰, exponent, rmse_ours, rmse_pl) from fit reports'

    default_output_name = 'compare.csv'

    def add_arguments(self, parser):
        parser.add_argument('reports', nargs='*', type=Path, help='Fit report JSON files')
        self.add_output_argument(parser)

    def run(self, **options):
        if not options['reports']:
            raise ConfigurationError('compare needs at least one fit report')

        rows = [load_report(path).table_row() for path in options['reports']]
        for row in rows:
            self.stdout.write(' '.join(
                format_float(row[name]) if isinstance(row[name], float) else str(row[name])
                for name in TABLE_COLUMNS
            ))

        output = self.output_path(options)
        table = write_table(
            output,
            {name: [row[name] for row in rows] for name in TABLE_COLUMNS},
            integer_columns=['lower_threshold', 'upper_threshold'],
        )
        return [table, self.write_manifest(output, options, [table])]


def load_report(path: Path):
    """Read one fit report JSON back into a FitReport."""
    try:
        with Path(path).open(encoding='utf-8') as handle:
            data = json.load(handle)
    except FileNotFoundError:
        raise DataError('file not found', path=path) from None
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise DataError(f"not a JSON report: {exc}", path=path) from None

    serializer = FitReportSerializer(data=data)
    if not serializer.is_valid():
        raise DataError(f"not a fit report: {dict(serializer.errors)}", path=path)
    return serializer.save()
