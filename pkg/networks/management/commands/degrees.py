"""
Management command to turn an edge list into a degree histogram.

Usage:
    python manage.py degrees --edges edges.txt --output degrees.csv
    python manage.py degrees --edges follows.tsv --delimiter tab --directed --degree-mode in
"""

from pathlib import Path

from networks.management.commands._base import TrichonetCommand
from networks.services import IngestService


class Command(TrichonetCommand):
    help = 'Write the sorted degree,count histogram of an edge list'

    default_output_name = 'degrees.csv'

    def add_arguments(self, parser):
        parser.add_argument('--edges', type=Path, required=True, help='Edge list file')
        self.add_edge_list_arguments(parser)
        self.add_output_argument(parser)

    def run(self, **options):
        spec = self.edge_list_spec(options['edges'], options)
        hist = IngestService.parse_edge_list(spec)
        self.stdout.write(f"{hist.total} nodes, degrees {hist.k_min}..{hist.k_max}")

        output = self.output_path(options)
        table = IngestService.emit_histogram(hist, output)
        return [table, self.write_manifest(output, options, [table])]
