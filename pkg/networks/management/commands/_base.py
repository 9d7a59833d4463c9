"""
Shared plumbing of the trichonet management commands.

Every command resolves its options, runs one service call, writes its
artifacts with fixed significant digits and writes a manifest beside the
main output. Failures leave through command_exception_handler, which maps
them to exit status 1 (usage/config), 2 (data) or 3 (numerical).
"""

import json
import sys
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional

from django.conf import settings
from django.core.management.base import BaseCommand, CommandError, CommandParser

from core.exceptions import EXIT_USAGE, ParameterError, command_exception_handler
from networks.models import (
    DegreeMode,
    Delimiter,
    Directedness,
    EdgeListSpec,
    RunManifest,
    SelfLoopPolicy,
)
from networks.serializers import ModelParamsSerializer, RunManifestSerializer, load

IGNORED_OPTIONS = {
    'verbosity', 'settings', 'pythonpath', 'traceback', 'no_color',
    'force_color', 'skip_checks', 'stdout', 'stderr',
}


class UsageErrorParser(CommandParser):
    """Argument errors leave with exit status 1, like every other usage error."""

    def error(self, message):
        if self.called_from_command_line:
            self.print_usage(sys.stderr)
            self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")
        raise CommandError(f"Error: {message}", returncode=EXIT_USAGE)


class TrichonetCommand(BaseCommand):
    """Base class: subclasses implement run(**options) and return the artifact paths."""

    default_output_name = 'output.csv'

    def create_parser(self, prog_name, subcommand, **kwargs):
        parser = super().create_parser(prog_name, subcommand, **kwargs)
        parser.__class__ = UsageErrorParser
        return parser

    def handle(self, *args, **options):
        context = {'command': self.command_name}
        try:
            artifacts = self.run(**options)
        except Exception as exc:
            raise command_exception_handler(exc, context) from exc
        if artifacts:
            self.stdout.write(self.style.SUCCESS(
                'Wrote ' + ', '.join(str(path) for path in artifacts)
            ))

    def run(self, **options) -> List[Path]:
        raise NotImplementedError

    @property
    def command_name(self) -> str:
        return self.__module__.rsplit('.', 1)[-1]

    # Arguments

    def add_output_argument(self, parser):
        parser.add_argument(
            '--output', type=Path, default=None,
            help=f"Output path (default: TRICHONET_OUTPUT_DIR/{self.default_output_name})",
        )

    def add_model_arguments(self, parser, required=True):
        group = parser.add_argument_group('model parameters')
        group.add_argument('--L', dest='lower_bound', type=int, required=required, help='Lower bound L')
        group.add_argument('--LL', dest='lower_threshold', type=int, default=None,
                           help='Lower threshold ℒ (default: L)')
        group.add_argument('--U', dest='upper_bound', default='inf', help='Upper bound U or "inf"')
        group.add_argument('--UU', dest='upper_threshold', default=None,
                           help='Upper threshold 𝒰 or "inf" (default: U)')
        group.add_argument('--lambda', dest='arrival_rate', type=float, default=1.0,
                           help='Normalized arrival rate λ')
        group.add_argument('--p0', dest='init_conn_probs', default='1',
                           help='Comma-separated p_1⁰, p_2⁰, ... (default: 1)')
        isolated = group.add_mutually_exclusive_group()
        isolated.add_argument('--exclude-isolated', dest='starting_degree', action='store_const',
                              const=1, help='Count nodes of degree ≥ 1 only (k⁰ = 1, default)')
        isolated.add_argument('--include-isolated', dest='starting_degree', action='store_const',
                              const=0, help='Count isolated nodes too (k⁰ = 0)')

    def add_edge_list_arguments(self, parser):
        group = parser.add_argument_group('edge list')
        group.add_argument('--delimiter', choices=Delimiter.values, default=Delimiter.AUTO)
        group.add_argument('--directed', action='store_true', help='Treat edges as directed')
        group.add_argument('--degree-mode', choices=DegreeMode.values, default=DegreeMode.TOTAL)
        group.add_argument('--comment-prefix', default='#')
        group.add_argument('--self-loops', choices=SelfLoopPolicy.values, default=SelfLoopPolicy.DROP)
        group.add_argument('--dedup', action='store_true', help='Count repeated edges once')

    # Option resolution

    def model_params(self, options):
        if options['lower_bound'] is None:
            raise ParameterError('--L is required for this model')
        upper_bound = options['upper_bound']
        data = {
            'lower_bound': options['lower_bound'],
            'lower_threshold': options['lower_threshold'] or options['lower_bound'],
            'upper_bound': upper_bound,
            'upper_threshold': options['upper_threshold'] or upper_bound,
            'arrival_rate': options['arrival_rate'],
            'init_conn_probs': parse_probabilities(options['init_conn_probs']),
            'starting_degree': 1 if options['starting_degree'] is None else options['starting_degree'],
        }
        return load(ModelParamsSerializer, data, error_class=ParameterError)

    def edge_list_spec(self, path, options) -> EdgeListSpec:
        return EdgeListSpec(
            path=path,
            delimiter=options['delimiter'],
            directedness=Directedness.DIRECTED if options['directed'] else Directedness.UNDIRECTED,
            degree_mode=options['degree_mode'],
            comment_prefix=options['comment_prefix'],
            self_loop_policy=options['self_loops'],
            dedup=options['dedup'],
        )

    def output_path(self, options) -> Path:
        path = options.get('output') or Path(settings.TRICHONET_OUTPUT_DIR) / self.default_output_name
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        return path

    # Artifacts

    def write_json(self, path: Path, data: Dict[str, Any]) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open('w', encoding='utf-8', newline='\n') as handle:
            json.dump(data, handle, indent=2, sort_keys=True, ensure_ascii=False)
            handle.write('\n')
        return path

    def write_manifest(
        self,
        output: Path,
        options: Dict[str, Any],
        artifacts: Iterable[Path],
        rng_seed: Optional[int] = None,
    ) -> Path:
        """Write <output>.manifest.json with the resolved options."""
        configuration = {
            key: value for key, value in sorted(options.items())
            if key not in IGNORED_OPTIONS
        }
        manifest = RunManifest(
            command=self.command_name,
            configuration=configuration,
            artifacts=[str(path) for path in artifacts],
            version=settings.TRICHONET_VERSION,
            rng_seed=rng_seed,
        )
        path = Path(f"{output}.manifest.json")
        return self.write_json(path, RunManifestSerializer(manifest).data)


def parse_probabilities(text) -> List[float]:
    if isinstance(text, (list, tuple)):
        return [float(value) for value in text]
    try:
        return [float(value) for value in str(text).split(',') if value.strip()]
    except ValueError:
        raise ParameterError(f"--p0 must be comma-separated numbers, got {text!r}") from None


def parse_horizon(text) -> float:
    """A positive time horizon; 'inf' means unbounded."""
    try:
        value = float(text)
    except (TypeError, ValueError):
        raise ParameterError(f"horizon must be a number or 'inf', got {text!r}") from None
    if not value > 0:
        raise ParameterError(f"horizon must be positive, got {value}")
    return value
