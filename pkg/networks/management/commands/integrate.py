"""
Management command to integrate the degree master equation.

Usage:
    python manage.py integrate --L 1 --U inf --t-end 20 --kmax 400 --residential-case ba
    python manage.py integrate --L 2 --U 8 --t-end 15 --compare trichotomy --n 1000
    python manage.py integrate --L 1 --U 1 --t-end 5 --at-time 2.5
"""

from core.exceptions import ParameterError
from core.formatting import write_table
from networks.management.commands._base import TrichonetCommand, parse_horizon
from networks.models import ResidentialCase
from networks.serializers import ClosedFormPmfSerializer, PlainDataField
from networks.services import ClosedFormService, MasterEquationService

COMPARISONS = ['exp', 'ba', 'trichotomy']


class Command(TrichonetCommand):
    help = 'Integrate the master equation and average it against the residential-time law'

    default_output_name = 'integrate.csv'

    def add_arguments(self, parser):
        self.add_model_arguments(parser)
        parser.add_argument('--t-end', type=float, required=True, help='Integration horizon')
        parser.add_argument('--dt', type=float, default=None, help='Time step (default: stability limit)')
        parser.add_argument('--kmax', type=int, default=None, help='Degree truncation (default: minimum)')
        parser.add_argument('--residential-case', choices=ResidentialCase.values,
                            default=ResidentialCase.SMALL_U)
        parser.add_argument('--gamma', type=float, default=None, help='γ of the custom residential case')
        parser.add_argument('--horizon', default='inf',
                            help="Residential horizon 𝒯: 'inf' (truncate at --t-end and renormalize) "
                                 "or a value equal to --t-end")
        parser.add_argument('--at-time', type=float, default=None,
                            help='Write the transient pmf p_k(t) at this time instead')
        parser.add_argument('--compare', choices=COMPARISONS, default=None,
                            help='Report the total-variation distance to a closed form')
        parser.add_argument('--n', dest='network_size', type=int, default=None,
                            help='Network size for the trichotomy comparison (default: k_max)')
        self.add_output_argument(parser)

    def run(self, **options):
        params = self.model_params(options)
        grid = MasterEquationService.integrate_degree_dynamics(
            params, t_end=options['t_end'], k_max=options['kmax'], dt=options['dt'],
        )
        self.stdout.write(
            f"Integrated {params} to t={grid.t_end:g} with dt={grid.dt:.4g}, k_max={grid.k_max}"
        )
        if grid.leak_warning:
            self.stderr.write(self.style.WARNING(
                f"Probability leak {grid.leak:.3e} past k_max={grid.k_max}; raise --kmax"
            ))

        if options['at_time'] is not None:
            pmf = MasterEquationService.degree_pmf_at(grid, options['at_time'], params.starting_degree)
        else:
            spec = ClosedFormService.residential_time_spec(
                options['residential_case'], params,
                horizon=parse_horizon(options['horizon']),
                gamma=options['gamma'],
            )
            pmf = MasterEquationService.stationary_degree_pmf(params, spec, grid=grid)

        diagnostics = {
            'leak': grid.leak,
            'leak_warning': grid.leak_warning,
            'dt': grid.dt,
            'k_max': grid.k_max,
        }
        if options['compare']:
            reference = self.reference_pmf(options['compare'], params, grid.k_max, options)
            distance = ClosedFormService.tv_distance(pmf, reference)
            diagnostics['compare'] = options['compare']
            diagnostics['tv_distance'] = distance
            self.stdout.write(f"Total-variation distance to {options['compare']}: {distance:.6g}")

        output = self.output_path(options)
        artifacts = [
            write_table(
                output,
                {'degree': pmf.degrees, 'probability': pmf.probabilities},
                integer_columns=['degree'],
            ),
            self.write_json(
                output.with_suffix('.json'),
                {**ClosedFormPmfSerializer(pmf).data, 'diagnostics': PlainDataField().to_representation(diagnostics)},
            ),
        ]
        artifacts.append(self.write_manifest(output, options, artifacts))
        return artifacts

    def reference_pmf(self, name, params, k_max, options):
        if name == 'exp':
            return ClosedFormService.exp_network_support_pmf(k_max)
        if name == 'ba':
            return ClosedFormService.ba_support_pmf(k_max)
        network_size = options['network_size'] or k_max
        if network_size < 1:
            raise ParameterError(f"--n must be positive, got {network_size}")
        gamma = ClosedFormService.default_gamma(params, network_size)
        return ClosedFormService.trichotomy_support_pmf(params, gamma, network_size)
