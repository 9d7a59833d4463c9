"""
Management command to evaluate a closed-form degree distribution.

Usage:
    python manage.py eval --model ba --kmax 1000
    python manage.py eval --model poisson --mean 3
    python manage.py eval --model trichotomy --L 2 --LL 4 --UU 50 --U 60 --n 10000
    python manage.py eval --model mixture-geom --p0 0.5,0.5 --convention inclusive
    python manage.py eval --model residential --L 2 --residential-case small_u
"""

import math

import numpy as np

from core.exceptions import ParameterError
from core.formatting import write_table
from networks.management.commands._base import TrichonetCommand, parse_horizon, parse_probabilities
from networks.models import ResidentialCase
from networks.serializers import ClosedFormPmfSerializer
from networks.services import ClosedFormService, MixtureConvention

MODELS = ['poisson', 'exp', 'ba', 'trichotomy', 'mixture-geom', 'mixture-pl', 'residential']


class Command(TrichonetCommand):
    help = 'Evaluate a closed-form degree pmf (or the residential-time density) on its support'

    default_output_name = 'eval.csv'

    def add_arguments(self, parser):
        parser.add_argument('--model', choices=MODELS, required=True)
        self.add_model_arguments(parser, required=False)
        parser.add_argument('--kmax', type=int, default=100, help='Largest degree evaluated (default: 100)')
        parser.add_argument('--mean', type=float, default=None, help='Mean of the Poisson law')
        parser.add_argument('--gamma', type=float, default=None, help='Exponent γ (default: heuristic)')
        parser.add_argument('--n', dest='network_size', type=int, default=None,
                            help='Network size N of the trichotomy support (default: --kmax)')
        parser.add_argument('--convention', choices=MixtureConvention.CHOICES,
                            default=MixtureConvention.EXCLUSIVE,
                            help='Upper index of the geometric mixture sum')
        parser.add_argument('--residential-case', choices=ResidentialCase.values,
                            default=ResidentialCase.SMALL_U)
        parser.add_argument('--horizon', default='inf', help='Residential horizon 𝒯 (default: inf)')
        parser.add_argument('--t-max', type=float, default=None,
                            help='Largest time evaluated (default: 𝒯, or 10/rate when 𝒯 is infinite)')
        parser.add_argument('--points', type=int, default=201, help='Time grid size (default: 201)')
        self.add_output_argument(parser)

    def run(self, **options):
        model = options['model']
        output = self.output_path(options)

        if model == 'residential':
            artifacts = self.evaluate_residential(output, options)
        else:
            pmf = self.evaluate_pmf(model, options)
            self.stdout.write(
                f"{model}: {pmf.probabilities.size} degrees from {pmf.k_min}, total mass {pmf.total:.9g}"
            )
            artifacts = [
                write_table(
                    output,
                    {'degree': pmf.degrees, 'probability': pmf.probabilities},
                    integer_columns=['degree'],
                ),
                self.write_json(output.with_suffix('.json'), ClosedFormPmfSerializer(pmf).data),
            ]

        artifacts.append(self.write_manifest(output, options, artifacts))
        return artifacts

    def evaluate_pmf(self, model, options):
        k_max = options['kmax']
        if k_max < 1:
            raise ParameterError(f"--kmax must be positive, got {k_max}")

        if model == 'poisson':
            if options['mean'] is None:
                raise ParameterError('--mean is required for the poisson model')
            return ClosedFormService.poisson_support_pmf(options['mean'], k_max)
        if model == 'exp':
            return ClosedFormService.exp_network_support_pmf(k_max)
        if model == 'ba':
            return ClosedFormService.ba_support_pmf(k_max)
        if model == 'mixture-geom':
            return ClosedFormService.trunc_geom_mixture_support_pmf(
                parse_probabilities(options['init_conn_probs']), k_max, options['convention'],
            )
        if model == 'mixture-pl':
            return ClosedFormService.trunc_power_law_mixture_support_pmf(
                parse_probabilities(options['init_conn_probs']), k_max,
            )

        params = self.model_params(options)
        network_size = options['network_size'] or k_max
        gamma = options['gamma']
        if gamma is None:
            gamma = ClosedFormService.default_gamma(params, network_size)
        return ClosedFormService.trichotomy_support_pmf(params, gamma, network_size)

    def evaluate_residential(self, output, options):
        params = self.model_params(options)
        spec = ClosedFormService.residential_time_spec(
            options['residential_case'], params,
            horizon=parse_horizon(options['horizon']),
            gamma=options['gamma'],
        )
        t_max = options['t_max']
        if t_max is None:
            t_max = spec.horizon if math.isfinite(spec.horizon) else 10.0 / spec.rate
        if not 0 < t_max <= spec.horizon:
            raise ParameterError(f"--t-max must lie in (0, {spec.horizon}], got {t_max}")
        if options['points'] < 2:
            raise ParameterError(f"--points must be at least 2, got {options['points']}")

        times = np.linspace(0.0, t_max, options['points'])
        density = ClosedFormService.residential_time_density(times, spec)
        self.stdout.write(f"Residential time ({spec.case}): rate {spec.rate:.6g}, horizon {spec.horizon}")
        return [write_table(output, {'t': times, 'density': density})]
