"""
Tests for the management commands.
"""

import json
from io import StringIO

import pandas as pd
import pytest
from django.core.management import CommandError, call_command, load_command_class


def run(name, *args):
    stdout, stderr = StringIO(), StringIO()
    call_command(name, *args, stdout=stdout, stderr=stderr)
    return stdout.getvalue(), stderr.getvalue()


def read_json(path):
    with open(path, encoding='utf-8') as handle:
        return json.load(handle)


class TestSimulateCommand:
    """Test the simulate command."""

    def test_writes_table_summary_and_manifest(self, output_dir):
        stdout, _ = run('simulate', '--L', '2', '--U', '8', '--n', '1000', '--runs', '2', '--seed', '3')

        table = pd.read_csv(output_dir / 'simulation.csv')
        assert list(table.columns) == ['degree', 'mean_probability', 'variance']
        assert table['mean_probability'].sum() == pytest.approx(1.0, abs=1e-6)

        summary = read_json(output_dir / 'simulation.json')
        assert summary['runs'] == 2
        assert summary['top_decile_variance'] >= 0

        manifest = read_json(output_dir / 'simulation.csv.manifest.json')
        assert manifest['command'] == 'simulate'
        assert manifest['rng_seed'] == 3
        assert manifest['configuration']['upper_bound'] == '8'
        assert 'verbosity' not in manifest['configuration']
        assert 'Mean effective γ' in stdout
        assert 'Top-decile degree variance' in stdout

    def test_no_tail_variance(self, output_dir):
        stdout, _ = run('simulate', '--L', '2', '--n', '500', '--runs', '2', '--no-tail-variance')
        assert read_json(output_dir / 'simulation.json')['top_decile_variance'] is None
        assert 'Top-decile' not in stdout

    def test_same_seed_same_output(self, output_dir, tmp_path):
        args = ['--L', '1', '--U', 'inf', '--n', '800', '--runs', '2', '--seed', '9']
        run('simulate', *args, '--output', str(tmp_path / 'a.csv'))
        run('simulate', *args, '--output', str(tmp_path / 'b.csv'))
        assert (tmp_path / 'a.csv').read_bytes() == (tmp_path / 'b.csv').read_bytes()

    def test_threshold_violation_is_usage_error(self, output_dir):
        with pytest.raises(CommandError, match=r'ℒ ≤ 𝒰 violated \(ℒ=3, 𝒰=2\)') as excinfo:
            run('simulate', '--L', '3', '--U', '2', '--n', '100')
        assert excinfo.value.returncode == 1

    def test_missing_size_is_usage_error(self, output_dir):
        with pytest.raises(CommandError) as excinfo:
            run('simulate', '--L', '2')
        assert excinfo.value.returncode == 1

    def test_bad_probabilities(self, output_dir):
        with pytest.raises(CommandError, match='p0') as excinfo:
            run('simulate', '--L', '2', '--n', '100', '--p0', '0.5,x')
        assert excinfo.value.returncode == 1

    def test_poisson_mode(self, output_dir):
        run('simulate', '--L', '1', '--U', '1', '--n', '400', '--mode', 'poisson-fixed:100')
        table = pd.read_csv(output_dir / 'simulation.csv')
        assert table['degree'].iloc[0] == 0


class TestEvalCommand:
    """Test the eval command."""

    def test_ba_table(self, output_dir):
        run('eval', '--model', 'ba', '--kmax', '10')
        lines = (output_dir / 'eval.csv').read_text(encoding='utf-8').splitlines()
        assert lines[0] == 'degree,probability'
        assert lines[1] == '1,0.666666667'
        assert read_json(output_dir / 'eval.json')['source'] == 'ba_power_law'

    def test_degenerate_poisson(self, output_dir):
        run('eval', '--model', 'poisson', '--mean', '0', '--kmax', '3')
        table = pd.read_csv(output_dir / 'eval.csv')
        assert table['probability'].tolist() == [1.0, 0.0, 0.0, 0.0]

    def test_poisson_needs_mean(self, output_dir):
        with pytest.raises(CommandError, match='--mean') as excinfo:
            run('eval', '--model', 'poisson')
        assert excinfo.value.returncode == 1

    def test_trichotomy_needs_bounds(self, output_dir):
        with pytest.raises(CommandError, match='--L'):
            run('eval', '--model', 'trichotomy')

    def test_trichotomy(self, output_dir):
        run('eval', '--model', 'trichotomy', '--L', '2', '--U', '8', '--n', '200', '--kmax', '200')
        table = pd.read_csv(output_dir / 'eval.csv')
        assert table['probability'].sum() == pytest.approx(1.0, abs=1e-6)

    def test_mixture(self, output_dir):
        run('eval', '--model', 'mixture-geom', '--p0', '0.5,0.5', '--convention', 'inclusive', '--kmax', '200')
        table = pd.read_csv(output_dir / 'eval.csv')
        assert table['probability'].sum() == pytest.approx(1.0, abs=1e-6)

    def test_residential_density(self, output_dir):
        run('eval', '--model', 'residential', '--L', '1', '--U', '1', '--points', '11')
        table = pd.read_csv(output_dir / 'eval.csv')
        assert list(table.columns) == ['t', 'density']
        assert len(table) == 11
        assert table['density'].iloc[0] > table['density'].iloc[-1]

    def test_residential_time_beyond_horizon(self, output_dir):
        with pytest.raises(CommandError, match='t-max'):
            run('eval', '--model', 'residential', '--L', '1', '--U', '1', '--horizon', '2', '--t-max', '3')


class TestIntegrateCommand:
    """Test the integrate command."""

    def test_exponential_network_matches_closed_form(self, output_dir):
        run(
            'integrate', '--L', '1', '--U', '1', '--t-end', '40', '--kmax', '150', '--dt', '0.02',
            '--compare', 'exp',
        )
        summary = read_json(output_dir / 'integrate.json')
        assert summary['diagnostics']['tv_distance'] <= 0.005
        assert summary['diagnostics']['leak_warning'] is False
        assert (output_dir / 'integrate.csv.manifest.json').exists()

    def test_transient_pmf(self, output_dir):
        run('integrate', '--L', '1', '--U', '1', '--t-end', '2', '--at-time', '1')
        table = pd.read_csv(output_dir / 'integrate.csv')
        assert table['probability'].sum() == pytest.approx(1.0, abs=1e-6)

    def test_unstable_step_is_usage_error(self, output_dir):
        with pytest.raises(CommandError, match='stability') as excinfo:
            run('integrate', '--L', '1', '--U', '1', '--t-end', '1', '--dt', '0.5')
        assert excinfo.value.returncode == 1


class TestDegreesAndFitCommands:
    """Test ingest, fitting and comparison from the command line."""

    def test_degrees(self, output_dir, write_file):
        edges = write_file('edges.txt', 'a b\nb c\nc a\na d\n')
        run('degrees', '--edges', str(edges))
        assert (output_dir / 'degrees.csv').read_text(encoding='utf-8') == 'degree,count\n1,1\n2,2\n3,1\n'

    def test_malformed_edge_list_is_data_error(self, output_dir, write_file):
        edges = write_file('edges.txt', 'a b\nlonely\n')
        with pytest.raises(CommandError, match='line 2') as excinfo:
            run('degrees', '--edges', str(edges))
        assert excinfo.value.returncode == 2

    def test_fit_needs_an_input(self, output_dir):
        with pytest.raises(CommandError) as excinfo:
            run('fit')
        assert excinfo.value.returncode == 1

    def test_fit_simulation_output(self, output_dir):
        run('simulate', '--L', '2', '--U', '8', '--n', '5000', '--runs', '2')
        run('fit', '--pmf', str(output_dir / 'simulation.csv'))

        report = read_json(output_dir / 'fit.json')
        assert report['dataset'] == 'simulation'
        assert report['lower_threshold'] < report['upper_threshold']

        table = pd.read_csv(output_dir / 'fit.table.csv')
        assert list(table.columns) == [
            'dataset', 'lower_threshold', 'upper_threshold', 'exponent', 'rmse_ours', 'rmse_pl',
        ]
        curve = pd.read_csv(output_dir / 'fit.curve.csv')
        assert list(curve.columns) == ['degree', 'empirical', 'fitted']

    def test_compare_reports(self, output_dir, write_file):
        hist = write_file('hist.csv', 'degree,count\n' + ''.join(
            f"{k},{int(1e9 * 0.5 ** k)}\n" for k in range(1, 25)
        ))
        run('fit', '--hist', str(hist), '--dataset', 'geometric', '--output', str(output_dir / 'one.json'))
        run('fit', '--hist', str(hist), '--output', str(output_dir / 'two.json'))
        stdout, _ = run('compare', str(output_dir / 'one.json'), str(output_dir / 'two.json'))

        table = pd.read_csv(output_dir / 'compare.csv')
        assert table['dataset'].tolist() == ['geometric', 'hist']
        assert stdout.splitlines()[0].startswith('geometric ')

    def test_compare_needs_reports(self, output_dir):
        with pytest.raises(CommandError) as excinfo:
            run('compare')
        assert excinfo.value.returncode == 1

    def test_compare_rejects_non_reports(self, output_dir, write_file):
        bogus = write_file('bogus.json', '{"dataset": "x"}')
        with pytest.raises(CommandError, match='not a fit report') as excinfo:
            run('compare', str(bogus))
        assert excinfo.value.returncode == 2

    def test_fit_theorem_convention(self, output_dir, write_file):
        hist = write_file('hist.csv', 'degree,count\n' + ''.join(
            f"{k},{int(1e9 * 0.5 ** k)}\n" for k in range(1, 25)
        ))
        run('fit', '--hist', str(hist), '--gamma-convention', 'theorem')
        report = read_json(output_dir / 'fit.json')
        assert report['gamma_convention'] == 'theorem'
        assert report['gamma'] == pytest.approx(-report['exponent'] - 1.0, abs=1e-6)

    @pytest.mark.slow
    def test_fit_simulation_without_initial_boundaries(self, output_dir):
        run('simulate', '--L', '2', '--U', '8', '--n', '100000', '--runs', '10', '--seed', '4')
        run('fit', '--pmf', str(output_dir / 'simulation.csv'))

        report = read_json(output_dir / 'fit.json')
        assert report['exponent'] == pytest.approx(-3.0, abs=0.4)
        assert report['lower_threshold'] < report['upper_threshold']


class TestCommandLine:
    """Test argument errors raised from manage.py."""

    @pytest.mark.parametrize('name, argv', [
        ('simulate', ['--L', '2']),
        ('fit', []),
        ('fit', ['--hist', 'a.csv', '--edges', 'b.txt']),
        ('eval', ['--model', 'nonsense']),
    ])
    def test_argument_errors_exit_with_usage_code(self, name, argv, capsys):
        command = load_command_class('networks', name)
        with pytest.raises(SystemExit) as excinfo:
            command.run_from_argv(['manage.py', name, *argv])
        assert excinfo.value.code == 1
        assert 'error:' in capsys.readouterr().err
