import io
import json
import os
import tempfile
import unittest
from contextlib import redirect_stdout

import yaml

from tcoulomb.main import main
from tcoulomb.output import read_csv
from tcoulomb.shell import RunConfig, SpectrumShell
import tcoulomb.constants as constants


def run(*argv):
    buffer = io.StringIO()
    with redirect_stdout(buffer):
        code = main(list(argv))
    return code, buffer.getvalue()


class TestRunConfig(unittest.TestCase):
    def test_command_line_is_canonical(self):
        a = RunConfig('exact', n=1, l=0, out='a.csv')
        b = RunConfig('exact', l=0, n=1, out='b.csv')
        self.assertEqual(a.command_line(), b.command_line())
        self.assertEqual(a.command_line(), 'tcoulomb exact --n 1 --l 0 --format csv --level quick')

    def test_validation(self):
        with self.assertRaises(ValueError):
            RunConfig('exact', n=-1)
        with self.assertRaises(ValueError):
            RunConfig('exact', output_format='xml')
        with self.assertRaises(ValueError):
            RunConfig('oracle', beta=0.0)

    def test_required_arguments(self):
        with self.assertRaises(ValueError):
            RunConfig('exact', n=1).require('n', 'l')


class TestShell(unittest.TestCase):
    def test_commands_are_discovered(self):
        self.assertEqual(SpectrumShell.command_names(),
                         ['check', 'config', 'curve', 'exact', 'figures', 'interp', 'oracle', 'wavefn'])

    def test_every_command_has_help(self):
        shell = SpectrumShell()
        for command in shell.commands:
            self.assertIn('Examples:', shell.get_command_help(command))
            self.assertIn('tcoulomb ', shell.get_command_help(command))


class TestExactCommand(unittest.TestCase):
    def test_first_order(self):
        code, text = run('exact', '--n', '0', '--l', '0')
        self.assertEqual(code, constants.EXIT_OK)
        _, rows = read_csv(io.StringIO(text))
        self.assertEqual(len(rows), 1)
        self.assertEqual(float(rows[0]['alpha']), 1.0)
        self.assertEqual(float(rows[0]['beta']), 2.0)
        self.assertEqual(rows[0]['nu'], '0')

    def test_second_order_json(self):
        code, text = run('exact', '--n', '1', '--l', '0', '--format', 'json')
        self.assertEqual(code, constants.EXIT_OK)
        rows = json.loads(text)['rows']
        self.assertEqual([r['i'] for r in rows], [1, 2])
        self.assertAlmostEqual(rows[0]['beta'], 1.9019238, delta=1e-7)
        self.assertAlmostEqual(rows[1]['alpha'], 2.3660254, delta=1e-7)
        self.assertAlmostEqual(rows[1]['energy_breve'], -1.0 / 18.0, places=14)

    def test_betas_ascend(self):
        _, text = run('exact', '--n', '3', '--l', '1')
        _, rows = read_csv(io.StringIO(text))
        betas = [float(r['beta']) for r in rows]
        self.assertEqual(len(betas), 4)
        self.assertEqual(betas, sorted(betas))

    def test_hydrogen_columns(self):
        _, text = run('exact', '--n', '0', '--l', '0', '--hydrogen')
        _, rows = read_csv(io.StringIO(text))
        self.assertAlmostEqual(float(rows[0]['r0']) / 5.29177210903e-11, 2.0, places=8)
        self.assertLess(float(rows[0]['energy_eV']), 0.0)

    def test_identical_runs_write_identical_files(self):
        with tempfile.TemporaryDirectory() as directory:
            first, second = os.path.join(directory, 'a.csv'), os.path.join(directory, 'b.csv')
            self.assertEqual(run('exact', '--n', '4', '--l', '2', '--out', first)[0], constants.EXIT_OK)
            self.assertEqual(run('exact', '--l', '2', '--n', '4', '--out', second)[0], constants.EXIT_OK)
            with open(first, 'rb') as a, open(second, 'rb') as b:
                self.assertEqual(a.read(), b.read())


class TestOtherCommands(unittest.TestCase):
    def test_curve(self):
        code, text = run('curve', '--nu', '0', '--l', '0', '--n-max', '5', '--points', '10')
        self.assertEqual(code, constants.EXIT_OK)
        _, rows = read_csv(io.StringIO(text))
        self.assertEqual(sum(r['source'] == 'exact' for r in rows), 6)
        self.assertEqual(sum(r['source'] == 'interpolated' for r in rows), 10)

    def test_curve_with_default_order(self):
        code, text = run('curve', '--nu', '0', '--l', '0')
        self.assertEqual(code, constants.EXIT_OK)
        _, rows = read_csv(io.StringIO(text))
        self.assertEqual(sum(r['source'] == 'exact' for r in rows), 21)
        self.assertTrue(all(float(r['alpha']) > 0 for r in rows))

    def test_interp(self):
        code, text = run('interp', '--nu', '0', '--l', '0', '--beta', '40', '--n-max', '20')
        self.assertEqual(code, constants.EXIT_OK)
        _, rows = read_csv(io.StringIO(text))
        self.assertAlmostEqual(float(rows[0]['alpha']), 6.856, delta=1e-3)

    def test_oracle(self):
        code, text = run('oracle', '--beta', '40', '--l', '0', '--nu', '0', '--format', 'json')
        self.assertEqual(code, constants.EXIT_OK)
        row = json.loads(text)['rows'][0]
        self.assertAlmostEqual(row['alpha'], 6.854786377, delta=1e-6)

    def test_oracle_from_cutoff_radius(self):
        code, text = run('oracle', '--r0', str(2.0 * 5.29177210903e-11), '--l', '0', '--nu', '0', '--format', 'json')
        self.assertEqual(code, constants.EXIT_OK)
        row = json.loads(text)['rows'][0]
        self.assertAlmostEqual(row['beta'], 2.0, places=8)
        self.assertAlmostEqual(row['alpha'], 1.0, delta=1e-6)

    def test_wavefn(self):
        code, text = run('wavefn', '--n', '2', '--l', '0', '--i', '1', '--points', '20')
        self.assertEqual(code, constants.EXIT_OK)
        _, rows = read_csv(io.StringIO(text))
        self.assertEqual(len(rows), 20)
        self.assertTrue(all(float(r['residual']) <= 1e-10 for r in rows))

    def test_figures(self):
        with tempfile.TemporaryDirectory() as directory:
            code, _ = run('figures', '--out', directory, '--n-max', '10')
            self.assertEqual(code, constants.EXIT_OK)
            with open(os.path.join(directory, 'fig1.csv'), encoding='utf-8') as f:
                _, fig1 = read_csv(f)
            crosses = [r for r in fig1 if r['source'] == 'oracle' and r['curve_id'] == 'nu=0,l=0']
            self.assertEqual(len(crosses), 1)
            self.assertEqual(float(crosses[0]['beta']), 40.0)
            self.assertAlmostEqual(float(crosses[0]['alpha']), 6.854786377, delta=1e-6)
            with open(os.path.join(directory, 'fig2.csv'), encoding='utf-8') as f:
                _, fig2 = read_csv(f)
            self.assertEqual(len({r['curve_id'] for r in fig2}), 10)
            scan = [float(r['alpha']) for r in fig2 if r['source'] == 'interpolated']
            self.assertEqual(len(scan), 10)
            self.assertTrue(all(b < a for a, b in zip(scan, scan[1:])))
            with open(os.path.join(directory, 'fig3.csv'), encoding='utf-8') as f:
                _, fig3 = read_csv(f)
            block = [r for r in fig3 if r['source'] == 'interpolated' and r['curve_id'].startswith('k=2:')]
            by_beta = {}
            for r in block:
                by_beta.setdefault(r['beta'], []).append(r)
            for row in by_beta.values():
                alphas = [float(r['alpha']) for r in sorted(row, key=lambda r: r['curve_id'])]
                self.assertTrue(all(b < a for a, b in zip(alphas, alphas[1:])))


class TestExitCodes(unittest.TestCase):
    def test_usage_errors(self):
        self.assertEqual(run('exact', '--n', '-1', '--l', '0')[0], constants.EXIT_USAGE)
        self.assertEqual(run('exact', '--n', '1')[0], constants.EXIT_USAGE)
        with self.assertRaises(SystemExit) as context:
            run('bogus')
        self.assertEqual(context.exception.code, constants.EXIT_USAGE)

    def test_extrapolation_is_a_usage_error(self):
        self.assertEqual(run('interp', '--nu', '0', '--l', '0', '--beta', '1', '--n-max', '5')[0], constants.EXIT_USAGE)

    def test_oscillating_interpolation_is_an_integrity_error(self):
        code, _ = run('interp', '--nu', '0', '--l', '0', '--beta', '518.73', '--n-max', '20')
        self.assertEqual(code, constants.EXIT_INTEGRITY)

    def test_convergence_failure(self):
        with tempfile.TemporaryDirectory() as config_dir:
            with open(os.path.join(config_dir, 'default.yaml'), 'w', encoding='utf-8') as f:
                yaml.safe_dump({'oracle': {'max_refinements': 0}}, f)
            code, _ = run('-c', config_dir, 'oracle', '--beta', '40', '--l', '0', '--nu', '0', '--tol', '1e-12')
        self.assertEqual(code, constants.EXIT_CONVERGENCE)

    def test_curve_honours_the_configured_order_limit(self):
        with tempfile.TemporaryDirectory() as config_dir:
            with open(os.path.join(config_dir, 'default.yaml'), 'w', encoding='utf-8') as f:
                yaml.safe_dump({'frobenius': {'max_order': 5}}, f)
            code, _ = run('-c', config_dir, 'curve', '--nu', '0', '--l', '0', '--n-max', '10')
        self.assertEqual(code, constants.EXIT_INTEGRITY)

    def test_injected_fault_fails_the_check(self):
        with tempfile.TemporaryDirectory() as directory:
            report = os.path.join(directory, 'report.json')
            code, _ = run('check', '--level', 'quick', '--inject-fault', '--out', report)
            self.assertEqual(code, constants.EXIT_INTEGRITY)
            with open(report, encoding='utf-8') as f:
                document = json.load(f)
        self.assertFalse(document['passed'])
        failed = [r['name'] for r in document['rows'] if not r['passed']]
        self.assertEqual(failed, ['ode_residual'])

    def test_quick_check_passes(self):
        code, text = run('check', '--level', 'quick')
        self.assertEqual(code, constants.EXIT_OK)
        self.assertTrue(json.loads(text)['passed'])

    def test_full_check_passes(self):
        code, text = run('check', '--level', 'full')
        self.assertEqual(code, constants.EXIT_OK)
        document = json.loads(text)
        self.assertTrue(document['passed'])
        names = [r['name'] for r in document['rows']]
        for name in ('node_theorem', 'ode_residual', 'interpolation', 'degeneracy_ordering'):
            self.assertIn(name, names)


if __name__ == '__main__':
    unittest.main()
