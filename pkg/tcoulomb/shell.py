import os
import sys
import textwrap
from dataclasses import dataclass, fields, replace
from typing import Optional

import numpy as np
import scipy.constants
import yaml
from rich.console import Console
from rich.markdown import Markdown
from rich.table import Table

from tcoulomb import checks, frobenius, oracle, spectrum
from tcoulomb.config import Config
from tcoulomb.logger import Logger
from tcoulomb.model import Energy, FrameKind, PhysicalParams, UnitFrame, beta_from_physical, convert_energy
from tcoulomb.output import render_table
import tcoulomb.constants as constants

console = Console(stderr=True)

COMMAND_LEADER = f"{constants.PACKAGE_NAME} "

EXACT_COLUMNS = ['n', 'l', 'i', 'nu', 'alpha', 'beta', 'energy_tilde', 'energy_breve', 'coeffs']
HYDROGEN_COLUMNS = ['r0', 'energy_J', 'energy_eV']
ORACLE_COLUMNS = ['nu', 'l', 'beta', 'alpha', 'energy_tilde', 'grid_error_estimate', 'observed_order', 'r_max',
                  'grid_size']
WAVEFUNCTION_COLUMNS = ['r', 'f', 'residual']
CHECK_COLUMNS = ['name', 'passed', 'detail']

FIGURE1_NU_MAX = 8
FIGURE2_L_MAX = 9
FIGURE3_FAMILIES = (2, 3)
FIGURE_CROSS_BETA = 40.0
FIGURE2_SCAN_BETA = 12.0


def hydrogen(cutoff_radius: float) -> PhysicalParams:
    """Electron in the field of a unit charge (CODATA values)."""
    return PhysicalParams(
        mass=scipy.constants.m_e,
        charge=scipy.constants.e,
        atomic_number=1,
        permittivity=scipy.constants.epsilon_0,
        cutoff_radius=cutoff_radius,
        hbar=scipy.constants.hbar,
    )


def bohr_radius() -> float:
    """From the same constants as hydrogen(), so r0 = beta * a0 gives back beta exactly."""
    c = scipy.constants
    return 4.0 * c.pi * c.epsilon_0 * c.hbar ** 2 / (c.m_e * c.e ** 2)


@dataclass(frozen=True)
class RunConfig:
    """One fully resolved invocation; two equal RunConfigs produce identical output."""

    command: str
    n: Optional[int] = None
    l: Optional[int] = None
    nu: Optional[int] = None
    i: Optional[int] = None
    beta: Optional[float] = None
    n_max: Optional[int] = None
    tol: Optional[float] = None
    output_format: str = 'csv'
    out: Optional[str] = None
    level: str = 'quick'
    hydrogen: bool = False
    r0: Optional[float] = None
    r_max: Optional[float] = None
    points: Optional[int] = None
    inject_fault: bool = False

    def __post_init__(self):
        if self.output_format not in constants.OUTPUT_FORMATS:
            raise ValueError(f"format must be one of {', '.join(constants.OUTPUT_FORMATS)}, got {self.output_format!r}")
        for name in ('n', 'l', 'nu', 'n_max'):
            value = getattr(self, name)
            if value is not None and value < 0:
                raise ValueError(f"--{name.replace('_', '-')} must be non-negative, got {value}")
        for name in ('i', 'points'):
            value = getattr(self, name)
            if value is not None and value < 1:
                raise ValueError(f"--{name.replace('_', '-')} must be at least 1, got {value}")
        for name in ('beta', 'tol', 'r0', 'r_max'):
            value = getattr(self, name)
            if value is not None and not value > 0:
                raise ValueError(f"--{name.replace('_', '-')} must be positive, got {value}")
        if self.level not in checks.LEVELS:
            raise ValueError(f"level must be one of {', '.join(checks.LEVELS)}, got {self.level!r}")

    def require(self, *names):
        missing = [f"--{name.replace('_', '-')}" for name in names if getattr(self, name) is None]
        if missing:
            raise ValueError(f"{self.command} requires {', '.join(missing)}")

    def command_line(self):
        """Canonical command line, independent of argument order and output path."""
        parts = [constants.PACKAGE_NAME, self.command]
        for f in fields(self):
            if f.name in ('command', 'out'):
                continue
            value = getattr(self, f.name)
            if value is None or value is False:
                continue
            flag = '--format' if f.name == 'output_format' else f"--{f.name.replace('_', '-')}"
            parts.append(flag if value is True else f"{flag} {value!r}" if isinstance(value, float) else f"{flag} {value}")
        return ' '.join(parts)


class SpectrumShell():
    """
    Command front end to the exact solutions, spectral curves and the oracle.

    Every command is a do_* method whose docstring is its help text.
    """

    doc_header = "Documented commands (type %shelp [command] for detailed help)" % COMMAND_LEADER

    def __init__(self, config=None, stdout=None):
        self.config = config or Config()
        self.log = Logger(__name__)
        self.stdout = stdout or sys.stdout
        self.configure_commands()

    @classmethod
    def command_names(cls):
        return [method[3:] for method in dir(cls) if callable(getattr(cls, method)) and method.startswith("do_")]

    def configure_commands(self):
        self.commands = self.command_names()

    def get_command_help_brief(self, command):
        help_brief = "    %s%s" % (COMMAND_LEADER, command)
        help_doc = self.get_command_help(command)
        if help_doc:
            first_line = next(filter(lambda x: x.strip(), help_doc.splitlines()), "")
            help_brief += ": %s" % first_line
        return help_brief

    def get_command_help(self, command):
        if command in self.commands:
            method = self.get_command_method(command)
            doc = method.__doc__
            if doc:
                help_text = doc.replace("{leader}", COMMAND_LEADER)
                return textwrap.dedent(help_text)

    def help_commands(self):
        self._print_markdown(f"#### {self.doc_header}")
        for command in self.commands:
            console.print(self.get_command_help_brief(command), markup=False, highlight=False)
        console.print("")

    def help(self, command=''):
        if command:
            help_doc = self.get_command_help(command)
            if help_doc:
                console.print(help_doc, markup=False, highlight=False)
            else:
                console.print("\nNo help for '%s'\n\nAvailable commands: %s" % (command, ", ".join(self.commands)))
        else:
            self.help_commands()

    def _print_markdown(self, output):
        console.print(Markdown(output))
        console.print("")

    def get_command_method(self, command):
        do_command = f"do_{command}"
        for klass in self.__class__.__mro__:
            method = getattr(klass, do_command, None)
            if method:
                return method
        raise AttributeError(f"{do_command} method not found in any shell class")

    def run_command(self, run: RunConfig) -> int:
        if run.command not in self.commands:
            raise ValueError(f"Unknown command: {run.command}")
        self.log.info("running %s", run.command_line())
        method = self.get_command_method(run.command)
        return method(self, run) or constants.EXIT_OK

    def _tol(self, run, section):
        return run.tol if run.tol is not None else self.config.get(f"{section}.tol")

    def _n_max(self, run):
        return run.n_max if run.n_max is not None else self.config.get('spectrum.n_max')

    def _emit(self, rows, columns, run, extra=None):
        text = render_table(rows, columns, run.command_line(), run.output_format, extra)
        if run.out:
            with open(run.out, 'w', encoding='utf-8', newline='') as f:
                f.write(text)
            self.log.info("wrote %s", run.out)
        else:
            self.stdout.write(text)

    @property
    def _max_order(self):
        return self.config.get('frobenius.max_order')

    def _solve(self, n, l, tol):
        return spectrum.exact_solutions(n, l, tol, self._max_order)

    def _curve(self, nu, l, n_max, tol):
        return spectrum.build_curve(nu, l, n_max, tol, self._max_order)

    def do_exact(self, run):
        """
        Exact solutions of one truncation order

        Lists every root i = 1..n+1 with alpha, beta, the node count nu, the
        series coefficients c_0..c_n and the tilde and breve energies. With
        --hydrogen each row also gives the cutoff radius at which hydrogen
        realizes that beta, and the energy in joules and electronvolts.

        Arguments:
            --n: truncation order
            --l: angular momentum
            --tol: root accuracy (default frobenius.tol)
            --hydrogen: add physical columns for Z=1

        Examples:
            {leader}exact --n 0 --l 0
            {leader}exact --n 3 --l 1 --format json
        """
        run.require('n', 'l')
        columns = EXACT_COLUMNS + (HYDROGEN_COLUMNS if run.hydrogen else [])
        rows = []
        for sol in self._solve(run.n, run.l, self._tol(run, 'frobenius')):
            row = {
                'n': sol.n,
                'l': sol.l,
                'i': sol.i,
                'nu': sol.nodes,
                'alpha': sol.alpha,
                'beta': sol.beta,
                'energy_tilde': sol.energy_tilde,
                'energy_breve': frobenius.breve_energy(sol),
                'coeffs': sol.coeffs,
            }
            if run.hydrogen:
                params = hydrogen(sol.beta * bohr_radius())
                energy = convert_energy(Energy(sol.energy_tilde, UnitFrame(FrameKind.TILDE, beta_from_physical(params))),
                                        UnitFrame(FrameKind.PHYSICAL, beta_from_physical(params)), params)
                row.update(r0=params.cutoff_radius, energy_J=energy.value,
                           energy_eV=energy.value / scipy.constants.electron_volt)
            rows.append(row)
        self._emit(rows, columns, run)

    def do_curve(self, run):
        """
        Spectral curve alpha_{nu,l}(beta)

        Emits the exact points (source=exact) followed by evenly spaced
        interpolated samples (source=interpolated) over the same beta range.
        JSON output also carries the leave-one-out deviations of the curve.

        Arguments:
            --nu: node count
            --l: angular momentum
            --n-max: highest truncation order (default spectrum.n_max)
            --points: number of interpolated samples (default spectrum.dense_samples)

        Examples:
            {leader}curve --nu 0 --l 0 --n-max 20
        """
        run.require('nu', 'l')
        curve = self._curve(run.nu, run.l, self._n_max(run), self._tol(run, 'frobenius'))
        count = run.points or self.config.get('spectrum.dense_samples')
        points = list(curve.points)
        if len(points) > 1:
            points.extend(spectrum.dense_samples(curve, count))
        rows = [{'curve_id': curve.curve_id, 'beta': p.beta, 'alpha': p.alpha, 'source': p.source.value} for p in points]
        extra = None
        if run.output_format == 'json':
            extra = {'leave_one_out': [{'beta': b, 'deviation': d} for b, d in spectrum.leave_one_out(curve)]}
        self._emit(rows, constants.CURVE_COLUMNS, run, extra)

    def do_interp(self, run):
        """
        Interpolate a spectral curve at one beta

        Uses the Lagrange polynomial through every exact point of the curve;
        a beta outside the exact points is refused.

        Arguments:
            --nu, --l: the curve
            --beta: coupling
            --n-max: highest truncation order (default spectrum.n_max)

        Examples:
            {leader}interp --nu 0 --l 0 --beta 40 --n-max 20
        """
        run.require('nu', 'l', 'beta')
        curve = self._curve(run.nu, run.l, self._n_max(run), self._tol(run, 'frobenius'))
        alpha = spectrum.interpolate(curve, run.beta)
        rows = [{'curve_id': curve.curve_id, 'beta': run.beta, 'alpha': alpha,
                 'source': spectrum.PointSource.INTERPOLATED.value}]
        self._emit(rows, constants.CURVE_COLUMNS, run)

    def do_oracle(self, run):
        """
        Numerical eigenvalue of one state

        Solves the radial equation on a grid for the state with nu nodes.
        Give either --beta or --r0 (cutoff radius in metres, hydrogen), which
        also adds the energy in joules and electronvolts.

        Arguments:
            --beta or --r0: coupling
            --l: angular momentum
            --nu: node count
            --tol: grid error tolerance (default oracle.tol)
            --r-max: domain size (default from the state's expected decay)

        Examples:
            {leader}oracle --beta 40 --l 0 --nu 0
            {leader}oracle --r0 1e-10 --l 0 --nu 1
        """
        run.require('l', 'nu')
        params = None
        beta = run.beta
        if run.r0 is not None:
            params = hydrogen(run.r0)
            beta = beta_from_physical(params)
        elif beta is None:
            raise ValueError("oracle requires --beta or --r0")
        grid_size = self.config.get('oracle.grid_size')
        tol = self._tol(run, 'oracle')
        problem = oracle.RadialProblem.for_state(beta, run.l, run.nu, grid_size, tol)
        if run.r_max is not None:
            problem = oracle.RadialProblem(beta, run.l, run.r_max, grid_size, tol)
        result = oracle.solve_state(problem, run.nu, self.config.get('oracle.max_refinements'),
                                    self.config.get('oracle.max_domain_doublings'))
        row = {
            'nu': result.nu,
            'l': run.l,
            'beta': beta,
            'alpha': result.alpha,
            'energy_tilde': result.energy_tilde,
            'grid_error_estimate': result.grid_error_estimate,
            'observed_order': result.observed_order,
            'r_max': result.r_max,
            'grid_size': result.grid_size,
        }
        columns = list(ORACLE_COLUMNS)
        if params is not None:
            frame = UnitFrame(FrameKind.TILDE, beta)
            energy = Energy(result.energy_tilde, frame).to(FrameKind.PHYSICAL, params)
            row.update(r0=run.r0, energy_J=energy.value, energy_eV=energy.value / scipy.constants.electron_volt)
            columns += HYDROGEN_COLUMNS
        self._emit([row], columns, run)

    def do_wavefn(self, run):
        """
        Samples of an exact eigenfunction

        Emits r, the unnormalized f(r) and the relative residual of the radial
        equation at evenly spaced r in (0, r_max].

        Arguments:
            --n, --l, --i: the exact solution
            --r-max: last sample (default (2(n+l+2)+20)/alpha)
            --points: number of samples (default 200)

        Examples:
            {leader}wavefn --n 2 --l 0 --i 1 --points 50
        """
        run.require('n', 'l', 'i')
        sols = self._solve(run.n, run.l, self._tol(run, 'frobenius'))
        if run.i > len(sols):
            raise ValueError(f"--i must lie in 1..{len(sols)} for n={run.n}")
        sol = sols[run.i - 1]
        r_max = run.r_max or (2.0 * sol.principal + 20.0) / sol.alpha
        r = np.linspace(0.0, r_max, (run.points or self.config.get('spectrum.dense_samples')) + 1)[1:]
        f = frobenius.eval_wavefunction(sol, r)
        residual = frobenius.ode_residual(sol, r, relative=True)
        rows = [{'r': float(a), 'f': float(b), 'residual': float(c)} for a, b, c in zip(r, f, residual)]
        self._emit(rows, WAVEFUNCTION_COLUMNS, run)

    def do_check(self, run):
        """
        Run the invariant suites

        The quick level covers n <= 5, l <= 3 and the oracle benchmarks; the
        full level scans n <= 20, l <= 10 and adds the interpolation and
        ordering checks. A table goes to the console and the JSON report to
        --out (or standard output). Any failure exits with status 2.

        Arguments:
            --level: quick or full

        Examples:
            {leader}check --level quick
            {leader}check --level full --out report.json
        """
        results = checks.run_checks(
            run.level,
            run.inject_fault,
            tol=self.config.get('frobenius.tol'),
            grid_size=self.config.get('oracle.grid_size'),
            oracle_tol=self.config.get('oracle.tol'),
            quadrature_tol=self.config.get('spectrum.quadrature_tol'),
        )
        table = Table(title=f"{run.level} checks")
        for column in CHECK_COLUMNS:
            table.add_column(column)
        for result in results:
            table.add_row(result.name, "pass" if result.passed else "[red]FAIL[/red]", result.detail)
        console.print(table)
        passed = all(result.passed for result in results)
        report = {'level': run.level, 'passed': passed}
        self._emit([r.as_dict() for r in results], CHECK_COLUMNS, replace(run, output_format='json'),
                   report)
        if not passed:
            self.log.error("%d of %d checks failed", sum(not r.passed for r in results), len(results))
            return constants.EXIT_INTEGRITY

    def do_figures(self, run):
        """
        Plot-ready data for the spectral-curve figures

        Writes fig1.csv (nu = 0..8, l = 0, with oracle points at beta = 40),
        fig2.csv (nu = 0, l = 0..9, plus interpolated values at beta = 12)
        and fig3.csv (families nu + l = 2 and 3, exact points plus
        interpolated values on a shared beta grid) into --out (default:
        current directory).

        Arguments:
            --out: output directory
            --n-max: highest truncation order (default spectrum.n_max)

        Examples:
            {leader}figures --out figures/
        """
        output_dir = run.out or os.curdir
        os.makedirs(output_dir, exist_ok=True)
        n_max = self._n_max(run)
        tol = self._tol(run, 'frobenius')
        csv_run = replace(run, output_format='csv', out=None)
        figures = {
            'fig1.csv': self._figure_nodes(n_max, tol),
            'fig2.csv': self._figure_angular(n_max, tol),
            'fig3.csv': self._figure_families(n_max, tol),
        }
        for name, rows in figures.items():
            path = os.path.join(output_dir, name)
            self._emit(rows, constants.CURVE_COLUMNS, replace(csv_run, out=path))

    def do_config(self, run):
        """
        Show the current configuration

        Examples:
            {leader}config
        """
        output = """
## Configuration

* Config dir: %s
* Profile: %s (as %s.yaml)

```
%s
```
        """ % (self.config.config_dir, self.config.profile, self.config.profile, yaml.dump(self.config.get(), default_flow_style=False))
        self._print_markdown(output)

    @staticmethod
    def _curve_rows(curve, curve_id=None):
        return [{'curve_id': curve_id or curve.curve_id, 'beta': p.beta, 'alpha': p.alpha, 'source': p.source.value}
                for p in curve.points]

    def _figure_nodes(self, n_max, tol):
        rows = []
        grid_size, oracle_tol = self.config.get('oracle.grid_size'), self.config.get('oracle.tol')
        for nu in range(FIGURE1_NU_MAX + 1):
            curve = self._curve(nu, 0, max(n_max, nu), tol)
            rows.extend(self._curve_rows(curve))
            problem = oracle.RadialProblem.for_state(FIGURE_CROSS_BETA, 0, nu, grid_size, oracle_tol)
            result = oracle.solve_state(problem, nu)
            rows.append({'curve_id': curve.curve_id, 'beta': FIGURE_CROSS_BETA, 'alpha': result.alpha,
                         'source': spectrum.PointSource.ORACLE.value})
        return rows

    def _figure_angular(self, n_max, tol):
        rows = []
        for l in range(FIGURE2_L_MAX + 1):
            rows.extend(self._curve_rows(self._curve(0, l, n_max, tol)))
        for entry in spectrum.monotonicity_scan(FIGURE2_L_MAX, FIGURE2_SCAN_BETA, n_max, tol, self._max_order):
            if entry.alpha is not None:
                rows.append({'curve_id': f"nu=0,l={entry.l}", 'beta': entry.beta, 'alpha': entry.alpha,
                             'source': spectrum.PointSource.INTERPOLATED.value})
        return rows

    def _figure_families(self, n_max, tol):
        rows = []
        for k in FIGURE3_FAMILIES:
            for nu in range(k + 1):
                curve = self._curve(nu, k - nu, n_max, tol)
                rows.extend(self._curve_rows(curve, f"k={k}:{curve.curve_id}"))
            for entry in spectrum.degeneracy_split(
                    k, checks.common_grid(k, n_max, tol=tol, max_order=self._max_order), n_max, tol, self._max_order):
                rows.append({'curve_id': f"k={k}:nu={entry.nu},l={entry.l}", 'beta': entry.beta, 'alpha': entry.alpha,
                             'source': spectrum.PointSource.INTERPOLATED.value})
        return rows
