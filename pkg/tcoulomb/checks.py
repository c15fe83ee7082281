"""
Invariant suites behind the ``check`` command.

Each check returns a CheckResult; exceptions raised inside a check are
recorded as failures so one broken suite does not hide the others.
"""

import math
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Callable, List

import numpy as np

from tcoulomb import frobenius, oracle, spectrum
from tcoulomb.errors import TCoulombError
from tcoulomb.logger import Logger
import tcoulomb.constants as constants

log = Logger(__name__)

LEVELS = ('quick', 'full')

BENCHMARK_BETA = 40.0
BENCHMARK_ALPHA = 6.854786377
INTERPOLATED_ALPHA = 6.856
SCAN_BETA = 12.0
CLOSED_FORM_L_MAX = 10
RESIDUAL_TOL = 1e-10


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str

    def as_dict(self):
        return {'name': self.name, 'passed': self.passed, 'detail': self.detail}


@dataclass(frozen=True)
class Limits:
    n_max: int
    l_max: int
    node_n_max: int
    node_l_max: int
    residual_n_max: int
    oracle_n_max: int
    oracle_l_max: int


QUICK = Limits(n_max=5, l_max=3, node_n_max=5, node_l_max=3, residual_n_max=5, oracle_n_max=5, oracle_l_max=3)
FULL = Limits(n_max=20, l_max=10, node_n_max=10, node_l_max=5, residual_n_max=10, oracle_n_max=5, oracle_l_max=3)


class CheckFailed(Exception):
    pass


def _require(condition, message):
    if not condition:
        raise CheckFailed(message)


def corrupt_series(sol):
    """The solution with c_0 scaled by 1 + 1e-3 and a spurious c_{n+1} = 1e-3."""
    series = list(sol.exact_parameters()[1])
    series[0] *= Fraction(1001, 1000)
    series.append(Fraction(1, 1000))
    return replace(sol, coeffs=tuple(float(c) for c in series), series=tuple(series))


class InvariantSuite:
    """
    Runs the invariant checks for one level.

    With ``inject_fault`` one series coefficient of the first solution seen by
    the residual check is corrupted, so that the failure path can be tested.
    """

    def __init__(self, level='quick', inject_fault=False, tol=1e-12, grid_size=oracle.DEFAULT_GRID_SIZE,
                 oracle_tol=oracle.DEFAULT_TOL, quadrature_tol=1e-10):
        if level not in LEVELS:
            raise ValueError(f"level must be one of {', '.join(LEVELS)}, got {level!r}")
        self.level = level
        self.limits = FULL if level == 'full' else QUICK
        self.inject_fault = inject_fault
        self.tol = tol
        self.grid_size = grid_size
        self.oracle_tol = oracle_tol
        self.quadrature_tol = quadrature_tol

    def solutions(self, n, l):
        return spectrum.exact_solutions(n, l, self.tol)

    def checks(self) -> List[Callable[[], str]]:
        checks = [
            self.check_first_order,
            self.check_second_order_closed_form,
            self.check_root_realness,
            self.check_node_theorem,
            self.check_breve_energy,
            self.check_ode_residual,
            self.check_oracle_benchmark,
            self.check_oracle_equivalence,
            self.check_hellmann_feynman,
            self.check_curve_monotonicity,
        ]
        if self.level == 'full':
            checks.extend([self.check_interpolation, self.check_angular_ordering, self.check_degeneracy_ordering])
        return checks

    def run(self) -> List[CheckResult]:
        results = []
        for check in self.checks():
            name = check.__name__[len('check_'):]
            log.info("running check %s", name)
            try:
                detail = check()
            except (CheckFailed, TCoulombError) as e:
                results.append(CheckResult(name, False, f"{e.__class__.__name__}: {e}"))
            else:
                results.append(CheckResult(name, True, detail))
        return results

    def check_first_order(self):
        for l in range(CLOSED_FORM_L_MAX + 1):
            (sol,) = self.solutions(0, l)
            _require(sol.alpha == 1.0 and sol.beta == l + 2.0, f"n=0, l={l} gave alpha={sol.alpha!r}, beta={sol.beta!r}")
        return f"alpha=1, beta=l+2 for l=0..{CLOSED_FORM_L_MAX}"

    def check_second_order_closed_form(self):
        for l in range(CLOSED_FORM_L_MAX + 1):
            first, second = self.solutions(1, l)
            alpha1, alpha2, c1_1, c1_2 = frobenius.closed_form_n1(l)
            for sol, alpha, c1 in ((first, alpha1, c1_1), (second, alpha2, c1_2)):
                _require(abs(sol.alpha - alpha) <= 1e-12 and abs(sol.coeffs[1] - c1) <= 1e-12,
                         f"n=1, l={l}, i={sol.i}: alpha={sol.alpha!r}, c_1={sol.coeffs[1]!r}")
            _require(first.energy_tilde > second.energy_tilde, f"n=1, l={l}: energies out of order")
        return f"closed forms hold for l=0..{CLOSED_FORM_L_MAX}"

    def check_root_realness(self):
        count = 0
        for n in range(self.limits.n_max + 1):
            for l in range(self.limits.l_max + 1):
                sols = self.solutions(n, l)
                _require(len(sols) == n + 1, f"n={n}, l={l}: {len(sols)} roots")
                count += 1
        return f"{count} truncation polynomials with n+1 simple positive roots"

    def check_node_theorem(self):
        for n in range(self.limits.node_n_max + 1):
            for l in range(self.limits.node_l_max + 1):
                for sol in self.solutions(n, l):
                    nodes = frobenius.count_nodes(sol)
                    _require(nodes == n + 1 - sol.i, f"n={n}, l={l}, i={sol.i}: {nodes} nodes")
        return f"node counts n+1-i for n<={self.limits.node_n_max}, l<={self.limits.node_l_max}"

    def check_breve_energy(self):
        for n in range(self.limits.n_max + 1):
            for l in range(self.limits.l_max + 1):
                for sol in self.solutions(n, l):
                    expected = -0.5 / sol.principal ** 2
                    _require(math.isclose(frobenius.breve_energy(sol), expected, rel_tol=1e-12),
                             f"n={n}, l={l}, i={sol.i}: breve energy {frobenius.breve_energy(sol)!r}")
        return "breve energies equal -1/(2(n+l+2)^2)"

    def check_ode_residual(self):
        worst = 0.0
        faulty = self.inject_fault
        for n in range(self.limits.residual_n_max + 1):
            for l in range(self.limits.l_max + 1):
                for sol in self.solutions(n, l):
                    if faulty:
                        sol = corrupt_series(sol)
                        faulty = False
                    residual = float(np.max(frobenius.ode_residual(sol, frobenius.residual_samples(sol), relative=True)))
                    worst = max(worst, residual)
                    _require(residual <= RESIDUAL_TOL, f"n={n}, l={l}, i={sol.i}: relative residual {residual:.3e}")
        return f"largest relative residual {worst:.3e}"

    def check_oracle_benchmark(self):
        problem = oracle.RadialProblem.for_state(BENCHMARK_BETA, 0, 0, self.grid_size, self.oracle_tol)
        result = oracle.solve_state(problem, 0)
        _require(abs(result.alpha - BENCHMARK_ALPHA) <= 1e-6, f"alpha(40) = {result.alpha!r}")
        return f"alpha(40) = {result.alpha:.10f}"

    def check_oracle_equivalence(self):
        worst = 0.0
        for n in range(self.limits.oracle_n_max + 1):
            for l in range(self.limits.oracle_l_max + 1):
                for sol in self.solutions(n, l):
                    deviation = oracle.validate_exact(sol, 1e-6, grid_size=self.grid_size, oracle_tol=self.oracle_tol)
                    worst = max(worst, abs(deviation))
        return f"largest oracle deviation {worst:.3e}"

    def check_hellmann_feynman(self):
        worst = 0.0
        for sol in self.solutions(0, 0) + self.solutions(1, 0):
            lhs, rhs = spectrum.hellmann_feynman_check(sol, self.quadrature_tol, self.grid_size, self.oracle_tol)
            _require(-1.0 < rhs < 0.0, f"n={sol.n}, i={sol.i}: -<1/(r+1)> = {rhs!r}")
            _require(abs(lhs - rhs) <= 1e-4, f"n={sol.n}, i={sol.i}: dE/dbeta={lhs!r}, -<1/(r+1)>={rhs!r}")
            worst = max(worst, abs(lhs - rhs))
        return f"largest |dE/dbeta + <1/(r+1)>| {worst:.3e}"

    def check_curve_monotonicity(self):
        count = 0
        for l in range(self.limits.l_max + 1):
            for nu in range(self.limits.n_max + 1):
                # building validates increasing alpha
                spectrum.build_curve(nu, l, self.limits.n_max, self.tol)
                count += 1
        return f"{count} curves increase with beta"

    def check_interpolation(self):
        curve = spectrum.build_curve(0, 0, 20, self.tol)
        alpha = spectrum.interpolate(curve, BENCHMARK_BETA)
        _require(abs(alpha - INTERPOLATED_ALPHA) <= 1e-3, f"interpolated alpha(40) = {alpha!r}")
        return f"interpolated alpha(40) = {alpha:.6f}"

    def check_angular_ordering(self):
        entries = spectrum.monotonicity_scan(9, SCAN_BETA, self.limits.n_max, self.tol)
        missing = [e.l for e in entries if e.alpha is None]
        _require(not missing, f"beta={SCAN_BETA} outside the curves for l={missing}")
        return f"alpha_0,l({SCAN_BETA:g}) decreases for l=0..9"

    def check_degeneracy_ordering(self):
        for k in (2, 3):
            grid = common_grid(k, self.limits.n_max, tol=self.tol)
            entries = spectrum.degeneracy_split(k, grid, self.limits.n_max, self.tol)
            _require(all(e.alpha is not None for e in entries), f"k={k}: grid outside a curve")
            _require(spectrum.family_ordered(entries), f"k={k}: family out of order")
        return "families k=2, 3 ordered by nu"


def common_grid(k, n_max, count=5, tol=1e-12, max_order=constants.MAX_ORDER):
    """
    Betas shared by every curve with nu + l = k, kept below the middle exact
    point of each curve, where the polynomial through all points is well
    conditioned.
    """
    curves = [spectrum.build_curve(nu, k - nu, n_max, tol, max_order) for nu in range(k + 1)]
    lo = max(c.hull[0] for c in curves)
    hi = min(c.points[len(c.points) // 2].beta for c in curves)
    if not lo < hi:
        raise ValueError(f"the curves with nu + l = {k} share no well-conditioned beta range at n_max={n_max}")
    return [float(b) for b in np.linspace(lo, hi, count + 2)[1:-1]]


def run_checks(level='quick', inject_fault=False, **kwargs) -> List[CheckResult]:
    return InvariantSuite(level, inject_fault, **kwargs).run()
