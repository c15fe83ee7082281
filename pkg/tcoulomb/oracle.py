"""
Independent numerical eigensolver for the radial problem

    [-1/2 d^2/dr^2 + l(l+1)/(2 r^2) - beta/(r+1)] u = E u,   u(0) = u(r_max) = 0.

The operator is discretized with second-order differences on a uniform grid,
which gives a symmetric tridiagonal matrix. The state with nu nodes is the
nu-th eigenvalue; it is found by bisection on the Sturm count of the matrix
(LAPACK stebz), and that count equals the number of sign changes of the
discrete solution shot outward from r = 0 at the trial energy. Three grids
(N, 2N, 4N) and two Richardson levels remove the h^2 and h^4 errors.

Nothing here shares code with the Frobenius construction.
"""

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.linalg import eigh_tridiagonal

from tcoulomb.errors import ConvergenceError, IntegrityError, UnboundStateError
from tcoulomb.logger import Logger
import tcoulomb.constants as constants

log = Logger(__name__)

DEFAULT_GRID_SIZE = constants.DEFAULT_CONFIG['oracle']['grid_size']
DEFAULT_TOL = constants.DEFAULT_CONFIG['oracle']['tol']
DEFAULT_REFINEMENTS = constants.DEFAULT_CONFIG['oracle']['max_refinements']
DEFAULT_DOUBLINGS = constants.DEFAULT_CONFIG['oracle']['max_domain_doublings']

NODE_FLOOR = 1e-10


@dataclass(frozen=True)
class RadialProblem:
    beta: float
    l: int
    r_max: float
    grid_size: int = DEFAULT_GRID_SIZE
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        if not self.beta > 0:
            raise ValueError(f"beta must be positive, got {self.beta!r}")
        if self.l < 0 or int(self.l) != self.l:
            raise ValueError(f"l must be a non-negative integer, got {self.l!r}")
        if not self.r_max > 0:
            raise ValueError(f"r_max must be positive, got {self.r_max!r}")
        if self.grid_size < constants.MIN_GRID_SIZE or self.grid_size % 2:
            raise ValueError(f"grid_size must be even and at least {constants.MIN_GRID_SIZE}, got {self.grid_size!r}")
        if not constants.MIN_ORACLE_TOL <= self.tol <= constants.MAX_ORACLE_TOL:
            raise ValueError(f"tol must lie in [{constants.MIN_ORACLE_TOL}, {constants.MAX_ORACLE_TOL}], got {self.tol!r}")

    @classmethod
    def for_state(cls, beta, l, nu, grid_size=DEFAULT_GRID_SIZE, tol=DEFAULT_TOL):
        """Domain from a hydrogen-like guess alpha ~ beta / (nu + l + 2)."""
        alpha_est = beta / (nu + l + 2)
        return cls(beta, l, max(30.0, 40.0 / alpha_est + 10.0 * (l + 1)), grid_size, tol)


@dataclass(frozen=True)
class OracleResult:
    nu: int
    energy_tilde: float
    alpha: float
    grid_error_estimate: float
    observed_order: float
    r_max: float
    grid_size: int
    r: np.ndarray = field(repr=False, compare=False, default=None)
    u: np.ndarray = field(repr=False, compare=False, default=None)


def _operator(beta, l, r_max, n):
    h = r_max / n
    r = h * np.arange(1, n)
    diagonal = 1.0 / h ** 2 + l * (l + 1) / (2.0 * r ** 2) - beta / (1.0 + r)
    off_diagonal = np.full(n - 2, -0.5 / h ** 2)
    return r, diagonal, off_diagonal


def _eigenvalue(beta, l, r_max, n, nu):
    _, d, e = _operator(beta, l, r_max, n)
    w = eigh_tridiagonal(d, e, eigvals_only=True, select='i', select_range=(nu, nu), lapack_driver='stebz')
    return float(w[0])


def _eigenpair(beta, l, r_max, n, nu):
    r, d, e = _operator(beta, l, r_max, n)
    w, v = eigh_tridiagonal(d, e, select='i', select_range=(nu, nu), lapack_driver='stebz')
    u = v[:, 0]
    u = u / u[np.argmax(np.abs(u))]
    return float(w[0]), r, u


def count_sign_changes(u, floor=NODE_FLOOR):
    u = np.asarray(u)
    significant = u[np.abs(u) > floor * np.max(np.abs(u))]
    return int(np.count_nonzero(np.diff(np.sign(significant)) != 0))


def richardson(e0, e1, e2):
    """
    (extrapolated energy, error estimate, observed order) from energies on
    grids with spacing h, h/2, h/4 and error c2 h^2 + c4 h^4 + ...
    """
    r1 = (4.0 * e1 - e0) / 3.0
    r2 = (4.0 * e2 - e1) / 3.0
    extrapolated = (16.0 * r2 - r1) / 15.0
    d01, d12 = e0 - e1, e1 - e2
    order = math.log2(d01 / d12) if d01 != 0 and d12 != 0 and d01 / d12 > 0 else float('nan')
    return extrapolated, abs(extrapolated - r2), order


def extrapolated_energy(beta, l, r_max, n, nu):
    return richardson(*(_eigenvalue(beta, l, r_max, n * 2 ** k, nu) for k in range(3)))


def _fit_domain(problem, nu, max_doublings):
    """Grow r_max (keeping the spacing) until the state's tail is negligible."""
    r_max, n = problem.r_max, problem.grid_size
    for _ in range(max_doublings + 1):
        if nu >= n - 1:
            raise ConvergenceError(f"grid of {n} intervals cannot hold a state with {nu} nodes")
        energy, r, u = _eigenpair(problem.beta, problem.l, r_max, n, nu)
        tail = abs(u[min(int(0.9 * len(u)), len(u) - 1)])
        if energy < 0 and tail <= constants.TAIL_RATIO:
            return r_max, n, r, u
        log.debug("beta=%g l=%d nu=%d: energy %g, tail %g at r_max=%g; doubling the domain",
                  problem.beta, problem.l, nu, energy, tail, r_max)
        r_max, n = 2.0 * r_max, 2 * n
    if energy >= 0:
        raise UnboundStateError(
            f"no bound state with {nu} nodes at beta={problem.beta}, l={problem.l} (box eigenvalue {energy:g})")
    raise ConvergenceError(
        f"state with {nu} nodes still reaches the boundary at r_max={r_max / 2:g}",
        best_estimate=math.sqrt(-2.0 * energy))


def solve_state(p: RadialProblem, nu: int, max_refinements: int = DEFAULT_REFINEMENTS,
                max_doublings: int = DEFAULT_DOUBLINGS) -> OracleResult:
    """
    Eigenvalue of the state with exactly nu interior nodes.

    Raises UnboundStateError when the state is not bound (or alpha < 1e-3)
    and ConvergenceError, carrying the best estimate, when the grid error
    stays above p.tol.
    """
    if nu < 0:
        raise ValueError(f"nu must be non-negative, got {nu!r}")
    r_max, n, r, u = _fit_domain(p, nu, max_doublings)
    nodes = count_sign_changes(u)
    if nodes != nu:
        raise IntegrityError(f"eigenvector for nu={nu} has {nodes} nodes")
    for _ in range(max_refinements + 1):
        energy, error, order = extrapolated_energy(p.beta, p.l, r_max, n, nu)
        if energy >= 0:
            raise UnboundStateError(f"state with {nu} nodes is not bound at beta={p.beta}, l={p.l}")
        alpha = math.sqrt(-2.0 * energy)
        if alpha < constants.THRESHOLD_ALPHA:
            raise UnboundStateError(f"state with {nu} nodes is at threshold (alpha={alpha:g}) at beta={p.beta}")
        if error <= p.tol:
            break
        log.debug("beta=%g l=%d nu=%d: grid error %g above %g with N=%d; refining",
                  p.beta, p.l, nu, error, p.tol, n)
        n *= 2
    else:
        raise ConvergenceError(
            f"grid error {error:g} above tolerance {p.tol:g} at beta={p.beta}, l={p.l}, nu={nu}",
            best_estimate=alpha)
    log.debug("beta=%g l=%d nu=%d: alpha=%.12g (error %g, order %.2f)", p.beta, p.l, nu, alpha, error, order)
    return OracleResult(nu, energy, alpha, error, order, r_max, n, r, u)


def energy_derivative(beta: float, l: int, nu: int, rel_step: float = constants.FINITE_DIFFERENCE_STEP,
                      grid_size: int = DEFAULT_GRID_SIZE, tol: float = DEFAULT_TOL) -> float:
    """
    dE/dbeta by centered differences at beta +/- rel_step*beta, both solved on
    the domain and grids chosen for beta so their discretization errors cancel.
    """
    central = solve_state(RadialProblem.for_state(beta, l, nu, grid_size, tol), nu)
    step = rel_step * beta
    upper, _, _ = extrapolated_energy(beta + step, l, central.r_max, central.grid_size, nu)
    lower, _, _ = extrapolated_energy(beta - step, l, central.r_max, central.grid_size, nu)
    return (upper - lower) / (2.0 * step)


def validate_exact(sol, tol: float = 1e-6, nu: Optional[int] = None, grid_size: int = DEFAULT_GRID_SIZE,
                   oracle_tol: float = DEFAULT_TOL) -> float:
    """
    oracle alpha - exact alpha at the exact solution's (beta, l).

    ``nu`` defaults to the solution's node count. Raises IntegrityError when
    the deviation exceeds tol.
    """
    nu = sol.nodes if nu is None else nu
    problem = RadialProblem.for_state(sol.beta, sol.l, nu, grid_size, oracle_tol)
    deviation = solve_state(problem, nu).alpha - sol.alpha
    if abs(deviation) > tol:
        raise IntegrityError(
            f"oracle disagrees with exact solution n={sol.n}, l={sol.l}, i={sol.i} "
            f"(nu={nu}): deviation {deviation:.3e}")
    return deviation
