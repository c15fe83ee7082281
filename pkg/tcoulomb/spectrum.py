"""
Spectral curves alpha_{nu,l}(beta) assembled from exact truncation points.

The solution with root index i of the order-n truncation polynomial has
nu = n + 1 - i nodes, so the curve for a given (nu, l) takes one point from
each order n >= nu. Between the exact points the curve is interpolated with
a single Lagrange polynomial through all of them (barycentric form); the
plot samples join neighbouring exact points with straight segments.
"""

import enum
from dataclasses import dataclass
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.integrate import quad
from scipy.interpolate import BarycentricInterpolator

from tcoulomb.errors import IntegrityError, InterpolationRangeError, QuadratureError
from tcoulomb.frobenius import ExactSolution, eval_wavefunction, solve_truncation
from tcoulomb.logger import Logger
from tcoulomb.oracle import DEFAULT_GRID_SIZE, DEFAULT_TOL, energy_derivative
import tcoulomb.constants as constants

log = Logger(__name__)

LEAVE_ONE_OUT_TARGET = 1e-3


class PointSource(enum.Enum):
    EXACT = 'exact'
    ORACLE = 'oracle'
    INTERPOLATED = 'interpolated'


@dataclass(frozen=True)
class CurvePoint:
    beta: float
    alpha: float
    source: PointSource = PointSource.EXACT
    n: Optional[int] = None
    i: Optional[int] = None

    def __post_init__(self):
        if not self.beta > 0 or not self.alpha > 0:
            raise ValueError(f"curve points need beta > 0 and alpha > 0, got ({self.beta!r}, {self.alpha!r})")


@dataclass(frozen=True)
class SpectralCurve:
    nu: int
    l: int
    points: Tuple[CurvePoint, ...]

    def __post_init__(self):
        object.__setattr__(self, 'points', tuple(sorted(self.points, key=lambda p: p.beta)))
        for a, b in zip(self.points, self.points[1:]):
            if not b.beta > a.beta:
                raise IntegrityError(f"curve ({self.nu}, {self.l}) has repeated beta {a.beta!r}")
            if not b.alpha > a.alpha:
                raise IntegrityError(
                    f"alpha does not increase along curve ({self.nu}, {self.l}) "
                    f"between beta={a.beta!r} and beta={b.beta!r}")
        for p in self.points:
            if p.source is PointSource.EXACT and p.n is not None and p.n + 1 - p.i != self.nu:
                raise IntegrityError(f"exact point n={p.n}, i={p.i} does not have {self.nu} nodes")

    @property
    def curve_id(self):
        return f"nu={self.nu},l={self.l}"

    @property
    def betas(self):
        return np.array([p.beta for p in self.points])

    @property
    def alphas(self):
        return np.array([p.alpha for p in self.points])

    @property
    def hull(self):
        return self.points[0].beta, self.points[-1].beta


@dataclass(frozen=True)
class FamilyEntry:
    """One row of a degeneracy or monotonicity table; alpha is None when ``error`` is set."""

    nu: int
    l: int
    beta: float
    alpha: Optional[float]
    error: Optional[str] = None


@lru_cache(maxsize=None)
def exact_solutions(n: int, l: int, tol: float = 1e-12, max_order: int = constants.MAX_ORDER):
    return tuple(solve_truncation(n, l, tol, max_order))


def build_curve(nu: int, l: int, n_max: int, tol: float = 1e-12,
                max_order: int = constants.MAX_ORDER) -> SpectralCurve:
    """One exact point per order n = nu..n_max, the root with i = n + 1 - nu."""
    if nu < 0 or l < 0:
        raise ValueError(f"nu and l must be non-negative, got nu={nu}, l={l}")
    if n_max < nu:
        raise ValueError(f"n_max={n_max} is below nu={nu}; the curve would be empty")
    points = []
    for n in range(nu, n_max + 1):
        sol = exact_solutions(n, l, tol, max_order)[n - nu]
        points.append(CurvePoint(sol.beta, sol.alpha, PointSource.EXACT, sol.n, sol.i))
    curve = SpectralCurve(nu, l, tuple(points))
    log.debug("curve %s: %d points over beta in [%g, %g]", curve.curve_id, len(points), *curve.hull)
    return curve


def _interpolator(curve):
    if len(curve.points) < 2:
        raise InterpolationRangeError(f"curve {curve.curve_id} has {len(curve.points)} point(s); need at least 2")
    return BarycentricInterpolator(curve.betas, curve.alphas)


def _check_hull(curve, beta):
    lo, hi = curve.hull
    if not lo <= beta <= hi:
        raise InterpolationRangeError(
            f"beta={beta!r} lies outside the exact points of curve {curve.curve_id} ([{lo!r}, {hi!r}])")


def _check_bracket(curve, beta, alpha):
    """An increasing curve passes between the exact points around beta."""
    k = int(np.searchsorted(curve.betas, beta))
    below, above = curve.points[k - 1], curve.points[k]
    if not below.alpha < alpha < above.alpha:
        raise IntegrityError(
            f"interpolated alpha={alpha!r} at beta={beta!r} on curve {curve.curve_id} leaves "
            f"({below.alpha!r}, {above.alpha!r}), the values at the neighbouring exact points")


def interpolate(curve: SpectralCurve, beta: float) -> float:
    """
    alpha at beta from the Lagrange polynomial through every point of the
    curve. Exact points are reproduced exactly; extrapolation is refused.

    Raises IntegrityError when the polynomial oscillates out of the interval
    spanned by the two neighbouring exact points.
    """
    interpolator = _interpolator(curve)
    _check_hull(curve, beta)
    for p in curve.points:
        if p.beta == beta:
            return p.alpha
    alpha = float(interpolator(beta))
    _check_bracket(curve, beta, alpha)
    return alpha


def dense_samples(curve: SpectralCurve, count: int = constants.DEFAULT_CONFIG['spectrum']['dense_samples']):
    """
    count evenly spaced samples over the curve's beta range, joined by
    straight segments between neighbouring exact points.
    """
    if count < 2:
        raise ValueError(f"count must be at least 2, got {count}")
    if len(curve.points) < 2:
        raise InterpolationRangeError(f"curve {curve.curve_id} has {len(curve.points)} point(s); need at least 2")
    betas = np.linspace(*curve.hull, count)
    alphas = np.interp(betas, curve.betas, curve.alphas)
    return tuple(CurvePoint(float(b), float(a), PointSource.INTERPOLATED) for b, a in zip(betas, alphas))


def leave_one_out(curve: SpectralCurve, target: float = LEAVE_ONE_OUT_TARGET) -> List[Tuple[float, float]]:
    """
    (beta, interpolated - exact alpha) for every interior point, each
    interpolated from the other points of the curve. Deviations above
    target are logged, not raised: on long curves the polynomial through the
    remaining points swings far off near the sparse upper end.
    """
    deviations = []
    points = curve.points
    for k in range(1, len(points) - 1):
        rest = points[:k] + points[k + 1:]
        interpolator = BarycentricInterpolator([p.beta for p in rest], [p.alpha for p in rest])
        deviation = float(interpolator(points[k].beta)) - points[k].alpha
        deviations.append((points[k].beta, deviation))
    outliers = [d for _, d in deviations if abs(d) > target]
    if outliers:
        log.warning("curve %s: %d of %d leave-one-out deviations exceed %g (largest %.3e)",
                    curve.curve_id, len(outliers), len(deviations), target, max(outliers, key=abs))
    return deviations


def curve_energy(curve: SpectralCurve):
    """(beta, tilde energy, breve energy) for every point."""
    return [(p.beta, -0.5 * p.alpha ** 2, -0.5 * (p.alpha / p.beta) ** 2) for p in curve.points]


def _integrate(func, upper, tol):
    result = quad(func, 0.0, upper, epsabs=0.0, epsrel=tol, limit=200, full_output=1)
    value, abserr = result[0], result[1]
    if len(result) > 3 or abserr > max(10.0 * tol * abs(value), 1e-300):
        raise QuadratureError(f"quadrature did not reach {tol:g} on [0, {upper:g}] (error {abserr:g})")
    return value


def expectation_inverse_distance(sol: ExactSolution, quadrature_tol: float = 1e-10) -> float:
    """<1/(r+1)> over the exact eigenfunction."""
    upper = (2.0 * sol.principal + 40.0) / sol.alpha
    norm = _integrate(lambda r: eval_wavefunction(sol, r) ** 2, upper, quadrature_tol)
    weighted = _integrate(lambda r: eval_wavefunction(sol, r) ** 2 / (r + 1.0), upper, quadrature_tol)
    return weighted / norm


def hellmann_feynman_check(sol: ExactSolution, quadrature_tol: float = 1e-10,
                           grid_size: int = DEFAULT_GRID_SIZE, oracle_tol: float = DEFAULT_TOL):
    """
    (lhs, rhs): dE/dbeta from oracle energies at beta +/- 1e-4 beta, and
    -<1/(r+1)> from quadrature over the exact eigenfunction.
    """
    rhs = -expectation_inverse_distance(sol, quadrature_tol)
    lhs = energy_derivative(sol.beta, sol.l, sol.nodes, constants.FINITE_DIFFERENCE_STEP, grid_size, oracle_tol)
    log.debug("n=%d l=%d i=%d: dE/dbeta=%.10g, -<1/(r+1)>=%.10g", sol.n, sol.l, sol.i, lhs, rhs)
    return lhs, rhs


def degeneracy_split(k: int, beta_grid: Sequence[float], n_max: int, tol: float = 1e-12,
                     max_order: int = constants.MAX_ORDER) -> List[FamilyEntry]:
    """
    Interpolated alpha for every state of the Coulomb-degenerate family
    nu + l = k at each beta of the grid; betas outside a curve's exact points
    get an error entry instead.
    """
    if k < 1:
        raise ValueError(f"k must be at least 1, got {k}")
    if n_max < k:
        raise ValueError(f"n_max={n_max} cannot build the nu={k} curve")
    curves = [build_curve(nu, k - nu, n_max, tol, max_order) for nu in range(k + 1)]
    entries = []
    for beta in beta_grid:
        for curve in curves:
            try:
                entries.append(FamilyEntry(curve.nu, curve.l, beta, interpolate(curve, beta)))
            except InterpolationRangeError as e:
                entries.append(FamilyEntry(curve.nu, curve.l, beta, None, str(e)))
    return entries


def monotonicity_scan(l_max: int, beta: float, n_max: int, tol: float = 1e-12,
                      max_order: int = constants.MAX_ORDER) -> List[FamilyEntry]:
    """
    Ground-state alpha_{0,l}(beta) for l = 0..l_max. Raises IntegrityError
    unless the interpolated values strictly decrease with l.
    """
    if l_max < 0:
        raise ValueError(f"l_max must be non-negative, got {l_max}")
    entries = []
    for l in range(l_max + 1):
        curve = build_curve(0, l, n_max, tol, max_order)
        try:
            entries.append(FamilyEntry(0, l, beta, interpolate(curve, beta)))
        except InterpolationRangeError as e:
            entries.append(FamilyEntry(0, l, beta, None, str(e)))
    values = [e for e in entries if e.alpha is not None]
    for a, b in zip(values, values[1:]):
        if not b.alpha < a.alpha:
            raise IntegrityError(f"alpha_0,{b.l}({beta}) = {b.alpha!r} is not below alpha_0,{a.l} = {a.alpha!r}")
    return entries


def family_ordered(entries: Sequence[FamilyEntry]) -> bool:
    """True when, at every beta, alpha strictly decreases as nu grows (and l shrinks)."""
    by_beta = {}
    for e in entries:
        if e.alpha is not None:
            by_beta.setdefault(e.beta, []).append(e)
    for row in by_beta.values():
        row.sort(key=lambda e: e.nu)
        if any(not b.alpha < a.alpha for a, b in zip(row, row[1:])):
            return False
    return True
