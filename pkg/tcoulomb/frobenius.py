"""
Exact solutions of the truncated Coulomb radial equation

    [-1/2 d^2/dr^2 + l(l+1)/(2 r^2) - beta/(r+1)] f = E f,   f(0) = 0,

from the ansatz f(r) = r^(l+1) (1+r) exp(-alpha r) sum_j c_j r^j with
alpha = sqrt(-2E). The coefficients obey the three-term recurrence

    c_{j+2} = A_j c_{j+1} + B_j c_j,   c_{-1} = 0, c_0 = 1,
    A_j = [2 alpha (j+l+2) - j^2 - j(2l+5) - 2(2l+3)] / [(j+2)(j+2l+3)],
    B_j = 2 [alpha (j+l+2) - beta] / [(j+2)(j+2l+3)],

and the series terminates at degree n when B_n = 0 and c_{n+1} = 0. The first
condition gives beta = alpha (n+l+2); substituting it up front makes every c_j
a polynomial in alpha alone, and the roots of c_{n+1}(alpha) are the exact
eigenvalues.
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Tuple

import numpy as np
import numpy.polynomial.polynomial as npoly

from tcoulomb.errors import IntegrityError, ResourceLimitError
from tcoulomb.logger import Logger
from tcoulomb.polynomial import (RationalPolynomial, check_separation, count_real_roots, isolate_positive_roots,
                                 narrow_bracket, positive_real_roots)
import tcoulomb.constants as constants

log = Logger(__name__)

ONE = RationalPolynomial.constant(1)
ZERO = RationalPolynomial(())


@dataclass(frozen=True)
class RecurrenceCoeffs:
    """
    A_j and B_j as polynomials in alpha.

    With ``n`` set, beta = alpha (n+l+2) has been substituted and ``b_beta`` is
    zero; otherwise B_j = b(alpha) + b_beta * beta.
    """

    j: int
    l: int
    a: RationalPolynomial
    b: RationalPolynomial
    b_beta: Fraction
    n: Optional[int] = None


@dataclass(frozen=True)
class ExactSolution:
    """
    One exact solution. ``alpha_exact`` is a rational within 2^-200 of the
    root and ``series`` holds c_0..c_n evaluated exactly there; ``alpha`` and
    ``coeffs`` are their nearest doubles.
    """

    n: int
    l: int
    i: int
    alpha: float
    beta: float
    coeffs: Tuple[float, ...]
    nodes: int
    energy_tilde: float
    alpha_exact: Optional[Fraction] = field(default=None, repr=False, compare=False)
    series: Optional[Tuple[Fraction, ...]] = field(default=None, repr=False, compare=False)

    @property
    def principal(self):
        """n + l + 2, the hydrogen-like principal number of the breve frame."""
        return self.n + self.l + 2

    def exact_parameters(self) -> Tuple[Fraction, Tuple[Fraction, ...]]:
        """(alpha, c_0..c_n) as rationals, falling back to the doubles."""
        alpha = self.alpha_exact if self.alpha_exact is not None else Fraction(self.alpha)
        series = self.series if self.series is not None else tuple(Fraction(c) for c in self.coeffs)
        return alpha, series


def _denominator(j, l):
    return (j + 2) * (j + 2 * l + 3)


def recurrence_coeffs(j: int, l: int, n: Optional[int] = None) -> RecurrenceCoeffs:
    if j < -1 or l < 0:
        raise ValueError(f"recurrence needs j >= -1 and l >= 0, got j={j}, l={l}")
    d = _denominator(j, l)
    a = RationalPolynomial((Fraction(-(j * j + j * (2 * l + 5) + 2 * (2 * l + 3)), d),
                            Fraction(2 * (j + l + 2), d)))
    if n is None:
        return RecurrenceCoeffs(j, l, a, RationalPolynomial((0, Fraction(2 * (j + l + 2), d))), Fraction(-2, d))
    b = RationalPolynomial((0, Fraction(2 * (j - n), d)))
    return RecurrenceCoeffs(j, l, a, b, Fraction(0), n)


def recurrence_step(j: int, l: int, n: int, c_prev: RationalPolynomial, c_curr: RationalPolynomial,
                    max_degree: int = constants.MAX_ORDER + 1) -> RationalPolynomial:
    """c_{j+2} = A_j c_{j+1} + B_j c_j with beta = alpha (n+l+2) substituted."""
    if j + 2 > max_degree:
        raise ResourceLimitError(f"c_{j + 2} would have degree {j + 2}, above the limit {max_degree}")
    coeffs = recurrence_coeffs(j, l, n)
    return coeffs.a * c_curr + coeffs.b * c_prev


@lru_cache(maxsize=None)
def series_polynomials(n: int, l: int, max_order: int = constants.MAX_ORDER) -> Tuple[RationalPolynomial, ...]:
    """c_0 .. c_{n+1} as exact polynomials in alpha."""
    if n < 0 or l < 0:
        raise ValueError(f"n and l must be non-negative, got n={n}, l={l}")
    if n > max_order:
        raise ResourceLimitError(f"truncation order {n} exceeds the maximum {max_order}")
    polys = [ZERO, ONE]
    for j in range(-1, n):
        polys.append(recurrence_step(j, l, n, polys[-2], polys[-1], max_order + 1))
    return tuple(polys[1:])


def truncation_polynomial(n: int, l: int, max_order: int = constants.MAX_ORDER) -> RationalPolynomial:
    return series_polynomials(n, l, max_order)[n + 1]


def solve_truncation(n: int, l: int, tol: float = 1e-12, max_order: int = constants.MAX_ORDER):
    """
    All n+1 exact solutions of order n, ascending in alpha (i = 1..n+1).

    Each root is bisected on its exact bracket to 2^-200, far below tol, and
    the series coefficients are evaluated exactly at that point. Raises
    IntegrityError when c_{n+1} has fewer than n+1 simple positive real roots.
    """
    if not 0 < tol < 1e-8:
        raise ValueError(f"tol must lie in (0, 1e-8), got {tol!r}")
    polys = series_polynomials(n, l, max_order)
    truncation = polys[n + 1]
    width = Fraction(1, 2 ** constants.EXACT_ALPHA_BITS)
    try:
        brackets = isolate_positive_roots(truncation, expected=n + 1)
        exact_roots = [sum(narrow_bracket(truncation, lo, hi, width)) / 2 for lo, hi in brackets]
        roots = [float(alpha) for alpha in exact_roots]
        check_separation(roots)
    except IntegrityError as e:
        raise IntegrityError(f"truncation polynomial (n={n}, l={l}): {e}") from e
    log.debug("n=%d l=%d: alpha roots %s", n, l, roots)
    principal = n + l + 2
    solutions = []
    for index, (alpha, exact) in enumerate(zip(roots, exact_roots), start=1):
        series = tuple(c.evaluate(exact) for c in polys[:n + 1])
        solutions.append(ExactSolution(
            n=n,
            l=l,
            i=index,
            alpha=alpha,
            beta=alpha * principal,
            coeffs=tuple(float(c) for c in series),
            nodes=n + 1 - index,
            energy_tilde=-0.5 * alpha * alpha,
            alpha_exact=exact,
            series=series,
        ))
    return solutions


def closed_form_n1(l: int):
    """(alpha_1, alpha_2, c1_1, c1_2) for n = 1 in closed form."""
    a, b = math.sqrt(l + 2), math.sqrt(l + 6)
    return ((3 * a - b) / (2 * a), (b + 3 * a) / (2 * a), (a - b) / (2 * a), (b + a) / (2 * a))


def breve_energy(sol: ExactSolution) -> float:
    return sol.energy_tilde / sol.beta ** 2


def node_polynomial(sol: ExactSolution) -> RationalPolynomial:
    """sum_j c_j r^j with the coefficients taken at the exact alpha."""
    return RationalPolynomial(sol.exact_parameters()[1])


def node_positions(sol: ExactSolution, tol: float = 1e-12):
    return positive_real_roots(node_polynomial(sol), tol)


def count_nodes(sol: ExactSolution) -> int:
    """
    Number of zeros of f in (0, inf).

    The prefactor r^(l+1) (1+r) exp(-alpha r) is positive there, so these are
    the positive roots of sum_j c_j r^j, counted with a Sturm chain. Raises
    IntegrityError when the count is not the solution's node number.
    """
    poly = node_polynomial(sol)
    nodes = count_real_roots(poly, Fraction(0), None) if poly.degree > 0 else 0
    if nodes != sol.nodes:
        raise IntegrityError(f"n={sol.n}, l={sol.l}, i={sol.i}: {nodes} nodes, expected {sol.nodes}")
    return nodes


def eval_wavefunction(sol: ExactSolution, r):
    """Unnormalized f(r); accepts scalars or arrays."""
    r = np.asarray(r, dtype=float)
    value = r ** (sol.l + 1) * (1.0 + r) * np.exp(-sol.alpha * r) * npoly.polyval(r, sol.coeffs)
    return float(value) if value.ndim == 0 else value


def residual_samples(sol: ExactSolution, count: int = 50, r_min: float = 1e-3, extent: float = 30.0):
    """count log-spaced radii on [r_min, extent / alpha]."""
    return np.logspace(math.log10(r_min), math.log10(extent / sol.alpha), count)


def ode_residual(sol: ExactSolution, r, relative: bool = False):
    """
    Residual -f''/2 + l(l+1) f/(2 r^2) - beta f/(r+1) - E f at r > 0.

    Writing f = g p with g = r^(l+1) (1+r) exp(-alpha r), the product rule
    gives f''/f in closed form, so the residual is g times a rational function
    of r and alpha. That rational part is evaluated exactly from the exact
    alpha and coefficients; only g is a double. With ``relative`` the residual
    is divided by max(|f|, 1).
    """
    radii = np.asarray(r, dtype=float)
    if np.any(radii <= 0):
        raise ValueError("the residual is evaluated at r > 0")
    alpha, series = sol.exact_parameters()
    l = sol.l
    p = RationalPolynomial(series)
    dp = p.derivative()
    d2p = dp.derivative()
    beta = alpha * sol.principal
    energy = -alpha * alpha / 2
    values = []
    for x in radii.ravel():
        q = Fraction(float(x))
        du = (l + 1) / q + 1 / (1 + q) - alpha
        d2u = -(l + 1) / q ** 2 - 1 / (1 + q) ** 2
        pq = p.evaluate(q)
        reduced = (-((du * du + d2u) * pq + 2 * du * dp.evaluate(q) + d2p.evaluate(q)) / 2
                   + (Fraction(l * (l + 1), 2) / q ** 2 - beta / (q + 1) - energy) * pq)
        g = x ** (l + 1) * (1.0 + x) * math.exp(-float(alpha) * x)
        value = g * float(reduced)
        if relative:
            value = abs(value) / max(abs(g * float(pq)), 1.0)
        values.append(value)
    values = np.array(values).reshape(radii.shape)
    return float(values) if values.ndim == 0 else values
