"""
Dense univariate polynomials with exact rational coefficients.

Root counting uses Sturm's theorem: the number of distinct real roots of p in
(a, b] is V(a) - V(b), where V(x) counts the sign changes of the Sturm
sequence p, p', -rem(p, p'), ... evaluated at x. The chain itself comes from
sympy over QQ; signs are evaluated here with integer arithmetic.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import List, Optional, Sequence, Tuple

import numpy as np
import numpy.polynomial.polynomial as npoly
import sympy

from tcoulomb.errors import IntegrityError
from tcoulomb.logger import Logger
import tcoulomb.constants as constants

log = Logger(__name__)

_X = sympy.Symbol('x')

MAX_ISOLATION_DEPTH = 400


def _as_fraction(value):
    if isinstance(value, Fraction):
        return value
    if isinstance(value, sympy.Rational):
        return Fraction(int(value.p), int(value.q))
    return Fraction(value)


def _sign(value):
    return (value > 0) - (value < 0)


@dataclass(frozen=True)
class RationalPolynomial:
    """Coefficients in ascending degree; the zero polynomial has no coefficients."""

    coefficients: Tuple[Fraction, ...]

    def __post_init__(self):
        coeffs = [_as_fraction(c) for c in self.coefficients]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        object.__setattr__(self, 'coefficients', tuple(coeffs))

    @classmethod
    def constant(cls, value):
        return cls((value,))

    @classmethod
    def from_floats(cls, values: Sequence[float]):
        """Exact binary expansion of each float; no rounding happens here."""
        return cls(tuple(Fraction(float(v)) for v in values))

    @classmethod
    def from_sympy(cls, poly):
        return cls(tuple(reversed(poly.all_coeffs())))

    def to_sympy(self):
        coeffs = [sympy.Rational(c.numerator, c.denominator) for c in reversed(self.coefficients)]
        return sympy.Poly(coeffs or [0], _X, domain=sympy.QQ)

    @property
    def degree(self):
        return len(self.coefficients) - 1

    @property
    def is_zero(self):
        return not self.coefficients

    @property
    def leading_coefficient(self):
        return self.coefficients[-1] if self.coefficients else Fraction(0)

    def __add__(self, other):
        other = other if isinstance(other, RationalPolynomial) else RationalPolynomial.constant(other)
        size = max(len(self.coefficients), len(other.coefficients))
        a = self.coefficients + (Fraction(0),) * (size - len(self.coefficients))
        b = other.coefficients + (Fraction(0),) * (size - len(other.coefficients))
        return RationalPolynomial(tuple(x + y for x, y in zip(a, b)))

    __radd__ = __add__

    def __neg__(self):
        return RationalPolynomial(tuple(-c for c in self.coefficients))

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, RationalPolynomial):
            factor = _as_fraction(other)
            return RationalPolynomial(tuple(c * factor for c in self.coefficients))
        if self.is_zero or other.is_zero:
            return RationalPolynomial(())
        product = [Fraction(0)] * (len(self.coefficients) + len(other.coefficients) - 1)
        for i, a in enumerate(self.coefficients):
            if a == 0:
                continue
            for j, b in enumerate(other.coefficients):
                product[i + j] += a * b
        return RationalPolynomial(tuple(product))

    __rmul__ = __mul__

    def derivative(self):
        return RationalPolynomial(tuple(k * c for k, c in enumerate(self.coefficients) if k > 0))

    @cached_property
    def float_coefficients(self):
        return np.array([float(c) for c in self.coefficients] or [0.0])

    @cached_property
    def _integer_coefficients(self):
        common = 1
        for c in self.coefficients:
            common = math.lcm(common, c.denominator)
        return [int(c * common) for c in self.coefficients]

    def evaluate(self, x):
        """Exact Horner evaluation at a rational point."""
        x = _as_fraction(x)
        acc = Fraction(0)
        for c in reversed(self.coefficients):
            acc = acc * x + c
        return acc

    def __call__(self, x):
        if isinstance(x, (Fraction, int)):
            return self.evaluate(x)
        return npoly.polyval(x, self.float_coefficients)

    def sign_at(self, x):
        """Exact sign of p(x) for a rational x, computed on integers."""
        coeffs = self._integer_coefficients
        if not coeffs:
            return 0
        x = _as_fraction(x)
        p, q = x.numerator, x.denominator
        acc = coeffs[-1]
        qpow = 1
        for a in reversed(coeffs[:-1]):
            qpow *= q
            acc = acc * p + a * qpow
        return _sign(acc)

    def sign_at_infinity(self, positive=True):
        if self.is_zero:
            return 0
        s = _sign(self.leading_coefficient)
        if not positive and self.degree % 2 == 1:
            s = -s
        return s

    @cached_property
    def sturm(self):
        return sturm_sequence(self)

    def has_repeated_roots(self):
        if self.degree < 2:
            return False
        sp = self.to_sympy()
        return sympy.gcd(sp, sp.diff(_X)).degree() > 0

    def cauchy_bound(self):
        """Every root satisfies |x| < 1 + max |a_k / a_d|."""
        lead = abs(self.leading_coefficient)
        return 1 + max((abs(c) / lead for c in self.coefficients[:-1]), default=Fraction(0))


def sturm_sequence(poly: RationalPolynomial) -> List[RationalPolynomial]:
    """Sturm chain of the square-free part of poly (sympy normalizes it)."""
    if poly.degree <= 0:
        return [poly]
    return [RationalPolynomial.from_sympy(p) for p in poly.to_sympy().sturm()]


def _variations(signs):
    signs = [s for s in signs if s != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def sign_variations(chain, x=None, positive=True):
    """V(x) for a Sturm chain; x=None means +infinity (or -infinity)."""
    if x is None:
        return _variations([p.sign_at_infinity(positive) for p in chain])
    return _variations([p.sign_at(x) for p in chain])


def count_real_roots(poly: RationalPolynomial, lo=None, hi=None) -> int:
    """
    Number of distinct real roots in (lo, hi]; None stands for -inf / +inf.

    lo must not be a root itself.
    """
    if poly.degree <= 0:
        return 0
    chain = poly.sturm
    v_lo = sign_variations(chain, lo, positive=False) if lo is None else sign_variations(chain, lo)
    v_hi = sign_variations(chain, hi, positive=True)
    return v_lo - v_hi


def _brackets_from_guesses(poly, count, bound):
    """
    Tile (0, bound] at midpoints between float roots and certify one sign
    change per tile; with the Sturm count equal to the number of tiles each
    tile then holds exactly one root.
    """
    guesses = npoly.polyroots(poly.float_coefficients)
    guesses = np.sort(np.real(guesses[(np.abs(np.imag(guesses)) <= 1e-6 * np.abs(guesses)) & (np.real(guesses) > 0)]))
    if len(guesses) != count or (count and guesses[-1] >= float(bound)):
        return None
    edges = [Fraction(0)]
    edges.extend(Fraction(float(0.5 * (a + b))) for a, b in zip(guesses, guesses[1:]))
    edges.append(Fraction(bound))
    brackets = []
    for k, guess in enumerate(guesses):
        lo, hi = edges[k], edges[k + 1]
        s_lo, s_hi = poly.sign_at(lo), poly.sign_at(hi)
        if s_lo == 0 or s_hi == 0 or s_lo == s_hi:
            return None
        delta = 1e-7 * max(1.0, float(guess))
        tight_lo = max(lo, Fraction(float(guess - delta)))
        tight_hi = min(hi, Fraction(float(guess + delta)))
        if tight_lo < tight_hi:
            t_lo, t_hi = poly.sign_at(tight_lo), poly.sign_at(tight_hi)
            if t_lo != 0 and t_hi != 0 and t_lo != t_hi:
                lo, hi = tight_lo, tight_hi
        brackets.append((lo, hi))
    return brackets


def _brackets_by_bisection(poly, lo, hi):
    """Split (lo, hi] until each piece holds exactly one root (Sturm counts)."""
    chain = poly.sturm
    pending = [(lo, hi, sign_variations(chain, lo) - sign_variations(chain, hi), 0)]
    brackets = []
    while pending:
        a, b, count, depth = pending.pop()
        if count == 0:
            continue
        if count == 1:
            brackets.append((a, b))
            continue
        if depth > MAX_ISOLATION_DEPTH:
            raise IntegrityError(f"could not separate {count} roots in ({float(a)}, {float(b)}]")
        mid = (a + b) / 2
        if poly.sign_at(mid) == 0:
            mid = a + (b - a) * Fraction(1023, 2048)
        v_mid = sign_variations(chain, mid)
        left = sign_variations(chain, a) - v_mid
        pending.append((a, mid, left, depth + 1))
        pending.append((mid, b, count - left, depth + 1))
    brackets.sort()
    resolved = []
    for a, b in brackets:
        if poly.sign_at(b) == 0:
            # the root is exactly b; give it a bracket with a sign change
            resolved.append((b, b))
        else:
            resolved.append((a, b))
    return resolved


def refine_root(poly, lo, hi, tol, derivative=None, polish_steps=constants.NEWTON_POLISH_STEPS):
    """
    Bisect an exact sign-change bracket down to width tol, then polish with
    Newton steps whose iterate is a float but whose step is exact.
    """
    if lo == hi:
        return float(lo)
    s_lo = poly.sign_at(lo)
    tol = Fraction(tol)
    while hi - lo > tol:
        mid = (lo + hi) / 2
        s_mid = poly.sign_at(mid)
        if s_mid == 0:
            return float(mid)
        if s_mid == s_lo:
            lo = mid
        else:
            hi = mid
    derivative = derivative or poly.derivative()
    x = float((lo + hi) / 2)
    for _ in range(polish_steps):
        exact = Fraction(x)
        slope = derivative.evaluate(exact)
        if slope == 0:
            break
        candidate = float(exact - poly.evaluate(exact) / slope)
        if not lo <= candidate <= hi or candidate == x:
            break
        x = candidate
    return x


def narrow_bracket(poly, lo, hi, width):
    """Exact bisection of a sign-change bracket down to the given width."""
    if lo == hi:
        return lo, hi
    s_lo = poly.sign_at(lo)
    width = Fraction(width)
    while hi - lo > width:
        mid = (lo + hi) / 2
        s_mid = poly.sign_at(mid)
        if s_mid == 0:
            return mid, mid
        if s_mid == s_lo:
            lo = mid
        else:
            hi = mid
    return lo, hi


def check_separation(roots):
    for a, b in zip(roots, roots[1:]):
        if b - a < constants.ROOT_SEPARATION * max(1.0, abs(a)):
            raise IntegrityError(f"roots {a!r} and {b!r} are not separated")


def isolate_positive_roots(poly: RationalPolynomial, expected: Optional[int] = None) -> List[Tuple[Fraction, Fraction]]:
    """
    One exact sign-change bracket per strictly positive real root, ascending.

    Raises IntegrityError on repeated roots, a root at zero, or a count
    different from ``expected``.
    """
    if poly.degree <= 0:
        if expected:
            raise IntegrityError(f"expected {expected} positive roots of a constant polynomial")
        return []
    if poly.sign_at(0) == 0:
        raise IntegrityError("zero is a root of the polynomial")
    if poly.has_repeated_roots():
        raise IntegrityError("polynomial has a repeated root")
    count = count_real_roots(poly, Fraction(0), None)
    if expected is not None and count != expected:
        raise IntegrityError(f"found {count} distinct positive real roots, expected {expected}")
    if count == 0:
        return []
    bound = poly.cauchy_bound()
    brackets = _brackets_from_guesses(poly, count, bound)
    if brackets is None:
        log.debug("float root guesses not certified for degree %d, isolating by Sturm bisection", poly.degree)
        brackets = _brackets_by_bisection(poly, Fraction(0), bound)
    if len(brackets) != count:
        raise IntegrityError(f"isolated {len(brackets)} roots, Sturm count is {count}")
    return brackets


def positive_real_roots(poly: RationalPolynomial, tol: float, expected: Optional[int] = None) -> List[float]:
    """
    All strictly positive real roots, ascending, each certified to absolute
    accuracy tol.

    Raises IntegrityError on repeated roots, roots closer than the separation
    limit, a root at zero, or a count different from ``expected``.
    """
    brackets = isolate_positive_roots(poly, expected)
    derivative = poly.derivative()
    roots = [refine_root(poly, lo, hi, tol, derivative) for lo, hi in brackets]
    check_separation(roots)
    return roots
