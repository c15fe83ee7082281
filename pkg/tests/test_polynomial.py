import math
import unittest
from fractions import Fraction

from tcoulomb.errors import IntegrityError
from tcoulomb.polynomial import (RationalPolynomial, _brackets_by_bisection, count_real_roots, isolate_positive_roots,
                                 narrow_bracket, positive_real_roots, sturm_sequence)


def from_roots(*roots):
    poly = RationalPolynomial.constant(1)
    for root in roots:
        poly = poly * RationalPolynomial((-Fraction(root), 1))
    return poly


class TestRationalPolynomial(unittest.TestCase):
    def test_trailing_zeros_are_dropped(self):
        poly = RationalPolynomial((1, 2, 0, 0))
        self.assertEqual(poly.degree, 1)
        self.assertTrue(RationalPolynomial((0, 0)).is_zero)

    def test_arithmetic(self):
        a = RationalPolynomial((1, 1))
        b = RationalPolynomial((-1, 1))
        self.assertEqual((a * b).coefficients, (-1, 0, 1))
        self.assertEqual((a + b).coefficients, (0, 2))
        self.assertTrue((a - a).is_zero)
        self.assertEqual((a * Fraction(1, 2)).coefficients, (Fraction(1, 2), Fraction(1, 2)))

    def test_derivative(self):
        self.assertEqual(RationalPolynomial((5, 3, 2)).derivative().coefficients, (3, 4))

    def test_exact_evaluation(self):
        poly = RationalPolynomial((Fraction(1, 3), 0, 1))
        self.assertEqual(poly.evaluate(Fraction(1, 2)), Fraction(7, 12))
        self.assertAlmostEqual(poly(0.5), 7 / 12)

    def test_sign_at(self):
        poly = from_roots(1, 2)
        self.assertEqual(poly.sign_at(Fraction(3, 2)), -1)
        self.assertEqual(poly.sign_at(0), 1)
        self.assertEqual(poly.sign_at(2), 0)
        self.assertEqual(poly.sign_at_infinity(positive=False), 1)

    def test_cauchy_bound(self):
        poly = from_roots(1, 2, 30)
        self.assertGreater(poly.cauchy_bound(), 30)


class TestRootCounting(unittest.TestCase):
    def test_sturm_sequence_ends_in_constant(self):
        chain = sturm_sequence(from_roots(1, 2, 3))
        self.assertEqual(chain[-1].degree, 0)

    def test_counts_on_intervals(self):
        poly = from_roots(-1, 1, 2, 3)
        self.assertEqual(count_real_roots(poly), 4)
        self.assertEqual(count_real_roots(poly, Fraction(0), None), 3)
        self.assertEqual(count_real_roots(poly, Fraction(0), Fraction(3, 2)), 1)
        self.assertEqual(count_real_roots(poly, Fraction(0), Fraction(2)), 2)

    def test_complex_roots_are_not_counted(self):
        self.assertEqual(count_real_roots(RationalPolynomial((1, 0, 1))), 0)

    def test_positive_roots(self):
        roots = positive_real_roots(RationalPolynomial((-2, 0, 1)), 1e-12)
        self.assertEqual(len(roots), 1)
        self.assertAlmostEqual(roots[0], math.sqrt(2), delta=1e-12)

    def test_close_roots_are_isolated_by_bisection(self):
        poly = from_roots(Fraction(1), Fraction(1001, 1000), Fraction(3))
        brackets = _brackets_by_bisection(poly, Fraction(0), poly.cauchy_bound())
        self.assertEqual(len(brackets), 3)
        roots = positive_real_roots(poly, 1e-13, expected=3)
        for found, exact in zip(roots, (1.0, 1.001, 3.0)):
            self.assertAlmostEqual(found, exact, delta=1e-12)

    def test_repeated_root_is_an_integrity_error(self):
        with self.assertRaises(IntegrityError):
            positive_real_roots(from_roots(1, 1, 2), 1e-12)

    def test_wrong_count_is_an_integrity_error(self):
        with self.assertRaises(IntegrityError):
            positive_real_roots(from_roots(1, 2), 1e-12, expected=3)

    def test_zero_root_is_an_integrity_error(self):
        with self.assertRaises(IntegrityError):
            positive_real_roots(from_roots(0, 2), 1e-12)

    def test_narrow_bracket_reaches_width(self):
        poly = RationalPolynomial((-2, 0, 1))
        (bracket,) = isolate_positive_roots(poly)
        lo, hi = narrow_bracket(poly, *bracket, Fraction(1, 2 ** 200))
        self.assertLessEqual(hi - lo, Fraction(1, 2 ** 200))
        self.assertLessEqual(lo * lo, 2)
        self.assertGreaterEqual(hi * hi, 2)

    def test_narrow_bracket_stops_on_exact_root(self):
        poly = from_roots(Fraction(1, 2), 3)
        lo, hi = narrow_bracket(poly, Fraction(0), Fraction(1), Fraction(1, 2 ** 100))
        self.assertEqual((lo, hi), (Fraction(1, 2), Fraction(1, 2)))


if __name__ == '__main__':
    unittest.main()
