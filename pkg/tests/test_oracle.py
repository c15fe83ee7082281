import math
import unittest

import numpy as np

from tcoulomb.errors import ConvergenceError, IntegrityError, UnboundStateError
from tcoulomb.frobenius import solve_truncation
from tcoulomb.oracle import (RadialProblem, count_sign_changes, energy_derivative, richardson, solve_state,
                             validate_exact)


def solve(beta, l, nu, **kwargs):
    return solve_state(RadialProblem.for_state(beta, l, nu, **kwargs), nu)


class TestRadialProblem(unittest.TestCase):
    def test_domain_heuristic(self):
        self.assertEqual(RadialProblem.for_state(40.0, 0, 0).r_max, 30.0)
        self.assertEqual(RadialProblem.for_state(2.0, 0, 0).r_max, 50.0)

    def test_validation(self):
        with self.assertRaises(ValueError):
            RadialProblem(1.0, 0, 30.0, grid_size=2001)
        with self.assertRaises(ValueError):
            RadialProblem(1.0, 0, 30.0, grid_size=50)
        with self.assertRaises(ValueError):
            RadialProblem(1.0, 0, 30.0, tol=1e-3)
        with self.assertRaises(ValueError):
            RadialProblem(-1.0, 0, 30.0)
        with self.assertRaises(ValueError):
            solve_state(RadialProblem(1.0, 0, 30.0), -1)


class TestRichardson(unittest.TestCase):
    def test_removes_quadratic_and_quartic_errors(self):
        energies = [-1.0 + 0.3 * h ** 2 - 0.2 * h ** 4 for h in (0.1, 0.05, 0.025)]
        value, error, order = richardson(*energies)
        self.assertAlmostEqual(value, -1.0, places=12)
        # only the h^4 part of the last single-level value remains
        self.assertAlmostEqual(error, 3.125e-7, delta=1e-12)
        self.assertAlmostEqual(order, 2.0, delta=0.05)


class TestSolveState(unittest.TestCase):
    def test_first_exact_point(self):
        result = solve(2.0, 0, 0)
        self.assertAlmostEqual(result.alpha, 1.0, delta=1e-6)
        self.assertLessEqual(result.grid_error_estimate, 1e-8)
        self.assertAlmostEqual(result.alpha, math.sqrt(-2.0 * result.energy_tilde), places=14)

    def test_benchmark(self):
        result = solve(40.0, 0, 0)
        self.assertAlmostEqual(result.alpha, 6.854786377, delta=1e-6)

    def test_second_order_upper_root(self):
        result = solve(4.5 + 1.5 * math.sqrt(3), 0, 0)
        self.assertAlmostEqual(result.alpha, 1.5 + math.sqrt(3) / 2, delta=1e-6)

    def test_observed_order_is_two(self):
        result = solve(2.0, 0, 0)
        self.assertAlmostEqual(result.observed_order, 2.0, delta=0.5)

    def test_eigenvector_has_requested_nodes(self):
        for nu in range(4):
            result = solve(10.0, 1, nu)
            self.assertEqual(result.nu, nu)
            self.assertEqual(count_sign_changes(result.u), nu)
            self.assertEqual(len(result.r), len(result.u))

    def test_alpha_decreases_with_nodes(self):
        alphas = [solve(10.0, 0, nu).alpha for nu in range(4)]
        self.assertTrue(all(b < a for a, b in zip(alphas, alphas[1:])))

    def test_threshold_state_is_unbound(self):
        with self.assertRaises(UnboundStateError):
            solve(5e-4, 0, 0)

    def test_convergence_failure_carries_estimate(self):
        problem = RadialProblem.for_state(40.0, 0, 0, tol=1e-12)
        with self.assertRaises(ConvergenceError) as context:
            solve_state(problem, 0, max_refinements=0)
        self.assertAlmostEqual(context.exception.best_estimate, 6.854786377, delta=1e-4)


class TestValidateExact(unittest.TestCase):
    def test_every_low_order_exact_point(self):
        for n in range(6):
            for l in range(4):
                for sol in solve_truncation(n, l):
                    deviation = validate_exact(sol, 1e-6)
                    self.assertLessEqual(abs(deviation), 1e-6, msg=f"n={n}, l={l}, i={sol.i}")

    def test_ground_state_deviation_within_grid_error(self):
        (sol,) = solve_truncation(0, 0)
        deviation = validate_exact(sol)
        self.assertLess(abs(deviation), 1e-7)

    def test_wrong_node_count_is_detected(self):
        sol = solve_truncation(2, 0)[1]
        with self.assertRaises(IntegrityError):
            validate_exact(sol, 1e-6, nu=sol.nodes + 1)


class TestEnergyDerivative(unittest.TestCase):
    def test_hydrogen_like_limit(self):
        # far from the cutoff -beta/(r+1) acts like Coulomb: dE/dbeta -> -beta/(nu+1)^2 for small beta
        derivative = energy_derivative(0.05, 0, 0)
        self.assertLess(derivative, 0.0)
        self.assertAlmostEqual(derivative, -0.05, delta=0.01)

    def test_negative_for_bound_states(self):
        for nu in range(3):
            self.assertTrue(-1.0 < energy_derivative(20.0, 1, nu) < 0.0)


if __name__ == '__main__':
    unittest.main()
