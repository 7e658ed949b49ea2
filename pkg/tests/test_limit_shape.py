import math
import os
import unittest

import numpy as np

from src import InvalidParams, SingularPoint, Specialization
from src import (action, critical_point, density, density_grid, example1_root, example_density, example_oracles,
                 limit_curve, mean_profile, monte_carlo, profile_distance, support, zdz_derivatives)
from src.parameters import DensitySpec, Exponential, Table

SLOW = os.environ.get("DUAL_SCHUR_SLOW_TESTS") == "1"

EXAMPLE1_PARAMS = ((0.5, 2.0), (1.0, 4.0), (2.0, 3.0))
EXAMPLE2_PARAMS = ((1.0, 2.0), (-0.7, 1.5))
EXAMPLE3_PARAMS = ((1.0, 1.0), (-0.5, 2.0))


class TestAction(unittest.TestCase):

    def setUp(self):
        self.spec = example_density("ramp", alpha=0.8, c=1.5)

    def test_first_derivative(self):
        z, t, h = complex(0.3, 0.4), 0.2, 1e-6
        numeric = (action(z * (1 + h), t, self.spec) - action(z * (1 - h), t, self.spec)) / (2 * h)
        self.assertLess(abs(numeric - zdz_derivatives(z, self.spec, 1, t)), 1e-6)

    def test_higher_derivatives(self):
        z, h = complex(-0.2, 0.5), 1e-6
        for order in (2, 3):
            up = zdz_derivatives(z * (1 + h), self.spec, order - 1)
            down = zdz_derivatives(z * (1 - h), self.spec, order - 1)
            self.assertLess(abs((up - down) / (2 * h) - zdz_derivatives(z, self.spec, order)), 1e-5)

    def test_singular_points(self):
        spec = example_density("example1", alpha=1.0, c=4.0)
        for z in (0.0, 1.0, -1.0):
            with self.assertRaises(SingularPoint):
                zdz_derivatives(z, spec, 1)

    def test_bad_order(self):
        with self.assertRaises(InvalidParams):
            zdz_derivatives(1j, self.spec, 4)


def reversed_weight_support(gamma, c):
    """Support for x_i = q^{i-1}, y_j = q^{1-j} written as one logarithm."""
    root = math.sqrt((math.exp(2 * gamma * c) - 1) * (math.exp(2 * gamma) - 1))
    return tuple(-1 - math.log(2) / gamma + math.log(1 + math.exp(gamma * (c + 1)) + sign * root) / gamma
                 for sign in (-1, 1))


def reflected_same_weight_support(gamma, c):
    """c - 1 - x-+ for x_i = q^{i-1}, y_j = q^{j-1} written as one logarithm (gamma > 0)."""
    a, b = math.exp(gamma), math.exp(c * gamma)
    lead = 3 * a * b - b - a + 3
    root = 2 * math.sqrt(2) * math.sqrt((a - 1) * (b - 1) * (a * b + 1))
    return tuple(-math.log((lead + sign * root) / (1 + b) ** 2) / gamma for sign in (1, -1))


class TestSupport(unittest.TestCase):

    def test_example1_values(self):
        sup = support(example_density("example1", alpha=1.0, c=4.0))
        self.assertAlmostEqual(sup.x_minus, -0.5, places=8)
        self.assertAlmostEqual(sup.x_plus, 3.5, places=8)
        self.assertAlmostEqual(sup.z_plus, 1 / 3, places=8)
        self.assertAlmostEqual(sup.z_minus, 3.0, places=7)
        self.assertEqual(sup.edge_density, (0, 0))

    def test_example1_sweep(self):
        for alpha, c in EXAMPLE1_PARAMS:
            sup = support(example_density("example1", alpha=alpha, c=c))
            _, x_minus, x_plus = example_oracles(1, {"alpha": alpha, "c": c}, 0.0)
            self.assertAlmostEqual(sup.x_minus, x_minus, places=8)
            self.assertAlmostEqual(sup.x_plus, x_plus, places=8)

    def test_lower_edge_at_minus_one(self):
        # alpha c = 1 puts the lower double critical point at infinity
        sup = support(example_density("example1", alpha=0.5, c=2.0))
        self.assertTrue(math.isinf(sup.z_minus))
        self.assertEqual(sup.x_minus, -1.0)

    def test_critical(self):
        sup = support(example_density("example1", alpha=1.0, c=1.0))
        self.assertEqual(sup.z_plus, 0.0)
        self.assertEqual(sup.x_plus, 1.0)
        self.assertEqual(sup.x_minus, -1.0)

    def test_q_examples(self):
        for name, sweep in ((2, EXAMPLE2_PARAMS), (3, EXAMPLE3_PARAMS)):
            for gamma, c in sweep:
                sup = support(example_density(f"example{name}", gamma=gamma, c=c))
                _, x_minus, x_plus = example_oracles(name, {"gamma": gamma, "c": c}, 0.0)
                self.assertAlmostEqual(sup.x_minus, x_minus, places=7)
                self.assertAlmostEqual(sup.x_plus, x_plus, places=7)

    def test_logarithmic_closed_forms(self):
        for gamma, c in ((2.0, 4.0), (1.0, 1.5), (0.5, 0.7)):
            params = {"gamma": gamma, "c": c}
            _, x_minus, x_plus = example_oracles(2, params, 0.0)
            expected = reversed_weight_support(gamma, c)
            self.assertAlmostEqual(x_minus, expected[0], places=10)
            self.assertAlmostEqual(x_plus, expected[1], places=10)
            _, x_minus, x_plus = example_oracles(3, params, 0.0)
            expected = reflected_same_weight_support(gamma, c)
            self.assertAlmostEqual(c - 1 - x_plus, expected[0], places=10)
            self.assertAlmostEqual(c - 1 - x_minus, expected[1], places=10)

    def test_small_gamma_recovers_constant(self):
        flat = support(example_density("example1", alpha=1.0, c=2.0))
        for name in ("example2", "example3"):
            sup = support(example_density(name, gamma=1e-4, c=2.0))
            self.assertAlmostEqual(sup.x_minus, flat.x_minus, delta=1e-3)
            self.assertAlmostEqual(sup.x_plus, flat.x_plus, delta=1e-3)

    def test_corner_example(self):
        # both cuts reach infinity, so the lower edge is the boundary point z = infinity
        spec = example_density("corner")
        sup = support(spec)
        self.assertTrue(math.isinf(sup.z_minus))
        self.assertEqual(sup.x_minus, -1.0)
        self.assertEqual(sup.z_plus, 0.0)
        self.assertEqual(sup.x_plus, 2.0)
        self.assertEqual(sup.edge_density, (1, 0))
        for t in (-0.5, 0.0, 1.0):
            self.assertTrue(0 < density(t, spec, sup) < 1)

    def test_table_density(self):
        flat = Table(((0.0, 1.0), (0.5, 1.0), (1.0, 1.0)))
        sup = support(DensitySpec(flat, flat, 4.0))
        self.assertAlmostEqual(sup.x_minus, -0.5, places=8)
        self.assertAlmostEqual(sup.x_plus, 3.5, places=8)

    def test_scaled_exponential(self):
        # x -> a x, y -> y / a leaves the measure unchanged
        gamma, c = 1.0, 2.0
        spec = DensitySpec(Exponential(-gamma, 2.0), Exponential(gamma * c, 0.5), c)
        sup = support(spec)
        _, x_minus, x_plus = example_oracles(2, {"gamma": gamma, "c": c}, 0.0)
        self.assertAlmostEqual(sup.x_minus, x_minus, places=7)
        self.assertAlmostEqual(sup.x_plus, x_plus, places=7)

    def test_to_dict(self):
        sup = support(example_density("example1", alpha=1.0, c=4.0))
        self.assertEqual(set(sup.to_dict()), {"z_minus", "z_plus", "x_minus", "x_plus", "edge_density"})


class TestDensity(unittest.TestCase):

    def assert_matches_oracle(self, name, params, spec):
        sup = support(spec)
        for t in np.linspace(sup.x_minus, sup.x_plus, 14)[2:-2]:
            self.assertAlmostEqual(density(t, spec, sup), example_oracles(name, params, t)[0], places=7)

    def test_example1(self):
        for alpha, c in EXAMPLE1_PARAMS:
            self.assert_matches_oracle(1, {"alpha": alpha, "c": c}, example_density("example1", alpha=alpha, c=c))

    def test_example2(self):
        for gamma, c in EXAMPLE2_PARAMS:
            self.assert_matches_oracle(2, {"gamma": gamma, "c": c}, example_density("example2", gamma=gamma, c=c))

    def test_example3(self):
        for gamma, c in EXAMPLE3_PARAMS:
            self.assert_matches_oracle(3, {"gamma": gamma, "c": c}, example_density("example3", gamma=gamma, c=c))

    def test_critical_point_closed_form(self):
        spec = example_density("example1", alpha=1.0, c=4.0)
        z = critical_point(1.5, spec)
        self.assertGreater(z.imag, 0)
        self.assertLess(abs(z - example1_root(1.0, 4.0, 1.5)), 1e-9)
        self.assertLess(abs(zdz_derivatives(z, spec, 1, 1.5)), 1e-10)

    def test_frozen_regions(self):
        spec = example_density("example1", alpha=1.0, c=4.0)
        self.assertEqual(density(-2.0, spec), 1.0)
        self.assertEqual(density(5.0, spec), 0.0)
        self.assertEqual(density(-0.75, spec), 0.0)
        self.assertEqual(density(3.75, spec), 0.0)

    def test_grid_matches_pointwise(self):
        spec = example_density("example1", alpha=2.0, c=3.0)
        sup = support(spec)
        ts = np.linspace(-1.0, 3.0, 21)
        grid = density_grid(ts, spec, sup)
        for t, value in zip(ts, grid):
            self.assertAlmostEqual(value, density(t, spec, sup), places=8)

    def test_unknown_oracle(self):
        with self.assertRaises(InvalidParams):
            example_oracles(4, {}, 0.0)
        with self.assertRaises(InvalidParams):
            example_oracles(2, {"gamma": 0.0, "c": 1.0}, 0.0)


class TestLimitCurve(unittest.TestCase):

    def test_shape(self):
        spec = example_density("example1", alpha=1.0, c=2.0)
        curve = limit_curve(spec, 0.02)
        self.assertAlmostEqual(curve.u[0], -1.0)
        self.assertAlmostEqual(curve.u[-1], 2.0)
        self.assertAlmostEqual(curve.omega[0], 1.0)
        self.assertAlmostEqual(curve.omega[-1], 2.0, delta=1e-2)
        self.assertTrue(np.all(curve.omega >= np.abs(curve.u) - 1e-2))
        self.assertTrue(np.all(np.abs(np.diff(curve.omega)) <= np.diff(curve.u) * (1 + 1e-9)))
        self.assertEqual(len(curve.rows()), len(curve.u))

    def test_bad_step(self):
        with self.assertRaises(InvalidParams):
            limit_curve(example_density("example1", alpha=1.0, c=2.0), 0.0)

    def test_profile_distance(self):
        curve = limit_curve(example_density("example1", alpha=1.0, c=2.0), 0.05)
        points = np.linspace(-0.5, 1.5, 9)
        self.assertEqual(profile_distance(curve(points), curve, points), 0.0)

    def monte_carlo_distance(self, n, samples):
        spec = example_density("example1", alpha=1.0, c=2.0)
        sup = support(spec)
        curve = limit_curve(spec, 0.01, sup)
        batch = monte_carlo(Specialization.from_density(spec, n), samples, "shape", seed=4)
        points = np.linspace(sup.x_minus + 0.1, sup.x_plus - 0.1, 101)
        return profile_distance(mean_profile(batch.values, n, 2 * n, points), curve, points)

    def test_monte_carlo_profile(self):
        self.assertLess(self.monte_carlo_distance(100, 40), 0.05)

    @unittest.skipUnless(SLOW, "set DUAL_SCHUR_SLOW_TESTS=1")
    def test_monte_carlo_profile_desk_scale(self):
        self.assertLess(self.monte_carlo_distance(200, 200), 0.05)


if __name__ == '__main__':
    unittest.main()
