import itertools
import os
import unittest

import numpy as np

from src import Environment, InvalidArgument, Partition, Specialization
from src import (conjugate, corner_deficit, derive_seed, enumerate_measure, lpp_statistic, monte_carlo,
                 rsk_shape, sample_environment, sample_partition)

SLOW = os.environ.get("DUAL_SCHUR_SLOW_TESTS") == "1"


def longest_chain(bits):
    """Longest chain of 1-cells with column strictly and row weakly increasing, by brute force."""
    cells = [(i, j) for i in range(bits.shape[0]) for j in range(bits.shape[1]) if bits[i, j]]
    best = {}
    for i, j in cells:
        best[(i, j)] = 1 + max((best[(a, b)] for a, b in best if a <= i and b < j), default=0)
    return max(best.values(), default=0)


def exact_shape_law(spec):
    """Law of the dual RSK shape over all 0/1 matrices."""
    p = spec.site_probabilities()
    law = {}
    for flat in itertools.product((0, 1), repeat=spec.n * spec.k):
        bits = np.array(flat, dtype=np.uint8).reshape(spec.n, spec.k)
        weight = float(np.prod(np.where(bits == 1, p, 1 - p)))
        lam = Partition(rsk_shape(Environment(bits)).parts)
        law[lam] = law.get(lam, 0.0) + weight
    return law


class TestInsertion(unittest.TestCase):

    def test_first_row_is_last_passage_time(self):
        rng = np.random.default_rng(99)
        for _ in range(300):
            n, k = rng.integers(1, 7, size=2)
            bits = (rng.random((n, k)) < 0.5).astype(np.uint8)
            env = Environment(bits)
            self.assertEqual(lpp_statistic(env), longest_chain(bits))
            self.assertEqual(rsk_shape(env).first_row, lpp_statistic(env))

    def test_shape_size_is_number_of_ones(self):
        rng = np.random.default_rng(7)
        bits = (rng.random((5, 6)) < 0.4).astype(np.uint8)
        self.assertEqual(rsk_shape(Environment(bits)).size, int(bits.sum()))

    def test_all_ones_gives_full_box(self):
        self.assertEqual(rsk_shape(Environment(np.ones((3, 4), dtype=np.uint8))).parts, (4, 4, 4))

    def test_shape_law_matches_enumeration(self):
        for spec in (Specialization((1.0, 1.0), (1.0, 1.0)),
                     Specialization((0.5, 0.8), (0.7, 1.2)),
                     Specialization((2.0, 0.3, 1.1), (0.9, 0.4))):
            law = exact_shape_law(spec)
            dist = enumerate_measure(spec)
            for lam, prob in dist.entries.items():
                self.assertAlmostEqual(law.get(lam, 0.0), prob, places=12)

    def test_transpose_in_distribution(self):
        spec = Specialization((0.5, 1.5), (0.7, 1.2, 0.4))
        law = exact_shape_law(spec)
        swapped = exact_shape_law(spec.transpose())
        for lam, prob in law.items():
            self.assertAlmostEqual(swapped.get(conjugate(lam), 0.0), prob, places=12)


class TestEnvironment(unittest.TestCase):

    def test_reproducible(self):
        spec = Specialization((1.0,) * 4, (0.5,) * 6)
        a = sample_environment(spec, 42)
        b = sample_environment(spec, 42)
        np.testing.assert_array_equal(a.bits, b.bits)
        self.assertEqual(a.bits.shape, (4, 6))

    def test_sample_partition(self):
        spec = Specialization((0.5,) * 3, (2.0,) * 4)
        lam = sample_partition(spec, 42)
        self.assertEqual(lam, rsk_shape(sample_environment(spec, 42)))
        self.assertTrue(lam.fits(3, 4))

    def test_dump(self):
        env = Environment(np.array([[1, 0, 1], [0, 0, 1]], dtype=np.uint8))
        self.assertEqual(env.dump(), "2 3\n101\n001\n")
        self.assertEqual(env.transpose().bits.shape, (3, 2))

    def test_derive_seed(self):
        self.assertEqual(derive_seed(5, 3), derive_seed(5, 3))
        self.assertNotEqual(derive_seed(5, 3), derive_seed(5, 4))
        self.assertNotEqual(derive_seed(5, 3), derive_seed(6, 3))
        self.assertLess(derive_seed(1, 1), 2 ** 64)

    def test_corner_deficit(self):
        self.assertEqual(corner_deficit(Partition((4, 4, 2)), 3, 4), 1)
        self.assertEqual(corner_deficit(Partition(()), 3, 4), 3)


class TestMonteCarlo(unittest.TestCase):

    def test_deterministic(self):
        spec = Specialization((1.0,) * 5, (1.0,) * 5)
        a = monte_carlo(spec, 20, "lambda1", seed=8)
        b = monte_carlo(spec, 20, "lambda1", seed=8)
        self.assertEqual(a.values, b.values)
        self.assertEqual(a.seeds, [derive_seed(8, i) for i in range(20)])

    def test_independent_of_workers(self):
        spec = Specialization((1.0,) * 5, (0.8,) * 6)
        single = monte_carlo(spec, 10, "size", seed=3, workers=1)
        pooled = monte_carlo(spec, 10, "size", seed=3, workers=3)
        self.assertEqual(single.values, pooled.values)

    def test_mean_number_of_ones(self):
        spec = Specialization((0.5, 1.0, 2.0), (0.3, 0.8, 1.4))
        sizes = monte_carlo(spec, 4000, "size", seed=17).as_array().astype(float)
        stderr = sizes.std(ddof=1) / np.sqrt(len(sizes))
        self.assertLess(abs(sizes.mean() - spec.site_probabilities().sum()), 4 * stderr)

    def test_bad_arguments(self):
        spec = Specialization((1.0,), (1.0,))
        with self.assertRaises(InvalidArgument):
            monte_carlo(spec, 0)
        with self.assertRaises(InvalidArgument):
            monte_carlo(spec, 5, workers=0)
        with self.assertRaises(InvalidArgument):
            monte_carlo(spec, 5, statistic="area")
        with self.assertRaises(InvalidArgument):
            monte_carlo(spec, 2, statistic="shape").as_array()

    def test_empirical_law(self):
        spec = Specialization((0.5, 1.0), (1.5, 0.8))
        dist = enumerate_measure(spec)
        batch = monte_carlo(spec, 20000, "shape", seed=1)
        counts = {}
        for lam in batch.values:
            key = Partition(lam.parts)
            counts[key] = counts.get(key, 0) + 1
        tv = 0.5 * sum(abs(counts.get(lam, 0) / 20000 - p) for lam, p in dist.entries.items())
        self.assertLess(tv, 0.02)

    @unittest.skipUnless(SLOW, "set DUAL_SCHUR_SLOW_TESTS=1")
    def test_empirical_law_desk_scale(self):
        for spec in (Specialization((1.0,) * 3, (1.0,) * 3),
                     Specialization((0.5, 1.0, 2.0), (0.3, 1.0, 0.9)),
                     Specialization((1.2, 0.4, 0.9), (1.5, 0.6, 0.2))):
            dist = enumerate_measure(spec)
            batch = monte_carlo(spec, 100000, "shape", seed=2)
            counts = {}
            for lam in batch.values:
                key = Partition(lam.parts)
                counts[key] = counts.get(key, 0) + 1
            tv = 0.5 * sum(abs(counts.get(lam, 0) / 100000 - p) for lam, p in dist.entries.items())
            self.assertLess(tv, 0.01)

    @unittest.skipUnless(SLOW, "set DUAL_SCHUR_SLOW_TESTS=1")
    def test_last_passage_desk_scale(self):
        rng = np.random.default_rng(1)
        for _ in range(10000):
            n, k = rng.integers(1, 9, size=2)
            bits = (rng.random((n, k)) < rng.random()).astype(np.uint8)
            env = Environment(bits)
            self.assertEqual(rsk_shape(env).first_row, longest_chain(bits))


if __name__ == '__main__':
    unittest.main()
