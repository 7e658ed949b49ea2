import csv
import json
import math
import os
import tempfile
import unittest

from dual_schur import main
from src import ConfigInvalid
from src import MANIFEST_NAME, load_config, parse_config, run

HERE = os.path.dirname(os.path.abspath(__file__))


def fixture(name):
    return os.path.join(HERE, name)


def read_table(path):
    with open(path, "r", encoding="utf-8") as f:
        version = f.readline()
        return version, list(csv.DictReader(f))


class TestConfig(unittest.TestCase):

    def test_defaults_are_filled_in(self):
        config = load_config(fixture("example1_config.json"))
        self.assertEqual(config.k, 80)
        self.assertEqual(config.workers, 1)
        self.assertAlmostEqual(config.density().c, 4.0)

    def test_overrides(self):
        config = load_config(fixture("example1_config.json"), {"seed": 99, "samples": None})
        self.assertEqual(config.seed, 99)
        self.assertEqual(config.samples, 20)

    def test_rejected(self):
        spec = {"example": "example1", "alpha": 1, "c": 2}
        for data in ({"spec": {"f": {"family": "constant", "value": 1},
                               "g": {"family": "constant", "value": 1}, "c": -1}, "n": 4},
                     {"spec": spec, "n": 10, "k": 21},
                     {"spec": spec, "n": 10, "colour": "blue"},
                     {"spec": spec, "n": 0},
                     {"spec": spec, "n": 10.5},
                     {"spec": spec, "n": "10"},
                     {"spec": spec, "n": 10, "k": 20.5},
                     {"spec": {"example": "example7"}, "n": 10},
                     {"seed": -1},
                     {"workers": 0},
                     {"statistic": "area"},
                     {"deltas": [0]},
                     {"tw_grid": [0, 1, 0]},
                     {"contour": {"tol": 0}},
                     {"contour": {"colour": 1}},
                     []):
            with self.assertRaises(ConfigInvalid, msg=str(data)):
                parse_config(data)

    def test_whole_float_sizes(self):
        config = parse_config({"spec": {"example": "example1", "alpha": 1, "c": 2}, "n": 10.0, "k": 20.0})
        self.assertEqual((config.n, config.k), (10, 20))
        self.assertIsInstance(config.n, int)

    def test_missing_file(self):
        with self.assertRaises(ConfigInvalid):
            load_config(fixture("no_such_config.json"))

    def test_unknown_command(self):
        with self.assertRaises(ConfigInvalid):
            run("plot", parse_config({}))

    def test_manifest_round_trip(self):
        config = load_config(fixture("critical_config.json"))
        files = run("critical", config)
        manifest = json.loads(files[MANIFEST_NAME])
        self.assertEqual(parse_config(manifest["config"]), config)
        self.assertEqual(manifest["command"], "critical")
        self.assertEqual(manifest["outputs"], ["gaps.csv"])
        self.assertIn("numpy", manifest["versions"])
        self.assertTrue(manifest["results"]["critical"]["critical"])


class TestCommandLine(unittest.TestCase):

    # Show long diffs
    maxDiff = None

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.out = os.path.join(self.tmp.name, "out")

    def tearDown(self):
        self.tmp.cleanup()

    def test_tw_table(self):
        self.assertEqual(main(["tw-table", "--out", self.out]), 0)
        version, rows = read_table(os.path.join(self.out, "tracy_widom.csv"))
        self.assertEqual(version, "# dual-schur table v1\n")
        self.assertEqual(len(rows), 49)
        self.assertEqual(float(rows[0]["s"]), -8.0)
        self.assertAlmostEqual(float(rows[32]["cdf"]), 0.9694, delta=1e-3)
        self.assertTrue(os.path.exists(os.path.join(self.out, MANIFEST_NAME)))

    def test_limit_shape(self):
        code = main(["limit-shape", "-c", fixture("example1_config.json"), "--out", self.out])
        self.assertEqual(code, 0)
        _, rows = read_table(os.path.join(self.out, "support.csv"))
        self.assertAlmostEqual(float(rows[0]["x_minus"]), -0.5, places=8)
        self.assertAlmostEqual(float(rows[0]["x_plus"]), 3.5, places=8)
        _, curve = read_table(os.path.join(self.out, "curve.csv"))
        self.assertEqual(float(curve[0]["u"]), -1.0)
        self.assertAlmostEqual(float(curve[0]["omega"]), 1.0)

    def test_critical_with_delta(self):
        code = main(["critical", "-c", fixture("critical_config.json"), "--delta", "2", "--out", self.out])
        self.assertEqual(code, 0)
        _, rows = read_table(os.path.join(self.out, "gaps.csv"))
        self.assertEqual(len(rows), 1)
        self.assertEqual(rows[0]["delta"], "2")
        self.assertAlmostEqual(float(rows[0]["theory"]), 0.25 - 1 / (2 * math.pi), places=12)
        self.assertTrue(0 <= float(rows[0]["empirical"]) <= 1)

    def test_invalid_config(self):
        self.assertEqual(main(["limit-shape", "-c", fixture("invalid_config.json"), "--out", self.out]), 2)
        self.assertFalse(os.path.exists(self.out))

    def test_kernel(self):
        self.assertEqual(main(["kernel", "-c", fixture("kernel_config.json"), "--out", self.out]), 0)
        _, rows = read_table(os.path.join(self.out, "kernel.csv"))
        self.assertEqual(len(rows), 9)
        for row in rows:
            if row["m"] == row["m_prime"]:
                self.assertTrue(0 <= float(row["value"]) <= 1)

    def test_kernel_needs_positions(self):
        self.assertEqual(main(["kernel", "-c", fixture("example1_config.json"), "--out", self.out]), 2)

    def test_sample_is_reproducible(self):
        first = os.path.join(self.tmp.name, "first")
        second = os.path.join(self.tmp.name, "second")
        for out, workers in ((first, "1"), (second, "2")):
            code = main(["sample", "-c", fixture("example1_config.json"), "--workers", workers, "--out", out])
            self.assertEqual(code, 0)
        for name in ("samples.csv", "histogram.csv"):
            with open(os.path.join(first, name), "r", encoding="utf-8") as a, \
                    open(os.path.join(second, name), "r", encoding="utf-8") as b:
                self.assertEqual(a.read(), b.read())
        _, samples = read_table(os.path.join(first, "samples.csv"))
        self.assertEqual(len(samples), 20)


if __name__ == '__main__':
    unittest.main()
