"""
Exact sampling from the dual Schur measure.

A Bernoulli environment with P(w_ij = 1) = x_i y_j / (1 + x_i y_j) is pushed
through dual RSK (row insertion where a value bumps the leftmost entry that
is >= it). The resulting shape is distributed as the dual Schur measure, and
its first row equals the last-passage time over chains of 1-cells with the
column index strictly increasing and the row index weakly increasing.
"""
import hashlib
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import List

import numpy as np
from numba import njit

from .errors import InvalidArgument
from .partitions import Partition


@njit(cache=True)
def _dual_rsk_lengths(bits):
    n, k = bits.shape
    rows = np.zeros((n + 1, k + 1), dtype=np.int64)
    lengths = np.zeros(n + 1, dtype=np.int64)
    for i in range(n):
        for j in range(k):
            if bits[i, j] == 0:
                continue
            value = j
            r = 0
            while True:
                length = lengths[r]
                lo = 0
                hi = length
                while lo < hi:
                    mid = (lo + hi) // 2
                    if rows[r, mid] < value:
                        lo = mid + 1
                    else:
                        hi = mid
                if lo == length:
                    rows[r, length] = value
                    lengths[r] = length + 1
                    break
                bumped = rows[r, lo]
                rows[r, lo] = value
                value = bumped
                r += 1
    return lengths


@njit(cache=True)
def _last_passage(bits):
    n, k = bits.shape
    best = np.zeros(k + 1, dtype=np.int64)
    for i in range(n):
        for j in range(k):
            candidate = best[j] + bits[i, j]
            if candidate > best[j + 1]:
                best[j + 1] = candidate
    return best[k]


@dataclass(frozen=True)
class Environment:
    bits: np.ndarray
    seed: int = 0

    @property
    def n(self):
        return self.bits.shape[0]

    @property
    def k(self):
        return self.bits.shape[1]

    def transpose(self):
        return Environment(np.ascontiguousarray(self.bits.T), self.seed)

    def dump(self):
        lines = [f"{self.n} {self.k}"]
        lines.extend("".join(str(int(b)) for b in row) for row in self.bits)
        return "\n".join(lines) + "\n"


def sample_environment(spec, seed):
    """
    Independent Bernoulli bits from a Philox stream keyed by `seed`.

    Cell (i, j) consumes draw number i*k + j of the stream, so a bit is a
    pure function of (seed, i, j) for a given box.
    """
    generator = np.random.Generator(np.random.Philox(key=int(seed) % 2 ** 64))
    uniforms = generator.random((spec.n, spec.k))
    bits = (uniforms < spec.site_probabilities()).astype(np.uint8)
    return Environment(bits, int(seed))


def lpp_statistic(env):
    return int(_last_passage(env.bits))


def rsk_shape(env):
    lengths = _dual_rsk_lengths(env.bits)
    return Partition(tuple(int(v) for v in lengths if v > 0), box=(env.n, env.k))


def sample_partition(spec, seed):
    return rsk_shape(sample_environment(spec, seed))


def derive_seed(seed, index):
    """Per-sample seed hash(seed, index), independent of how samples are scheduled."""
    digest = hashlib.blake2b(f"{int(seed)}:{int(index)}".encode(), digest_size=8).digest()
    return int.from_bytes(digest, "little")


def corner_deficit(lam, n, k):
    """n minus the number of rows of length k."""
    return n - sum(1 for p in lam.parts if p == k)


STATISTICS = ("lambda1", "size", "corner_deficit", "shape")


def _statistic(spec, seed, statistic):
    env = sample_environment(spec, seed)
    if statistic == "lambda1":
        return lpp_statistic(env)
    lam = rsk_shape(env)
    if statistic == "size":
        return lam.size
    if statistic == "corner_deficit":
        return corner_deficit(lam, spec.n, spec.k)
    return lam


def _sample_chunk(spec, seed, start, stop, statistic):
    seeds = [derive_seed(seed, i) for i in range(start, stop)]
    return seeds, [_statistic(spec, s, statistic) for s in seeds]


@dataclass
class SampleBatch:
    spec: object
    statistic: str
    seed: int
    values: List = field(default_factory=list)
    seeds: List[int] = field(default_factory=list)
    elapsed: float = 0.0

    def __len__(self):
        return len(self.values)

    def as_array(self):
        if self.statistic == "shape":
            raise InvalidArgument("shape batches hold partitions, not numbers")
        return np.asarray(self.values, dtype=float)


def monte_carlo(spec, count, statistic="lambda1", seed=0, workers=1):
    """
    Draw `count` independent samples of a named statistic.

    The output depends on (spec, count, seed) only: sample i always uses
    derive_seed(seed, i), whatever the number of workers.
    """
    if count < 1:
        raise InvalidArgument(f"sample count must be at least 1, got {count}")
    if workers < 1:
        raise InvalidArgument(f"worker count must be at least 1, got {workers}")
    if statistic not in STATISTICS:
        raise InvalidArgument(f"unknown statistic {statistic!r}, expected one of {STATISTICS}")

    logging.debug(f"sampling {count} x {statistic} in a {spec.n}x{spec.k} box with {workers} worker(s)")
    started = time.perf_counter()
    if workers == 1:
        seeds, values = _sample_chunk(spec, seed, 0, count, statistic)
    else:
        chunk = -(-count // workers)
        bounds = [(start, min(start + chunk, count)) for start in range(0, count, chunk)]
        seeds, values = [], []
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_sample_chunk, spec, seed, a, b, statistic) for a, b in bounds]
            for future in futures:
                chunk_seeds, chunk_values = future.result()
                seeds.extend(chunk_seeds)
                values.extend(chunk_values)
    elapsed = time.perf_counter() - started
    logging.info(f"drew {count} samples in {elapsed:.2f}s")
    return SampleBatch(spec, statistic, seed, values, seeds, elapsed)
