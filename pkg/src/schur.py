"""
Exact evaluation of the dual Schur measure

  mu(lambda) = s_lambda(X) s_lambda'(Y) / prod_{i,j} (1 + x_i y_j)

on partitions in the n x k box, plus a brute-force enumeration oracle.
"""
import logging
import math
import os
from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgument, TooLarge
from .partitions import Partition, complement, conjugate, maya, partitions_in_box, weighted_size

DEFAULT_MAX_ENUM = 10 ** 6


def complete_homogeneous(variables, degree):
    """h_0, ..., h_degree in the given variables, by dynamic programming over variables."""
    h = np.zeros(degree + 1)
    h[0] = 1.0
    for x in variables:
        for m in range(1, degree + 1):
            h[m] += x * h[m - 1]
    return h


def _jacobi_trudi(lam, variables):
    size = len(lam)
    h = complete_homogeneous(variables, lam.first_row + size)
    matrix = np.zeros((size, size))
    for i in range(size):
        for j in range(size):
            index = lam[i] - i + j
            if index >= 0:
                matrix[i, j] = h[index]
    return matrix


def schur(lam, variables):
    """s_lambda(variables) via the Jacobi-Trudi determinant det[h_{lambda_i - i + j}]."""
    if len(lam) > len(variables):
        return 0.0
    if len(lam) == 0:
        return 1.0
    return float(np.linalg.det(_jacobi_trudi(lam, variables)))


def log_schur(lam, variables):
    """log s_lambda(variables); -inf when the value vanishes."""
    if len(lam) > len(variables):
        return -math.inf
    if len(lam) == 0:
        return 0.0
    sign, logdet = np.linalg.slogdet(_jacobi_trudi(lam, variables))
    if sign <= 0:
        return -math.inf
    return float(logdet)


def e_product(spec):
    """E(X; Y) = prod_{i,j} (1 + x_i y_j)."""
    return float(np.exp(log_e_product(spec)))


def log_e_product(spec):
    return float(np.sum(np.log1p(np.outer(spec.x, spec.y))))


def measure_weight(lam, spec):
    """Probability of lam under the dual Schur measure; 0 outside the box."""
    if not lam.fits(spec.n, spec.k):
        return 0.0
    if spec.n * spec.k > 200:
        log_weight = log_schur(lam, spec.x) + log_schur(conjugate(lam), spec.y) - log_e_product(spec)
        return math.exp(log_weight)
    return schur(lam, spec.x) * schur(conjugate(lam), spec.y) / e_product(spec)


def transpose_symmetry_check(lam, spec):
    """mu_{n,k}(lam | X, Y) == mu_{k,n}(lam' | Y, X)."""
    left = measure_weight(lam, spec)
    right = measure_weight(conjugate(lam), spec.transpose())
    return math.isclose(left, right, rel_tol=1e-12, abs_tol=1e-15)


def enumeration_cap():
    value = os.environ.get("DUAL_SCHUR_MAX_ENUM")
    if value is None:
        return DEFAULT_MAX_ENUM
    try:
        return int(value)
    except ValueError as e:
        raise InvalidArgument(f"DUAL_SCHUR_MAX_ENUM must be an integer, got {value!r}") from e


@dataclass
class ExactDistribution:
    n: int
    k: int
    entries: dict
    normalization: float

    def probability(self, lam):
        return self.entries.get(Partition(lam.parts), 0.0)

    def particle_probability(self, positions):
        """Probability that every position in `positions` carries a Maya particle."""
        positions = [float(p) for p in positions]
        depth = self.n + max(0, int(math.ceil(-min(positions)))) + 1
        total = 0.0
        for lam, prob in self.entries.items():
            particles = set(maya(lam, depth))
            if all(p in particles for p in positions):
                total += prob
        return total

    def lambda1_distribution(self):
        dist = np.zeros(self.k + 1)
        for lam, prob in self.entries.items():
            dist[lam.first_row] += prob
        return dist

    def law(self, statistic):
        """Distribution of statistic(lambda) as a dict value -> probability."""
        law = {}
        for lam, prob in self.entries.items():
            value = statistic(lam)
            law[value] = law.get(value, 0.0) + prob
        return law

    def rows(self):
        for lam, prob in self.entries.items():
            yield lam.to_json(), prob * self.normalization, prob


def enumerate_measure(spec, cap=None):
    """Exact distribution of the dual Schur measure over the whole box."""
    cap = enumeration_cap() if cap is None else cap
    count = math.comb(spec.n + spec.k, spec.n)
    if count > cap:
        raise TooLarge(f"{count} partitions in a {spec.n}x{spec.k} box exceeds the cap of {cap}")
    logging.debug(f"enumerating {count} partitions in a {spec.n}x{spec.k} box")
    normalization = e_product(spec)
    entries = {}
    for lam in partitions_in_box(spec.n, spec.k):
        entries[lam] = measure_weight(lam, spec)
    total = sum(entries.values())
    if abs(total - 1.0) > 1e-12:
        logging.warning(f"enumerated probabilities sum to {total!r}")
    return ExactDistribution(spec.n, spec.k, entries, normalization)


def q_dimension(lam, count, q):
    """prod_{i<j} (1 - q^{lam_i - lam_j + j - i}) / (1 - q^{j - i}) over `count` rows."""
    value = 1.0
    for i in range(count):
        for j in range(i + 1, count):
            value *= (1.0 - q ** (lam.part(i) - lam.part(j) + j - i)) / (1.0 - q ** (j - i))
    return value


def principal_schur(lam, q, count):
    """s_lambda(1, q, ..., q^{count-1}) by the product formula."""
    if len(lam) > count:
        return 0.0
    return q ** weighted_size(lam) * q_dimension(lam, count, q)


def q_weight(lam, n, k, q, variant):
    """
    The q-weight forms of the measure, normalized by their own denominators.

      variant 2: q^{||lam||} dim_q(lam) q^{||bar lam'||} dim_q(bar lam'),
        equal to the measure with x_i = q^{i-1}, y_j = q^{1-j}
      variant 3: q^{||lam||} dim_q(lam) q^{-||bar lam'||} dim_{1/q}(bar lam'),
        equal to the measure with x_i = q^{i-1}, y_j = q^{j-1}
    """
    box_complement = conjugate(complement(lam, n, k))
    left = principal_schur(lam, q, n)
    if variant == 2:
        right = principal_schur(box_complement, q, k)
        denominator = math.prod(q ** i + q ** j for i in range(n) for j in range(k))
    elif variant == 3:
        right = principal_schur(box_complement, 1.0 / q, k)
        denominator = math.prod(q ** i + q ** (-j) for i in range(n) for j in range(k))
    else:
        raise InvalidArgument(f"unknown q-weight variant: {variant}")
    return left * right / denominator
