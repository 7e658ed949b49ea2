"""
The critical full-support regime, where x+ = c and lambda_1 sticks to the
east corner of the box. Fluctuations of lambda_1 - k are discrete and
P(lambda_1 - nc <= -delta) is a delta x delta determinant.
"""
import cmath
import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gamma

from .errors import DivergentIntegral, InvalidArgument, NotCritical
from .limit_shape import QUAD_TOL
from .parameters import Specialization
from .quadrature import integrate
from .sampler import monte_carlo

CRITICAL_TOL = 1e-10
NEAR_CRITICAL = 1e-3


@dataclass(frozen=True)
class CriticalData:
    residual: float
    s2: float
    tol: float = CRITICAL_TOL

    @property
    def critical(self):
        return abs(self.residual) < self.tol

    def to_dict(self):
        return {"residual": self.residual, "s2": self.s2, "critical": self.critical}


def critical_residual(spec, tol=CRITICAL_TOL):
    """
    residual = int f - c int 1/g, which vanishes exactly in the critical case,
    and s2 = int f^2 + c int 1/g^2, the second derivative of the action at 0.
    """
    breakpoints = spec.breakpoints()
    try:
        residual = integrate(spec.f, breakpoints, QUAD_TOL) - spec.c * integrate(lambda s: 1.0 / spec.g(s), breakpoints, QUAD_TOL)
        s2 = integrate(lambda s: spec.f(s) ** 2, breakpoints, QUAD_TOL) + spec.c * integrate(lambda s: spec.g(s) ** -2.0, breakpoints, QUAD_TOL)
    except DivergentIntegral as e:
        raise DivergentIntegral(f"critical integrals diverge (is g positive on [0, 1]?): {e}") from e
    data = CriticalData(float(residual), float(s2), tol)
    if not data.critical and abs(data.residual) < NEAR_CRITICAL:
        logging.warning(f"spec is near-critical (residual {data.residual:.3e}); neither edge limit applies cleanly")
    return data


def _sin_half_pi(two_d):
    """sin(pi d) for d = two_d / 2, exact on the half-integer lattice."""
    if two_d % 2 == 0:
        return 0.0
    return -1.0 if ((two_d - 1) // 2) % 2 else 1.0


def _gamma(x):
    # reflection keeps negative half-integers accurate
    if x > 0:
        return float(gamma(x))
    return math.pi / (math.sin(math.pi * x) * float(gamma(1 - x)))


def k_crit(i, j, delta):
    """The critical kernel entry for 0 <= i, j <= delta - 1."""
    if not (0 <= i < delta and 0 <= j < delta):
        raise InvalidArgument(f"indices ({i}, {j}) out of range for delta = {delta}")
    two_d = j - i
    total = 0.0
    for ell in range((delta - j - 1) // 2 + 1):
        two_arg = 2 * ell + two_d
        if two_arg <= 0 and two_arg % 2 == 0:
            total += 0.5 * (-1) ** ell / (math.factorial(ell) * math.factorial(-two_arg // 2))
        else:
            sine = _sin_half_pi(two_d)
            if sine:
                total += sine * _gamma(two_arg / 2) / (2 * math.pi * math.factorial(ell))
    return total


def crit_matrix(delta):
    if delta < 1:
        raise InvalidArgument(f"delta must be at least 1, got {delta}")
    return np.array([[k_crit(i, j, delta) for j in range(delta)] for i in range(delta)])


def gap_probability(delta):
    """lim P(lambda_1 - nc <= -delta) = det(I - K_crit) over 0 <= i, j < delta."""
    return float(np.linalg.det(np.eye(delta) - crit_matrix(delta)))


def _depth_index(h, delta):
    index = delta - 0.5 - h
    if index != int(index) or not 0 <= index < delta:
        raise InvalidArgument(f"depth {h} is not one of 1/2, ..., {delta} - 1/2")
    return int(index)


def corner_kernel(h, h_prime, delta):
    """K_crit indexed by the depths h, h' in {1/2, ..., delta - 1/2} below the corner."""
    return k_crit(_depth_index(h, delta), _depth_index(h_prime, delta), delta)


def _require_critical(spec):
    data = critical_residual(spec)
    if not data.critical:
        raise NotCritical(f"int f - c int 1/g = {data.residual:.3e}, the spec is not critical")
    return data


def _half_integer(h):
    if (h - 0.5) != int(h - 0.5) or h < 0.5:
        raise InvalidArgument(f"depth {h} is not a positive half-integer")


def hankel_loop(p):
    """
    The loop integral of t^{p-1} e^{-t} from +infinity around 0 and back,
    with arg t running from 0 to 2 pi.

    It is (e^{2 pi i p} - 1) Gamma(p) unless p is a nonpositive integer,
    where the integrand is single valued and only the residue at 0 is left.
    """
    if p <= 0 and p == int(p):
        return complex(0.0, 2 * math.pi * (-1) ** int(-p) / math.factorial(int(-p)))
    phase = cmath.exp(1j * math.pi * p)
    return 2j * phase * _sin_half_pi(int(round(2 * p))) * _gamma(p)


def _corner_entry(h, h_prime, scale):
    """The kernel at depths h, h' from the Gaussian integrals at z = 0, with n S''(0) / 2 = scale."""
    _half_integer(h)
    _half_integer(h_prime)
    two_d = int(h - h_prime)
    d = two_d / 2
    # z = -i sqrt(t / scale) turns the z integral into a Hankel loop
    prefactor = (-1j) ** two_d / (4j * math.pi) * scale ** -d
    total = 0j
    for ell in range(int(h_prime / 2 - 0.25) + 1):
        total += hankel_loop(d + ell) / math.factorial(ell)
    value = prefactor * total
    if abs(value.imag) > 1e-12 * max(1.0, abs(value)):
        logging.warning(f"corner kernel at ({h}, {h_prime}) has imaginary part {value.imag:.3e}")
    return float(value.real)


def finite_corner_kernel(h, h_prime, n, spec):
    """
    The kernel at m = k - h, m' = k - h' for finite n.

    Its dependence on n is the factor (n s2 / 2)^{-(h - h')/2}, a diagonal
    conjugation, so determinants over {1/2, ..., delta - 1/2} do not depend
    on n and match the critical kernel.
    """
    data = _require_critical(spec)
    return _corner_entry(h, h_prime, n * data.s2 / 2)


def finite_corner_gap(delta, n, spec):
    if delta < 1:
        raise InvalidArgument(f"delta must be at least 1, got {delta}")
    scale = n * _require_critical(spec).s2 / 2
    depths = [d + 0.5 for d in range(delta)]
    matrix = np.array([[_corner_entry(a, b, scale) for b in depths] for a in depths])
    return float(np.linalg.det(np.eye(delta) - matrix))


def _box(spec, n):
    k = int(round(spec.c * n))
    if abs(spec.c * n - k) > 1e-9:
        raise InvalidArgument(f"c n = {spec.c * n} must be an integer")
    return k


def _frequency(values, k, delta):
    p = float(np.mean(values <= k - delta))
    return p, math.sqrt(p * (1 - p) / len(values))


def critical_gap_mc(spec, n, delta, samples, seed=0, workers=1):
    """Empirical P(lambda_1 <= k - delta) from the sampler."""
    if delta < 1:
        raise InvalidArgument(f"delta must be at least 1, got {delta}")
    _require_critical(spec)
    k = _box(spec, n)
    batch = monte_carlo(Specialization.from_density(spec, n, k), samples, "lambda1", seed, workers)
    return _frequency(batch.as_array(), k, delta)[0]


@dataclass(frozen=True)
class GapRow:
    delta: int
    theory: float
    empirical: float = math.nan
    stderr: float = math.nan

    def row(self):
        return (self.delta, self.theory, self.empirical, self.stderr)


def gap_table(deltas, spec=None, n=None, samples=0, seed=0, workers=1):
    """Theory gaps for each delta, with Monte Carlo columns when spec, n and samples are given."""
    deltas = list(deltas)
    if any(d < 1 for d in deltas):
        raise InvalidArgument(f"every delta must be at least 1, got {deltas}")
    if spec is None or not samples:
        return [GapRow(d, gap_probability(d)) for d in deltas]
    _require_critical(spec)
    k = _box(spec, n)
    batch = monte_carlo(Specialization.from_density(spec, n, k), samples, "lambda1", seed, workers)
    values = batch.as_array()
    rows = []
    for d in deltas:
        p, stderr = _frequency(values, k, d)
        rows.append(GapRow(d, gap_probability(d), p, stderr))
        logging.info(f"delta {d}: theory {rows[-1].theory:.4f}, empirical {p:.4f} +- {stderr:.4f}")
    return rows
