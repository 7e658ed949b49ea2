"""
Finite-size correlation kernel of the dual Schur measure.

  K(m, m') = oint oint_{|w| < |z|} dz/(2 pi i z) dw/(2 pi i w)
               F(z)/F(w) w^{m'} z^{-m} sqrt(zw)/(z - w)

  F(z) = prod_i 1/(1 - x_i z) prod_j 1/(1 + y_j/z)

with the z circle separating {-y_j} from {1/x_i}. For half-integer m, m' the
integrand has integer exponents, so circles can be sampled directly.

Two evaluation paths share the same contours:

  double: tensor-product trapezoid rule on both circles, nodes doubled until
    the entries settle.
  high: the w integral is done exactly (1/F is a Laurent polynomial), and
    K(m, m') = sum_l F_{m+l+1/2} G_{-m'-l-1/2} with the Laurent
    coefficients F_a extracted by the trapezoid rule on the z circle in
    mpmath arithmetic.

The 'auto' precision picks the high path when the expected cancellation
would eat the requested tolerance in double precision.
"""
import logging
import math
from dataclasses import dataclass, replace
from typing import List, Optional, Tuple

import numpy as np
from mpmath import mp

from .errors import ContourInfeasible, InvalidArgument, NoConvergence, PoleHit

DOUBLE_DIGITS = 15.5
MAX_HIGH_NODES = 2 ** 16


@dataclass(frozen=True)
class ContourConfig:
    r_z: Optional[float] = None
    r_w: Optional[float] = None
    nodes: int = 64
    tol: float = 1e-10
    max_nodes: int = 2048
    precision: str = "auto"


def resolve_contour(spec, cfg=None):
    """Fill in default radii and check that the circles separate the poles."""
    cfg = cfg or ContourConfig()
    if cfg.precision not in ("auto", "double", "high"):
        raise InvalidArgument(f"unknown precision mode {cfg.precision!r}")
    x_max = max(spec.x, default=0.0)
    y_max = max(spec.y, default=0.0)
    if x_max * y_max >= 1:
        raise ContourInfeasible(
            f"max x * max y = {x_max * y_max!r} >= 1: no circle separates -y_j from 1/x_i")

    r_z = cfg.r_z
    if r_z is None:
        if x_max > 0 and y_max > 0:
            r_z = math.sqrt(y_max / x_max)
        elif x_max > 0:
            r_z = 0.5 / x_max
        elif y_max > 0:
            r_z = 2.0 * y_max
        else:
            r_z = 1.0
    if not (y_max < r_z and r_z * x_max < 1):
        raise ContourInfeasible(f"r_z = {r_z} must lie strictly between {y_max} and 1/{x_max}")
    r_w = cfg.r_w if cfg.r_w is not None else r_z / 2
    if not 0 < r_w < r_z:
        raise ContourInfeasible(f"need 0 < r_w < r_z, got r_w = {r_w}, r_z = {r_z}")
    return replace(cfg, r_z=r_z, r_w=r_w)


def f_symbol(z, spec):
    """F(z) = prod 1/(1 - x_i z) prod 1/(1 + y_j/z)."""
    z = complex(z)
    if abs(z) < 1e-12:
        raise PoleHit("F has an essential pole structure at z = 0")
    x = np.asarray(spec.x)
    y = np.asarray(spec.y)
    left = 1.0 - x * z
    right = 1.0 + y / z
    if np.any(np.abs(left) < 1e-12) or np.any(np.abs(right) < 1e-12):
        raise PoleHit(f"z = {z} is within 1e-12 of a pole of F")
    return complex(1.0 / (np.prod(left) * np.prod(right)))


def _f_values(z, spec):
    x = np.asarray(spec.x)
    y = np.asarray(spec.y)
    left = np.prod(1.0 - np.outer(z, x), axis=1) if len(x) else np.ones_like(z)
    right = np.prod(1.0 + np.outer(1.0 / z, y), axis=1) if len(y) else np.ones_like(z)
    return 1.0 / (left * right)


def _half_integers(positions):
    values = np.asarray(positions, dtype=float)
    doubled = 2 * values
    if np.any(np.abs(doubled - np.round(doubled)) > 1e-9) or np.any(np.round(doubled) % 2 != 1):
        raise InvalidArgument(f"kernel positions must be half-integers, got {positions}")
    return values


def _log10_sup_f(spec, r):
    return (-sum(math.log10(1 - x * r) for x in spec.x)
            - sum(math.log10(1 - y / r) for y in spec.y))


def _log10_sup_inverse_f(spec, r):
    return (sum(math.log10(1 + x * r) for x in spec.x)
            + sum(math.log10(1 + y / r) for y in spec.y))


def digit_loss(rows, cols, spec, cfg, path):
    """
    Decimal digits lost to cancellation: log10 of the largest term of the
    quadrature (double path) or of the coefficient series (high path),
    relative to |K| <= 1.
    """
    log_rz = math.log10(cfg.r_z)
    if path == "double":
        log_rw = math.log10(cfg.r_w)
        reach = max((0.5 - m) * log_rz + (m_prime + 0.5) * log_rw for m in rows for m_prime in cols)
        size = (_log10_sup_f(spec, cfg.r_z) + _log10_sup_inverse_f(spec, cfg.r_w)
                - math.log10(cfg.r_z - cfg.r_w) + reach)
    else:
        reach = max(-(m - m_prime) * log_rz for m in rows for m_prime in cols)
        size = _log10_sup_f(spec, cfg.r_z) + _log10_sup_inverse_f(spec, cfg.r_z) + reach
    return max(0.0, size)


def _trapezoid(rows, cols, spec, cfg, nodes):
    theta = 2 * np.pi * np.arange(nodes) / nodes
    phase = np.exp(1j * theta)
    z = cfg.r_z * phase
    w = cfg.r_w * phase
    z_power = 0.5 - rows
    w_power = cols + 0.5
    a = _f_values(z, spec)[:, None] * cfg.r_z ** z_power[None, :] * np.exp(1j * np.outer(theta, z_power))
    b = (1.0 / _f_values(w, spec))[:, None] * cfg.r_w ** w_power[None, :] * np.exp(1j * np.outer(theta, w_power))
    cauchy = 1.0 / (z[:, None] - w[None, :])
    return np.real(a.T @ cauchy @ b) / nodes ** 2


def _double_path(rows, cols, spec, cfg):
    nodes = cfg.nodes
    previous = _trapezoid(rows, cols, spec, cfg, nodes)
    while nodes < cfg.max_nodes:
        nodes *= 2
        current = _trapezoid(rows, cols, spec, cfg, nodes)
        error = float(np.max(np.abs(current - previous)))
        if error <= cfg.tol * max(1.0, float(np.max(np.abs(current)))):
            return current, nodes, error
        previous = current
    raise NoConvergence(f"kernel quadrature did not settle within {cfg.max_nodes} nodes")


def _inverse_f_coefficients(spec):
    """Coefficients of 1/F as a Laurent polynomial: entry d + k is G_d, d = -k..n."""
    poly = [mp.mpf(1)]
    for x in spec.x:
        x = mp.mpf(x)
        poly = [(poly[i] if i < len(poly) else 0) - (x * poly[i - 1] if i > 0 else 0) for i in range(len(poly) + 1)]
    for y in spec.y:
        y = mp.mpf(y)
        poly = [(y * poly[i] if i < len(poly) else 0) + (poly[i - 1] if i > 0 else 0) for i in range(len(poly) + 1)]
    return poly


def _laurent_coefficients(spec, r, nodes, indices):
    """F_a for a in indices, by the trapezoid rule on |z| = r."""
    r = mp.mpf(r)
    roots = [mp.expjpi(mp.mpf(2 * s) / nodes) for s in range(nodes)]
    xs = [mp.mpf(x) for x in spec.x]
    ys = [mp.mpf(y) for y in spec.y]
    values = [None] * nodes
    for s in range(nodes // 2 + 1):
        z = r * roots[s]
        denominator = mp.mpf(1)
        for x in xs:
            denominator *= 1 - x * z
        for y in ys:
            denominator *= 1 + y / z
        values[s] = 1 / denominator
        if 0 < s < nodes - s:
            values[nodes - s] = mp.conj(values[s])
    coefficients = {}
    for a in indices:
        total = mp.fdot(values, [roots[(-s * a) % nodes] for s in range(nodes)])
        coefficients[a] = mp.re(total) / (nodes * r ** a)
    return coefficients


def _series_matrix(rows, cols, spec, cfg, nodes):
    n, k = spec.n, spec.k
    inverse = _inverse_f_coefficients(spec)
    terms = {}
    needed = set()
    for m in rows:
        for m_prime in cols:
            lo = max(0, int(round(-n - m_prime - 0.5)))
            hi = int(round(k - m_prime - 0.5))
            pairs = [(int(round(m + l + 0.5)), int(round(-m_prime - l - 0.5))) for l in range(lo, hi + 1)]
            terms[m, m_prime] = pairs
            needed.update(a for a, _ in pairs)
    coefficients = _laurent_coefficients(spec, cfg.r_z, nodes, sorted(needed))
    matrix = np.zeros((len(rows), len(cols)))
    for i, m in enumerate(rows):
        for j, m_prime in enumerate(cols):
            total = mp.fsum(coefficients[a] * inverse[d + k] for a, d in terms[m, m_prime])
            matrix[i, j] = float(total)
    return matrix


def _high_path(rows, cols, spec, cfg, loss):
    target = -math.log10(cfg.tol)
    dps = int(math.ceil(loss + target + 10))
    ratio = max(max(spec.x, default=0.0) * cfg.r_z, max(spec.y, default=0.0) / cfg.r_z)
    nodes = cfg.nodes
    if ratio > 0:
        wanted = 1.5 * dps * math.log(10) / -math.log(ratio) + 2 * (spec.n + spec.k)
        nodes = max(nodes, 2 ** int(math.ceil(math.log2(wanted))))
    logging.debug(f"high precision kernel: {dps} digits, starting at {nodes} nodes")
    with mp.workdps(dps):
        previous = _series_matrix(rows, cols, spec, cfg, nodes)
        while nodes < MAX_HIGH_NODES:
            nodes *= 2
            current = _series_matrix(rows, cols, spec, cfg, nodes)
            error = float(np.max(np.abs(current - previous)))
            if error <= cfg.tol * max(1.0, float(np.max(np.abs(current)))):
                return current, nodes, error
            previous = current
    raise NoConvergence(f"Laurent coefficients did not settle within {MAX_HIGH_NODES} nodes")


def kernel_matrix(rows, spec, cfg=None, cols=None):
    """
    The matrix [K(m, m')] for m in rows, m' in cols (cols defaults to rows).

    Returns (matrix, nodes used, estimated error).
    """
    cfg = resolve_contour(spec, cfg)
    rows = _half_integers(rows)
    cols = rows if cols is None else _half_integers(cols)
    loss = digit_loss(rows, cols, spec, cfg, "double")
    high = cfg.precision == "high" or (
        cfg.precision == "auto" and loss - math.log10(cfg.tol) > DOUBLE_DIGITS)
    logging.debug(f"kernel on r_z={cfg.r_z:.6g}, r_w={cfg.r_w:.6g}: "
                  f"~{loss:.1f} digits of cancellation in double precision")
    if high:
        return _high_path(rows, cols, spec, cfg, digit_loss(rows, cols, spec, cfg, "high"))
    return _double_path(rows, cols, spec, cfg)


def correlation_kernel(m, m_prime, spec, cfg=None):
    matrix, _, _ = kernel_matrix([m], spec, cfg, cols=[m_prime])
    value = float(matrix[0, 0])
    if m == m_prime and not -1e-8 <= value <= 1 + 1e-8:
        logging.warning(f"kernel diagonal K({m}, {m}) = {value!r} is outside [0, 1]")
    return value


def correlation_probability(positions, spec, cfg=None):
    """Probability that all positions carry particles: det[K(a_i, a_j)]."""
    if len(set(positions)) != len(positions):
        raise InvalidArgument(f"positions must be distinct, got {positions}")
    matrix, _, _ = kernel_matrix(list(positions), spec, cfg)
    return float(np.linalg.det(matrix))


@dataclass
class KernelTable:
    """Evaluated kernel entries: (m, m', value, nodes, error) rows."""
    kind: str
    rows: List[Tuple[float, float, float, int, float]]

    def values(self):
        return np.array([row[2] for row in self.rows])


def finite_kernel_table(positions, spec, cfg=None):
    matrix, nodes, error = kernel_matrix(positions, spec, cfg)
    rows = [(float(m), float(m_prime), float(matrix[i, j]), nodes, error)
            for i, m in enumerate(positions) for j, m_prime in enumerate(positions)]
    return KernelTable("finite", rows)
