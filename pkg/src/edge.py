"""
Edge fluctuations: the scaling constants at x+, the Airy kernel and the
Tracy-Widom GUE distribution as a Fredholm determinant.

In the convex case the rescaled first row (lambda_1 - x+ n)/(n^{1/3}/sigma)
converges to Tracy-Widom. In the concave case the statistic is n minus the
number of full rows, which is the first row of the complement-conjugate
partition under the dual spec (1/g, 1/f, 1/c) in the k x n box; the scaling
is computed there and mapped back to n.
"""
import logging
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import List

import numpy as np
from scipy.linalg import lu_factor
from scipy.optimize import brentq
from scipy.special import airy

from .errors import BoxViolation, CriticalRegime, DivergentIntegral, EmptyInput, InvalidArgument, NoConvergence, SingularPoint
from .limit_shape import ROOT_TOL, edge_cubic, safe_integral, support
from .parameters import Specialization, dual_density
from .quadrature import gauss_legendre
from .sampler import monte_carlo

BRANCHES = ("convex", "concave", "critical")
TW_TOL = 1e-8
TW_START_NODES = 16
TW_MAX_NODES = 512
RATIONAL_SCALE = 5.0


@dataclass(frozen=True)
class EdgeScaling:
    """
    Centre and width of the edge statistic, in units of n.

    For the concave branch z_plus is the double critical point of the dual
    spec; x_plus and sigma are already mapped back to the original box.
    """
    z_plus: float
    sigma: float
    x_plus: float
    branch: str

    def to_dict(self):
        return {"z_plus": self.z_plus, "sigma": self.sigma, "x_plus": self.x_plus, "branch": self.branch}


def sigma(spec, sup):
    """(2 / (z d/dz)^3 S(z+))^{1/3}, or inf when z+ is 0 or infinite or the integral diverges."""
    z = sup.z_plus
    if z == 0 or math.isinf(z):
        logging.warning(f"z+ = {z}: edge width is infinite (critical regime)")
        return math.inf
    try:
        value = edge_cubic(z, spec)
    except (DivergentIntegral, SingularPoint) as e:
        logging.warning(f"edge cubic term diverges at z+ = {z}: {e}")
        return math.inf
    if not value > 0:
        logging.warning(f"edge cubic term is not positive at z+ = {z}: {value}")
        return math.inf
    return float(np.cbrt(2.0 / value))


def branch(spec, tol=ROOT_TOL):
    """convex when int f < c int 1/g, concave when reversed, critical when equal."""
    left = safe_integral(spec.f, spec)
    right = spec.c * safe_integral(lambda s: 1.0 / spec.g(s), spec)
    if math.isinf(left) and math.isinf(right):
        raise DivergentIntegral("both int f and int 1/g diverge")
    if abs(left - right) < tol:
        return "critical"
    return "convex" if left < right else "concave"


def edge_scaling(spec):
    kind = branch(spec)
    if kind == "critical":
        return EdgeScaling(0.0, math.inf, spec.c, kind)
    if kind == "convex":
        sup = support(spec)
        return EdgeScaling(sup.z_plus, sigma(spec, sup), sup.x_plus, kind)
    dual = dual_density(spec)
    sup = support(dual)
    # the dual box has n' = c n rows
    return EdgeScaling(sup.z_plus, sigma(dual, sup) / np.cbrt(spec.c), sup.x_plus * spec.c, kind)


def edge_statistic(lam, n, k, kind):
    """lambda_1 for the convex (and critical) branch, n minus the number of full rows for the concave one."""
    if not lam.fits(n, k):
        raise BoxViolation(f"{lam} does not fit in a {n}x{k} box")
    if kind not in BRANCHES:
        raise InvalidArgument(f"unknown branch {kind!r}, expected one of {BRANCHES}")
    if kind == "concave":
        return n - sum(1 for p in lam.parts if p == k)
    return lam.first_row


def airy_kernel(xi, eta):
    """(Ai(xi) Ai'(eta) - Ai'(xi) Ai(eta)) / (xi - eta), with Ai'^2 - x Ai^2 on the diagonal."""
    xi, eta = np.broadcast_arrays(np.asarray(xi, dtype=float), np.asarray(eta, dtype=float))
    ai_x, aip_x, _, _ = airy(xi)
    ai_y, aip_y, _, _ = airy(eta)
    diff = xi - eta
    near = np.abs(diff) < 1e-6
    off = (ai_x * aip_y - aip_x * ai_y) / np.where(near, 1.0, diff)
    mid = 0.5 * (xi + eta)
    ai_m, aip_m, _, _ = airy(mid)
    result = np.where(near, aip_m ** 2 - mid * ai_m ** 2, off)
    return float(result) if result.ndim == 0 else result


def _ray_nodes(vertex, angle, radius, order):
    """Quadrature on the contour coming in along angle -a and leaving along angle +a."""
    u, w = gauss_legendre(order)
    r = 0.5 * radius * (u + 1)
    w = 0.5 * radius * w
    out = np.exp(1j * angle)
    back = np.exp(-1j * angle)
    nodes = np.concatenate((vertex + r * out, vertex + r * back))
    weights = np.concatenate((w * out, -w * back))
    return nodes, weights


def airy_kernel_contour(xi, eta, eps=0.5, radius=8.0, order=120):
    """
    The Airy kernel from its double contour integral

      (2 pi i)^{-2} int dw int dz exp(w^3/3 - xi w - z^3/3 + eta z) / (w - z)

    with w on rays from eps at angles +-pi/3 and z on rays from -eps at
    angles +-2pi/3. Used only to validate airy_kernel.
    """
    w, dw = _ray_nodes(eps, math.pi / 3, radius, order)
    z, dz = _ray_nodes(-eps, 2 * math.pi / 3, radius, order)
    left = dw * np.exp(w ** 3 / 3 - xi * w)
    right = dz * np.exp(-z ** 3 / 3 + eta * z)
    total = left @ (1.0 / (w[:, None] - z[None, :])) @ right
    return float((total / (2j * math.pi) ** 2).real)


def _map_nodes(s, transform, count):
    u, w = gauss_legendre(count)
    if transform == "tan":
        angle = math.pi * (1 + u) / 4
        return s + 10 * np.tan(angle), w * 10 * (math.pi / 4) / np.cos(angle) ** 2
    if transform == "rational":
        return s + RATIONAL_SCALE * (1 + u) / (1 - u), w * 2 * RATIONAL_SCALE / (1 - u) ** 2
    raise InvalidArgument(f"unknown variable change {transform!r}, expected 'tan' or 'rational'")


def _determinant(matrix):
    lu, pivots = lu_factor(matrix)
    swaps = np.count_nonzero(pivots != np.arange(len(pivots)))
    return float(np.prod(np.diag(lu)) * (-1) ** swaps)


def fredholm_matrix(s, transform="tan", count=64):
    """I - sqrt(w) K_Airy sqrt(w) on mapped Gauss-Legendre nodes over (s, inf)."""
    xi, weights = _map_nodes(s, transform, count)
    root = np.sqrt(weights)
    with np.errstate(over="ignore", invalid="ignore"):
        kernel = airy_kernel(xi[:, None], xi[None, :])
        scaled = root[:, None] * kernel * root[None, :]
    scaled[~np.isfinite(scaled)] = 0.0
    return np.eye(count) - scaled


def tracy_widom_cdf(s, transform="tan", nodes=None, tol=TW_TOL, max_nodes=TW_MAX_NODES):
    """
    F_GUE(s) = det(I - K_Airy) on L^2(s, inf).

      transform: 'tan' for xi = s + 10 tan(pi (1+u)/4), 'rational' for xi = s + 5 (1+u)/(1-u)
      nodes: fixed node count; by default the count is doubled from 16 until
        successive values agree within tol
    """
    if nodes is not None:
        return min(1.0, max(0.0, _determinant(fredholm_matrix(s, transform, nodes))))
    count = TW_START_NODES
    previous = _determinant(fredholm_matrix(s, transform, count))
    while count < max_nodes:
        count *= 2
        value = _determinant(fredholm_matrix(s, transform, count))
        if abs(value - previous) < tol:
            logging.debug(f"F_GUE({s}) converged with {count} nodes")
            return min(1.0, max(0.0, value))
        previous = value
    raise NoConvergence(f"Tracy-Widom determinant at s = {s} did not settle within {max_nodes} nodes")


@lru_cache(maxsize=None)
def _cached_cdf(s):
    return tracy_widom_cdf(s)


def tracy_widom_table(grid, transform="tan"):
    return [(float(s), tracy_widom_cdf(float(s), transform)) for s in grid]


def tracy_widom_quantile(p, lower=-10.0, upper=8.0):
    if not 0 < p < 1:
        raise InvalidArgument(f"quantile level must lie in (0, 1), got {p}")
    return brentq(lambda s: _cached_cdf(s) - p, lower, upper, xtol=1e-10)


def tracy_widom_mean(lower=-10.0, upper=8.0, order=64):
    """int s dF(s), integrated by parts: int_0^inf (1 - F) - int_-inf^0 F."""
    u, w = gauss_legendre(order)
    negative = 0.5 * lower * (u - 1)
    positive = 0.5 * upper * (u + 1)
    left = sum(wi * tracy_widom_cdf(float(s)) for s, wi in zip(negative, w)) * (-0.5 * lower)
    right = sum(wi * (1.0 - tracy_widom_cdf(float(s))) for s, wi in zip(positive, w)) * (0.5 * upper)
    return right - left


def edge_rescale(values, scaling, n):
    """(L - x+ n) / (n^{1/3} / sigma)."""
    if math.isinf(scaling.sigma):
        raise CriticalRegime("edge width is infinite; use the critical regime instead")
    return (np.asarray(values, dtype=float) - scaling.x_plus * n) * scaling.sigma / np.cbrt(n)


def ks_distance(samples, cdf, lattice_step=None):
    """
    Sup distance between the empirical CDF of `samples` and `cdf`.

    With lattice_step h the samples live on a lattice of spacing h and the
    empirical CDF at v is compared with cdf(v + h/2), just below v with
    cdf(v - h/2).
    """
    values = np.asarray(samples, dtype=float)
    if values.size == 0:
        raise EmptyInput("no samples to compare")
    points, counts = np.unique(values, return_counts=True)
    after = np.cumsum(counts) / values.size
    before = after - counts / values.size
    half = 0.0 if lattice_step is None else 0.5 * lattice_step
    upper = np.array([cdf(v + half) for v in points])
    lower = upper if lattice_step is None else np.array([cdf(v - half) for v in points])
    return float(max(np.max(np.abs(after - upper)), np.max(np.abs(before - lower))))


@dataclass
class FluctuationResult:
    scaling: EdgeScaling
    n: int
    raw: np.ndarray
    rescaled: np.ndarray
    ks: float
    table: List = field(default_factory=list)
    seed: int = 0
    elapsed: float = 0.0

    def summary(self):
        return {
            "scaling": self.scaling.to_dict(),
            "n": self.n,
            "samples": int(self.rescaled.size),
            "ks": self.ks,
            "mean": float(np.mean(self.rescaled)),
            "std": float(np.std(self.rescaled)),
            "seed": self.seed,
        }


def fluctuation_experiment(spec, n, samples, seed=0, workers=1, grid=None):
    """Sample the edge statistic, rescale it and compare with Tracy-Widom."""
    scaling = edge_scaling(spec)
    if scaling.branch == "critical":
        raise CriticalRegime("spec is critical; edge fluctuations are discrete")
    statistic = "lambda1" if scaling.branch == "convex" else "corner_deficit"
    batch = monte_carlo(Specialization.from_density(spec, n), samples, statistic, seed, workers)
    raw = batch.as_array()
    rescaled = edge_rescale(raw, scaling, n)
    step = scaling.sigma / np.cbrt(n)
    ks = ks_distance(rescaled, _cached_cdf, lattice_step=step)
    logging.info(f"KS distance to Tracy-Widom: {ks:.4f} over {samples} samples")
    table = tracy_widom_table(grid) if grid is not None else []
    return FluctuationResult(scaling, n, raw, rescaled, ks, table, seed, batch.elapsed)
