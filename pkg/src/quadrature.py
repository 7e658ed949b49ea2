"""Adaptive composite Gauss-Legendre quadrature on [0, 1]."""
import logging
from functools import lru_cache

import numpy as np
from scipy.integrate import quad

from .errors import DivergentIntegral

ORDER = 20
MAX_PANELS = 4096
# panels still unsettled below this width go to QUADPACK
MIN_WIDTH = 1e-6
ROUNDOFF = 16 * np.finfo(float).eps


@lru_cache(maxsize=None)
def gauss_legendre(order):
    """Nodes and weights on [-1, 1]."""
    return np.polynomial.legendre.leggauss(order)


def _panel_sums(func, a, b, order):
    nodes, weights = gauss_legendre(order)
    half = 0.5 * (b - a)
    mid = 0.5 * (b + a)
    points = mid[:, None] + half[:, None] * nodes[None, :]
    values = func(points.ravel()).reshape(points.shape)
    return half * (values @ weights)


def _quad_part(part, a, b, tol):
    out = quad(part, a, b, epsabs=tol, epsrel=tol, limit=200, full_output=1)
    value, error = out[0], out[1]
    # a fourth entry is QUADPACK's failure message
    if not np.isfinite(value) or (len(out) > 3 and error > 1e-8 * max(1.0, abs(value))):
        message = out[3] if len(out) > 3 else "non-finite value"
        raise DivergentIntegral(f"integral over [{a}, {b}] diverges: {message}")
    return value


def _quad_panel(func, a, b, tol):
    """Integrate one narrow panel around an endpoint singularity with QUADPACK's extrapolation."""
    def scalar(s):
        return complex(func(np.array([s]))[0])

    real = _quad_part(lambda s: scalar(s).real, a, b, tol)
    if np.iscomplexobj(func(np.array([0.5 * (a + b)]))):
        return complex(real, _quad_part(lambda s: scalar(s).imag, a, b, tol))
    return real


def integrate(func, breakpoints=(), tol=1e-13, order=ORDER, max_panels=MAX_PANELS):
    """
    Integrate a vectorized (real or complex) function over [0, 1].

    Panels are split at `breakpoints` and then bisected wherever a panel's
    estimate disagrees with the sum over its two halves by more than its
    share of tol * max(1, |integral|), floored at the rounding error of the
    integral. Panels narrower than MIN_WIDTH that still disagree hold an
    endpoint singularity and are handed to scipy's `quad`, which raises
    DivergentIntegral if the singularity is not integrable.

      func: maps an array of s values to an array of integrand values
      breakpoints: interior points where the integrand has kinks
      tol: target relative accuracy
    """
    edges = np.unique(np.concatenate(([0.0], np.asarray(breakpoints, dtype=float), [1.0])))
    a, b = edges[:-1], edges[1:]
    coarse = _panel_sums(func, a, b, order)
    total = 0.0
    panels = len(a)
    while len(a):
        mid = 0.5 * (a + b)
        left = _panel_sums(func, a, mid, order)
        right = _panel_sums(func, mid, b, order)
        fine = left + right
        if not np.all(np.isfinite(fine)):
            raise DivergentIntegral("integrand is not finite on the quadrature nodes")
        scale = max(1.0, abs(total + np.sum(fine)))
        threshold = np.maximum(tol * scale * (b - a), ROUNDOFF * scale)
        done = np.abs(fine - coarse) <= threshold
        total = total + np.sum(fine[done])
        narrow = ~done & ((b - a) < MIN_WIDTH)
        for lo, hi in zip(a[narrow], b[narrow]):
            logging.debug(f"handing panel [{lo}, {hi}] to quad")
            total = total + _quad_panel(func, lo, hi, tol * scale)
        keep = ~done & ~narrow
        panels += int(np.count_nonzero(keep))
        if panels > max_panels:
            logging.debug(f"quadrature stalled with {panels} panels")
            raise DivergentIntegral(f"quadrature did not converge within {max_panels} panels")
        a = np.concatenate((a[keep], mid[keep]))
        b = np.concatenate((mid[keep], b[keep]))
        coarse = np.concatenate((left[keep], right[keep]))
    return total
