"""
Saddle-point analysis of the dual Schur measure for x_i = f(i/n), y_j = g(j/k).

The continuum action is

  S(z) = -int ln(1 - f(s) z) ds - c int ln(1 + g(s)/z) ds - t ln z

and everything below is computed from its logarithmic derivatives
(z d/dz)^p S, which have explicit integral forms:

  p = 1: int fz/(1-fz) + c int g/(z+g) - t
  p = 2: int fz/(1-fz)^2 - c int gz/(z+g)^2
  p = 3: int fz(1+fz)/(1-fz)^3 - c int gz(g-z)/(z+g)^3

The density of Maya particles at t is arg z(t)/pi for the upper half-plane
root z(t) of the first equation; the support [x-, x+] comes from the two
double critical points z-+ where the second one vanishes as well.
"""
import logging
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.integrate import cumulative_trapezoid
from scipy.optimize import brentq
from scipy.special import expit

from .errors import DivergentIntegral, InvalidParams, NoRoot, RootCountMismatch, SingularPoint
from .quadrature import integrate

QUAD_TOL = 1e-13
ROOT_TOL = 1e-10
UNBOUNDED = 1e8
NEGLIGIBLE = 1e-8

_RANGE_GRID = np.concatenate(([1e-12, 1e-9, 1e-6], np.linspace(0.0, 1.0, 4001)[1:]))


@lru_cache(maxsize=128)
def value_ranges(spec):
    """(f_min, f_max, g_min, g_max) with unbounded maxima reported as inf and vanishing minima as 0."""
    def bounds(func):
        values = func(_RANGE_GRID)
        low, high = float(np.min(values)), float(np.max(values))
        return (0.0 if low < NEGLIGIBLE else low), (math.inf if high > UNBOUNDED else high)
    return bounds(spec.f) + bounds(spec.g)


def _check_regular(z, spec):
    if abs(z) < 1e-14:
        raise SingularPoint("z = 0 is a singular point of the action")
    if abs(z.imag) > 1e-14 * abs(z):
        return
    f_min, f_max, g_min, g_max = value_ranges(spec)
    x = z.real
    if x > 0 and f_max > 0 and x * f_max >= 1 and (f_min == 0 or x * f_min <= 1):
        raise SingularPoint(f"z = {x} lies on the cut [1/max f, 1/min f]")
    if x < 0 and g_min <= -x <= g_max:
        raise SingularPoint(f"z = {x} lies on the cut [-max g, -min g]")


def _integrate(integrand, spec):
    return integrate(integrand, spec.breakpoints(), tol=QUAD_TOL)


def action(z, t, spec):
    z = complex(z)
    _check_regular(z, spec)

    def integrand(s):
        return -np.log(1 - spec.f(s) * z) - spec.c * np.log(1 + spec.g(s) / z)
    return complex(_integrate(integrand, spec)) - t * np.log(z)


def _zdz_integrand(z, spec, order):
    def integrand(s):
        fz = spec.f(s) * z
        g = spec.g(s)
        if order == 1:
            return fz / (1 - fz) + spec.c * g / (z + g)
        if order == 2:
            return fz / (1 - fz) ** 2 - spec.c * g * z / (z + g) ** 2
        return fz * (1 + fz) / (1 - fz) ** 3 - spec.c * g * z * (g - z) / (z + g) ** 3
    return integrand


def zdz_derivatives(z, spec, order, t=0.0):
    """(z d/dz)^order S at z; t enters the first order only."""
    if order not in (1, 2, 3):
        raise InvalidParams(f"order must be 1, 2 or 3, got {order}")
    z = complex(z)
    _check_regular(z, spec)
    value = complex(_integrate(_zdz_integrand(z, spec, order), spec))
    return value - t if order == 1 else value


def edge_cubic(z, spec):
    """int 2 f^2 z^2/(1-fz)^3 + 2 c g z^2/(z+g)^3; equals (z d/dz)^3 S at a double critical point."""
    z = float(z)
    _check_regular(complex(z), spec)

    def integrand(s):
        f = spec.f(s)
        g = spec.g(s)
        return 2 * f ** 2 * z ** 2 / (1 - f * z) ** 3 + 2 * spec.c * g * z ** 2 / (z + g) ** 3
    return float(_integrate(integrand, spec))


def _reduced_second(z, spec):
    """(z d/dz)^2 S / z for real z."""
    def integrand(s):
        f = spec.f(s)
        g = spec.g(s)
        return f / (1 - f * z) ** 2 - spec.c * g / (z + g) ** 2
    return float(_integrate(integrand, spec))


def _real_first(z, spec):
    def integrand(s):
        f = spec.f(s)
        g = spec.g(s)
        return f * z / (1 - f * z) + spec.c * g / (z + g)
    return float(_integrate(integrand, spec))


@dataclass(frozen=True)
class SupportData:
    z_minus: float
    z_plus: float
    x_minus: float
    x_plus: float
    edge_density: tuple

    def to_dict(self):
        return {
            "z_minus": self.z_minus,
            "z_plus": self.z_plus,
            "x_minus": self.x_minus,
            "x_plus": self.x_plus,
            "edge_density": list(self.edge_density),
        }


def _search_intervals(spec):
    f_min, f_max, g_min, g_max = value_ranges(spec)
    intervals = [(0.0, 1.0 / f_max if f_max > 0 else math.inf)]
    if 0 < f_min and f_max < math.inf:
        intervals.append((1.0 / f_min, math.inf))
    if g_min > 0:
        intervals.append((-g_min, 0.0))
    if g_max < math.inf:
        intervals.append((-math.inf, -g_max))
    return intervals


def _scan_points(a, b):
    u = np.linspace(-30.0, 30.0, 241)
    if math.isinf(b):
        return a + max(abs(a), 1.0) * np.exp(u[80:])
    if math.isinf(a):
        return b - max(abs(b), 1.0) * np.exp(u[80:])[::-1]
    return a + (b - a) * expit(u)


def _safe_reduced_second(z, spec):
    try:
        return _reduced_second(z, spec)
    except (DivergentIntegral, SingularPoint):
        return math.nan


def _real_roots(spec):
    roots = []
    for a, b in _search_intervals(spec):
        points = _scan_points(a, b)
        values = np.array([_safe_reduced_second(z, spec) for z in points])
        found = 0
        for i in range(len(points) - 1):
            left, right = values[i], values[i + 1]
            if not (np.isfinite(left) and np.isfinite(right)):
                continue
            if left == 0:
                roots.append(float(points[i]))
                found += 1
            elif left * right < 0:
                roots.append(brentq(_reduced_second, points[i], points[i + 1], args=(spec,), xtol=1e-15))
                found += 1
        logging.debug(f"{found} double critical point(s) in ({a}, {b})")
    return roots


def safe_integral(func, spec):
    """int_0^1 func, or inf when the quadrature diverges."""
    try:
        return float(_integrate(func, spec))
    except DivergentIntegral:
        return math.inf


def zero_residual(spec):
    """int f - c int 1/g: the value of (z d/dz)^2 S / z at z = 0."""
    return safe_integral(spec.f, spec) - spec.c * safe_integral(lambda s: 1.0 / spec.g(s), spec)


def infinity_residual(spec):
    """int 1/f - c int g: the leading coefficient of (z d/dz)^2 S * z at infinity."""
    return safe_integral(lambda s: 1.0 / spec.f(s), spec) - spec.c * safe_integral(spec.g, spec)


def _edge_value(z):
    if math.isinf(z):
        return 1
    return 0 if z >= 0 else 1


def _boundary_end(spec, found):
    """
    The missing double critical point when only one was found and it sits
    at a boundary whose residual integrals diverge (both cuts reach it).
    """
    candidates = []
    if not math.isinf(found) and not math.isfinite(infinity_residual(spec)):
        candidates.append((math.inf, -1.0))
    if found != 0 and not math.isfinite(zero_residual(spec)):
        candidates.append((0.0, spec.c))
    if len(candidates) == 1:
        logging.debug(f"boundary double critical point z = {candidates[0][0]}")
        return candidates
    return []


def support(spec, tol=ROOT_TOL):
    """Double critical points z-+ and the support endpoints x-+ = (z d/dz S)(z-+) + t."""
    roots = _real_roots(spec)
    f_min, f_max, g_min, g_max = value_ranges(spec)
    ends = []
    if g_min > 0 and abs(zero_residual(spec)) < tol:
        roots = [z for z in roots if abs(z) > 1e-8]
        ends.append((0.0, spec.c))
    if f_min > 0 and abs(infinity_residual(spec)) < tol:
        roots = [z for z in roots if abs(z) < 1e8]
        ends.append((math.inf, -1.0))
    ends.extend((z, _real_first(z, spec)) for z in roots)
    if len(ends) == 1:
        ends.extend(_boundary_end(spec, ends[0][0]))
    if len(ends) != 2:
        raise RootCountMismatch(f"expected two double critical points, found {len(ends)}: {[z for z, _ in ends]}")
    (z_minus, x_minus), (z_plus, x_plus) = sorted(ends, key=lambda pair: pair[1])
    logging.debug(f"support [{x_minus}, {x_plus}] from z- = {z_minus}, z+ = {z_plus}")
    return SupportData(z_minus, z_plus, x_minus, x_plus, (_edge_value(z_minus), _edge_value(z_plus)))


def _starting_points(spec, guess):
    f_mid = float(spec.f(np.array([0.5]))[0])
    g_mid = float(spec.g(np.array([0.5]))[0])
    scale = math.sqrt(g_mid / f_mid) if f_mid > 0 and g_mid > 0 else 1.0
    starts = [] if guess is None else [complex(guess)]
    for angle in (0.5, 0.25, 0.75, 0.125, 0.875):
        for radius in (1.0, 0.5, 2.0, 0.2, 5.0, 0.05, 20.0):
            starts.append(scale * radius * complex(math.cos(math.pi * angle), math.sin(math.pi * angle)))
    return starts


def _newton(z, t, spec, max_iter=100):
    value = zdz_derivatives(z, spec, 1, t)
    for _ in range(max_iter):
        step = value / (zdz_derivatives(z, spec, 2) / z)
        damping = 1.0
        while True:
            candidate = z - damping * step
            if candidate.imag < 0:
                candidate = candidate.conjugate()
            try:
                candidate_value = zdz_derivatives(candidate, spec, 1, t)
            except (SingularPoint, DivergentIntegral):
                candidate_value = None
            if candidate_value is not None and abs(candidate_value) <= abs(value):
                break
            damping /= 2
            if damping < 1e-8:
                return z, value
        moved = abs(candidate - z)
        z, value = candidate, candidate_value
        if moved <= 1e-15 * abs(z) or value == 0:
            break
    return z, value


def critical_point(t, spec, guess=None):
    """The root of z d/dz S(z) = t in the open upper half-plane."""
    for start in _starting_points(spec, guess):
        try:
            z, value = _newton(start, t, spec)
        except (SingularPoint, DivergentIntegral, ZeroDivisionError):
            continue
        if abs(value) < ROOT_TOL and z.imag > 1e-9 * abs(z):
            return z
    raise NoRoot(f"no upper half-plane critical point found for t = {t}")


def density(t, spec, sup=None, guess=None):
    """Limiting particle density at t: arg z(t)/pi inside the support, 0 or 1 outside."""
    if t <= -1:
        return 1.0
    if t >= spec.c:
        return 0.0
    sup = sup or support(spec)
    if t <= sup.x_minus:
        return float(sup.edge_density[0])
    if t >= sup.x_plus:
        return float(sup.edge_density[1])
    return float(np.angle(critical_point(t, spec, guess)) / math.pi)


def density_grid(ts, spec, sup=None):
    """Densities on a grid of t, continuing the critical point from one t to the next."""
    sup = sup or support(spec)
    rho = np.empty(len(ts))
    guess = None
    for i, t in enumerate(ts):
        if sup.x_minus < t < sup.x_plus and -1 < t < spec.c:
            z = critical_point(t, spec, guess)
            rho[i] = np.angle(z) / math.pi
            guess = z
        else:
            rho[i] = density(t, spec, sup)
            guess = None
    return rho


@dataclass(frozen=True)
class LimitShapeCurve:
    u: np.ndarray
    omega: np.ndarray
    rho: np.ndarray

    def __call__(self, points):
        return np.interp(points, self.u, self.omega)

    def rows(self):
        return list(zip(self.u.tolist(), self.omega.tolist(), self.rho.tolist()))


def limit_curve(spec, step, sup=None):
    """Omega(u) = 1 + int_{-1}^u (1 - 2 rho) on a grid over [-1, c]."""
    if not step > 0:
        raise InvalidParams(f"grid step must be positive, got {step}")
    sup = sup or support(spec)
    count = int(math.ceil((spec.c + 1) / step)) + 1
    u = np.linspace(-1.0, spec.c, count)
    rho = density_grid(u, spec, sup)
    omega = 1.0 + cumulative_trapezoid(1.0 - 2.0 * rho, u, initial=0.0)
    return LimitShapeCurve(u, omega, rho)


def sine_kernel_limit(t, m, m_prime, spec):
    """
    sin(phi (m - m'))/(pi (m - m')) with phi = arg z(t); phi/pi on the diagonal.

    The finite kernel near nt converges to this up to the gauge factor
    |z(t)|^{m' - m}, which drops out of every correlation determinant.
    """
    phi = float(np.angle(critical_point(t, spec)))
    d = m - m_prime
    if d == 0:
        return phi / math.pi
    return math.sin(phi * d) / (math.pi * d)


def profile_distance(profile_values, curve, points):
    """Sup distance between sampled profile values and Omega on the same points."""
    return float(np.max(np.abs(np.asarray(profile_values) - curve(points))))


def _clipped_arccos(argument):
    return math.acos(min(1.0, max(-1.0, argument))) / math.pi


def example1_root(alpha, c, t):
    """Closed-form upper half-plane critical point for f = alpha, g = 1."""
    b = alpha * (c - 1) + t * (1 - alpha)
    discriminant = 4 * alpha * (t + 1) * (t - c) + b ** 2
    return complex(b, math.sqrt(max(0.0, -discriminant))) / (2 * alpha * (t + 1))


def _example1(alpha, c, t):
    if not (alpha > 0 and c > 0):
        raise InvalidParams(f"need alpha > 0 and c > 0, got alpha={alpha}, c={c}")
    root = 2 * math.sqrt(alpha * c)
    x_minus = (alpha * (c - 1) - root) / (alpha + 1)
    x_plus = (alpha * (c - 1) + root) / (alpha + 1)
    if t <= -1:
        return 1.0, x_minus, x_plus
    if t >= c:
        return 0.0, x_minus, x_plus
    argument = (alpha * (c - 1) + t * (1 - alpha)) / (2 * math.sqrt(alpha * (c - t) * (t + 1)))
    return _clipped_arccos(argument), x_minus, x_plus


def _q_support(gamma, lead, middle, const):
    """Endpoints t = ln(E)/gamma for the roots E of lead E^2 - 2 middle E + const = 0."""
    root = math.sqrt(middle ** 2 - lead * const)
    ends = sorted(math.log((middle + sign * root) / lead) / gamma for sign in (-1, 1))
    return ends[0], ends[1]


def _q_tails(t, c):
    if t <= -1:
        return 1.0
    if t >= c:
        return 0.0
    return None


def _example2(gamma, c, t):
    if gamma == 0 or not c > 0:
        raise InvalidParams(f"need gamma != 0 and c > 0, got gamma={gamma}, c={c}")
    a, b = math.exp(-gamma), math.exp(gamma * c)
    x_minus, x_plus = _q_support(gamma, 1.0, (a + b) / 2, a * b + (1 - a * b) ** 2 / 4)
    tail = _q_tails(t, c)
    if tail is not None:
        return tail, x_minus, x_plus
    argument = (-math.copysign(1.0, gamma) * math.exp(gamma - gamma * (t + 1) / 2) / 2
                * (1 - math.exp(gamma * (c - 1)))
                / math.sqrt((1 - math.exp(gamma * (t + 1))) * (1 - math.exp(gamma * (c - t)))))
    return _clipped_arccos(argument), x_minus, x_plus


def _example3(gamma, c, t):
    if gamma == 0 or not c > 0:
        raise InvalidParams(f"need gamma != 0 and c > 0, got gamma={gamma}, c={c}")
    a, b = math.exp(-gamma), math.exp(-gamma * c)
    x_minus, x_plus = _q_support(gamma, (1 + b) ** 2, 3 - a - b + 3 * a * b, (1 + a) ** 2)
    tail = _q_tails(t, c)
    if tail is not None:
        return tail, x_minus, x_plus
    numerator = (1 - math.exp(gamma * c) - math.exp(gamma * (c - t - 1)) + math.exp(gamma * (c - t)))
    argument = (-math.copysign(1.0, gamma) * math.exp(gamma * (t + 1 - c) / 2) / 2 * numerator
                / math.sqrt((1 - math.exp(gamma * (t + 1))) * (1 - math.exp(gamma * (c - t)))))
    return _clipped_arccos(argument), x_minus, x_plus


_ORACLES = {1: _example1, 2: _example2, 3: _example3}


def example_oracles(name, params, t):
    """
    Closed forms (rho(t), x-, x+) for the solvable examples.

      1: f = alpha, g = 1 (params alpha, c)
      2: f = exp(-gamma s), g = exp(gamma c s) (params gamma, c)
      3: f = exp(-gamma s), g = exp(-gamma c s) (params gamma, c)
    """
    if name not in _ORACLES:
        raise InvalidParams(f"no closed form for example {name!r}")
    return _ORACLES[name](t=t, **params)
