"""
Parameter sets for dual Schur measures.

A Specialization is the finite data (X, Y) of positive reals. A DensitySpec
is the continuum data (f, g, c) from which specializations are sampled as
x_i = f(i/n), y_j = g(j/k). Density families form a closed registry so that
every spec can be written to and read back from a JSON config.
"""
import math
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from .errors import InvalidParams


@dataclass(frozen=True)
class Constant:
    value: float

    def __call__(self, s):
        return np.full_like(np.asarray(s, dtype=float), float(self.value))

    def breakpoints(self):
        return ()

    def to_config(self):
        return {"family": "constant", "value": self.value}


@dataclass(frozen=True)
class Linear:
    """a + b s"""
    a: float
    b: float

    def __call__(self, s):
        return self.a + self.b * np.asarray(s, dtype=float)

    def breakpoints(self):
        return ()

    def to_config(self):
        return {"family": "linear", "a": self.a, "b": self.b}


@dataclass(frozen=True)
class Exponential:
    """scale * exp(rate s)"""
    rate: float
    scale: float = 1.0

    def __call__(self, s):
        return self.scale * np.exp(self.rate * np.asarray(s, dtype=float))

    def breakpoints(self):
        return ()

    def to_config(self):
        return {"family": "exp", "rate": self.rate, "scale": self.scale}


@dataclass(frozen=True)
class Power:
    """coeff * s**exponent; a negative exponent blows up at s = 0."""
    coeff: float
    exponent: float

    def __call__(self, s):
        s = np.asarray(s, dtype=float)
        with np.errstate(divide="ignore"):
            return self.coeff * np.power(s, self.exponent)

    def breakpoints(self):
        return ()

    def to_config(self):
        return {"family": "power", "coeff": self.coeff, "exponent": self.exponent}


@dataclass(frozen=True)
class Table:
    """Piecewise-linear interpolation through (s, value) points."""
    points: Tuple[Tuple[float, float], ...]

    def __post_init__(self):
        points = tuple(sorted((float(s), float(v)) for s, v in self.points))
        if len(points) < 2:
            raise InvalidParams("a table density needs at least two points")
        if points[0][0] > 0 or points[-1][0] < 1:
            raise InvalidParams(f"table points must cover [0, 1], got {points[0][0]}..{points[-1][0]}")
        object.__setattr__(self, "points", points)

    def __call__(self, s):
        xs, vs = zip(*self.points)
        return np.interp(np.asarray(s, dtype=float), xs, vs)

    def breakpoints(self):
        return tuple(s for s, _ in self.points if 0 < s < 1)

    def to_config(self):
        return {"family": "table", "points": [list(p) for p in self.points]}


@dataclass(frozen=True)
class Reciprocal:
    """1 / base(s)"""
    base: object

    def __call__(self, s):
        with np.errstate(divide="ignore"):
            return 1.0 / self.base(s)

    def breakpoints(self):
        return self.base.breakpoints()

    def to_config(self):
        return {"family": "reciprocal", "base": self.base.to_config()}


DENSITY_FAMILIES = {
    "constant": Constant,
    "linear": Linear,
    "exp": Exponential,
    "power": Power,
    "table": Table,
    "reciprocal": Reciprocal,
}


def density_from_config(config):
    """Build a density family from its JSON form, e.g. {"family": "exp", "gamma": 2}."""
    config = dict(config)
    name = config.pop("family", None)
    if name not in DENSITY_FAMILIES:
        raise InvalidParams(f"unknown density family: {name!r}")
    if name == "exp" and "gamma" in config:
        config["rate"] = -float(config.pop("gamma"))
    if name == "table":
        config["points"] = tuple(tuple(p) for p in config.get("points", ()))
    if name == "reciprocal":
        config["base"] = density_from_config(config.get("base", {}))
    try:
        return DENSITY_FAMILIES[name](**config)
    except TypeError as e:
        raise InvalidParams(f"bad parameters for density family {name!r}: {config}") from e


# Grid used to locate the ranges of f and g (singular sets of the action).
_RANGE_GRID = np.linspace(0.0, 1.0, 4001)[1:]


@dataclass(frozen=True)
class DensitySpec:
    f: object
    g: object
    c: float

    def __post_init__(self):
        if not self.c > 0:
            raise InvalidParams(f"aspect ratio c must be positive, got {self.c}")
        for name, func in (("f", self.f), ("g", self.g)):
            values = func(_RANGE_GRID)
            if np.any(values < 0) or np.any(np.isnan(values)):
                raise InvalidParams(f"density {name} must be nonnegative on [0, 1]")

    def breakpoints(self):
        return tuple(sorted(set(self.f.breakpoints()) | set(self.g.breakpoints())))

    def f_range(self):
        values = self.f(_RANGE_GRID)
        return float(np.min(values)), float(np.max(values))

    def g_range(self):
        values = self.g(_RANGE_GRID)
        return float(np.min(values)), float(np.max(values))

    def to_config(self):
        return {"f": self.f.to_config(), "g": self.g.to_config(), "c": self.c}

    @classmethod
    def from_config(cls, config):
        return cls(density_from_config(config["f"]), density_from_config(config["g"]), float(config["c"]))


@dataclass(frozen=True)
class Specialization:
    x: Tuple[float, ...]
    y: Tuple[float, ...]
    density: Optional[DensitySpec] = field(default=None, compare=False)

    def __post_init__(self):
        x = tuple(float(v) for v in self.x)
        y = tuple(float(v) for v in self.y)
        if any(not v > 0 or math.isinf(v) for v in x + y):
            raise InvalidParams("specialization parameters must be finite and strictly positive")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    @property
    def n(self):
        return len(self.x)

    @property
    def k(self):
        return len(self.y)

    def transpose(self):
        """(Y, X): the measure of conjugate partitions in the k x n box."""
        return Specialization(self.y, self.x)

    def site_probabilities(self):
        xy = np.outer(self.x, self.y)
        return xy / (1.0 + xy)

    @classmethod
    def from_density(cls, density, n, k=None):
        if k is None:
            k = int(round(density.c * n))
        x = density.f(np.arange(1, n + 1) / n)
        y = density.g(np.arange(1, k + 1) / k) if k > 0 else np.array([])
        return cls(tuple(x), tuple(y), density=density)


def dual_specialization(spec):
    """(1/Y, 1/X), for which complement-conjugation is measure preserving."""
    return Specialization(tuple(1.0 / v for v in spec.y), tuple(1.0 / v for v in spec.x))


def dual_density(density):
    """(1/g, 1/f, 1/c): the continuum form of dual_specialization, taken in the k x n box."""
    return DensitySpec(Reciprocal(density.g), Reciprocal(density.f), 1.0 / density.c)


def example_density(name, **params):
    """The named example specs: equal parameters, the two q-weights, the ramp and the critical corner example."""
    if name not in EXAMPLE_PRESETS:
        raise InvalidParams(f"unknown example: {name!r}")
    return EXAMPLE_PRESETS[name](**params)


def _example1(alpha, c):
    if not alpha > 0:
        raise InvalidParams(f"alpha must be positive, got {alpha}")
    return DensitySpec(Constant(alpha), Constant(1.0), c)


def _example2(gamma, c):
    # x_i = q^{i-1}, y_j = q^{1-j} with q = exp(-gamma/n)
    if gamma == 0:
        raise InvalidParams("gamma must be nonzero")
    return DensitySpec(Exponential(-gamma), Exponential(gamma * c), c)


def _example3(gamma, c):
    # x_i = q^{i-1}, y_j = q^{j-1}
    if gamma == 0:
        raise InvalidParams("gamma must be nonzero")
    return DensitySpec(Exponential(-gamma), Exponential(-gamma * c), c)


def _ramp(alpha, c):
    return DensitySpec(Linear(0.0, alpha), Linear(0.0, 1.0), c)


def _corner(c=2.0):
    return DensitySpec(Power(1.5, 2.0), Power(2.0, -1.0), c)


EXAMPLE_PRESETS = {
    "example1": _example1,
    "example2": _example2,
    "example3": _example3,
    "ramp": _ramp,
    "corner": _corner,
}
