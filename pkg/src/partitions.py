"""
Integer partitions confined to an n x k rectangle, and their encodings.

A partition is stored as a tuple of weakly decreasing positive parts. Two
encodings are used throughout the package:

  Maya sequence: the half-integer particle positions a_i = lambda_i - i + 1/2.
  Profile: the boundary of the diagram in Russian notation, rescaled by 1/n,
    with slope -1 over the unit segment [a - 1/2, a + 1/2] of every particle
    a and slope +1 elsewhere.
"""
import itertools
import json
import logging
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from .errors import BoxViolation, InvalidArgument


@dataclass(frozen=True)
class Partition:
    parts: Tuple[int, ...] = ()
    box: Optional[Tuple[int, int]] = field(default=None, compare=False)

    def __post_init__(self):
        parts = tuple(int(p) for p in self.parts)
        if any(p < 0 for p in parts):
            raise InvalidArgument(f"negative part in {parts}")
        if any(a < b for a, b in zip(parts, parts[1:])):
            raise InvalidArgument(f"parts are not weakly decreasing: {parts}")
        object.__setattr__(self, "parts", tuple(p for p in parts if p > 0))
        if self.box is not None:
            n, k = (int(v) for v in self.box)
            object.__setattr__(self, "box", (n, k))
            if not self.fits(n, k):
                raise BoxViolation(f"{self} does not fit in a {n}x{k} box")

    def __len__(self):
        return len(self.parts)

    def __getitem__(self, i):
        return self.parts[i]

    def __iter__(self):
        return iter(self.parts)

    def __str__(self):
        return "(" + ",".join(str(p) for p in self.parts) + ")"

    @property
    def size(self):
        return sum(self.parts)

    @property
    def first_row(self):
        return self.parts[0] if self.parts else 0

    def part(self, i):
        """The i-th part (0-based), zero beyond the last nonzero part."""
        return self.parts[i] if i < len(self.parts) else 0

    def fits(self, n, k):
        return len(self.parts) <= n and self.first_row <= k

    def to_json(self):
        return json.dumps(list(self.parts), separators=(",", ":"))

    @classmethod
    def from_json(cls, text, box=None):
        return cls(tuple(json.loads(text)), box=box)


def _require_fit(lam, n, k):
    if not lam.fits(n, k):
        raise BoxViolation(f"{lam} does not fit in a {n}x{k} box")


def conjugate(lam):
    """Transpose of the Young diagram; a box (n, k) becomes (k, n)."""
    parts = tuple(sum(1 for p in lam.parts if p > j) for j in range(lam.first_row))
    box = (lam.box[1], lam.box[0]) if lam.box is not None else None
    return Partition(parts, box=box)


def complement(lam, n, k):
    """
    Complement of lam inside the n x k rectangle, rotated by 180 degrees so
    that it is again a partition: bar_i = k - lam_{n+1-i}.
    """
    _require_fit(lam, n, k)
    parts = tuple(k - lam.part(n - 1 - i) for i in range(n))
    return Partition(parts, box=(n, k))


def maya(lam, depth):
    """First `depth` Maya positions lambda_i - i + 1/2 (strictly decreasing)."""
    if depth < 1:
        raise InvalidArgument(f"maya depth must be at least 1, got {depth}")
    return tuple(lam.part(i) - i - 0.5 for i in range(depth))


def weighted_size(lam):
    """sum_i (i - 1) lambda_i."""
    return sum(i * p for i, p in enumerate(lam.parts))


@dataclass(frozen=True)
class Profile:
    """Breakpoints of a rescaled Russian-notation profile."""
    u: np.ndarray
    value: np.ndarray

    def __call__(self, points):
        return np.interp(points, self.u, self.value)

    def rows(self):
        return list(zip(self.u.tolist(), self.value.tolist()))


def profile(lam, n, k):
    """
    The diagram boundary in Russian notation, rescaled by 1/n.

    The unscaled profile is traced over unit segments [p, p+1] for
    p = -n-1, ..., k, starting from the vacuum value n+1 at p = -n-1.
    Outside the diagram it coincides with |u|.
    """
    _require_fit(lam, n, k)
    particles = set(maya(lam, n + 1))
    positions = np.arange(-n - 1, k + 2)
    slopes = np.array([-1 if p + 0.5 in particles else 1 for p in positions[:-1]])
    values = np.concatenate(([n + 1], n + 1 + np.cumsum(slopes)))
    return Profile(positions / n, values / n)


def partitions_in_box(n, k):
    """
    Every partition fitting in the n x k box, C(n+k, n) of them.

    Parts are drawn as multisets of {0, ..., k} of size n, so the order is
    deterministic.
    """
    for combo in itertools.combinations_with_replacement(range(k + 1), n):
        yield Partition(tuple(reversed(combo)), box=(n, k))


def full_box(n, k):
    return Partition((k,) * n, box=(n, k))


def mean_profile(partitions, n, k, points):
    """Average of the rescaled profiles of `partitions`, sampled at `points`."""
    total = np.zeros_like(np.asarray(points, dtype=float))
    count = 0
    for lam in partitions:
        total += profile(lam, n, k)(points)
        count += 1
    if count == 0:
        raise InvalidArgument("mean_profile needs at least one partition")
    logging.debug(f"averaged {count} profiles on {len(total)} points")
    return total / count
