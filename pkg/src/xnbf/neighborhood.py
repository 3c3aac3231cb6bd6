"""Extended-neighborhood directions for a w x w lattice.

A direction connects the reference pixel to the first pixel hit along a
rational radial ray inside the lattice. First-quadrant directions are the
coprime offset pairs (l, m) with 1 <= l, m <= n, n = (w - 1) / 2; they are
replicated into all four quadrants and joined by the four axis directions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np


class Quadrant(Enum):
    I = "I"
    II = "II"
    III = "III"
    IV = "IV"
    AXIS_RIGHT = "axis_right"
    AXIS_LEFT = "axis_left"
    AXIS_UP = "axis_up"
    AXIS_DOWN = "axis_down"


AXES = (Quadrant.AXIS_RIGHT, Quadrant.AXIS_LEFT, Quadrant.AXIS_UP, Quadrant.AXIS_DOWN)
DIAGONAL_QUADRANTS = (Quadrant.I, Quadrant.II, Quadrant.III, Quadrant.IV)


@dataclass(frozen=True)
class Direction:
    """One radial direction: quadrant plus pre/post shift exponents (l, m)."""

    quadrant: Quadrant
    l: int
    m: int

    def __post_init__(self):
        if self.quadrant in DIAGONAL_QUADRANTS:
            if self.l < 1 or self.m < 1 or math.gcd(self.l, self.m) != 1:
                raise ValueError(f"quadrant direction needs coprime l,m >= 1, got {self}")
        else:
            if sorted((self.l, self.m)) != [0, 1]:
                raise ValueError(f"axis direction needs (l,m) in {{(0,1),(1,0)}}, got {self}")


@dataclass(frozen=True)
class Lattice:
    """Square lattice of odd side w; n = (w - 1) / 2."""

    w: int

    def __post_init__(self):
        if self.w < 3 or self.w % 2 == 0:
            raise ValueError(f"lattice side must be odd and >= 3, got {self.w}")

    @property
    def n(self) -> int:
        return (self.w - 1) // 2


def neighborhood_mask(n: int) -> np.ndarray:
    """First-quadrant mask E: E[l-1, m-1] = 1 iff gcd(l, m) = 1, 1 <= l, m <= n."""
    if n < 1:
        raise ValueError(f"mask order must be >= 1, got {n}")
    mask = np.zeros((n, n), dtype=np.uint8)
    for l in range(1, n + 1):
        for m in range(1, n + 1):
            mask[l - 1, m - 1] = 1 if math.gcd(l, m) == 1 else 0
    return mask


def quadrant_count(mask: np.ndarray) -> int:
    """Number of first-quadrant directions: sum of the unit mask entries."""
    return int(np.sum(mask, dtype=np.int64))


def direction_count(w: int) -> int:
    """Total direction count 4 * (N_q + 1) for a w x w lattice."""
    lat = Lattice(w)
    return 4 * (quadrant_count(neighborhood_mask(lat.n)) + 1)


def enumerate_directions(w: int) -> list[Direction]:
    """All directions of a w x w lattice in a fixed, reproducible order.

    Axis directions first (right, left, up, down), then quadrants I..IV,
    each sorted by (l, m) ascending.
    """
    lat = Lattice(w)
    dirs = [
        Direction(Quadrant.AXIS_RIGHT, 0, 1),
        Direction(Quadrant.AXIS_LEFT, 0, 1),
        Direction(Quadrant.AXIS_UP, 1, 0),
        Direction(Quadrant.AXIS_DOWN, 1, 0),
    ]
    mask = neighborhood_mask(lat.n)
    coprime = [(l, m) for l in range(1, lat.n + 1)
               for m in range(1, lat.n + 1) if mask[l - 1, m - 1]]
    coprime.sort()
    for quadrant in DIAGONAL_QUADRANTS:
        dirs.extend(Direction(quadrant, l, m) for l, m in coprime)
    return dirs
