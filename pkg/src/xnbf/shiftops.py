"""Image shifting that maps each neighborhood pixel onto the reference pixel.

A shift is the pre/post multiplication of the image by powers of the lower
(L, ones on the sub-diagonal) and upper (U, ones on the super-diagonal)
shift matrices. Geometrically, with l the pre-exponent and m the post:

    pre  L^l : rows move down by l  (top rows zero-filled)
    pre  U^l : rows move up by l    (bottom rows zero-filled)
    post L^m : cols move left by m  (right cols zero-filled)
    post U^m : cols move right by m (left cols zero-filled)

Quadrant choice of the operators: I = L.I.L, II = L.I.U, III = U.I.U,
IV = U.I.L; axis directions use the single-sided forms IL (right),
IU (left), LI (up) and UI (down). Vacated positions are exactly zero.

`shift_image` does this with array slicing; `shift_oracle` materializes the
shift matrices and takes the literal matrix product (slow reference path).
"""

from __future__ import annotations

import warnings

import numpy as np

from .imagecore import as_image
from .neighborhood import Direction, Quadrant

# (pre operator, post operator) per quadrant; None = identity on that side.
_OPERATORS = {
    Quadrant.I: ("L", "L"),
    Quadrant.II: ("L", "U"),
    Quadrant.III: ("U", "U"),
    Quadrant.IV: ("U", "L"),
    Quadrant.AXIS_RIGHT: (None, "L"),
    Quadrant.AXIS_LEFT: (None, "U"),
    Quadrant.AXIS_UP: ("L", None),
    Quadrant.AXIS_DOWN: ("U", None),
}


def neighbor_offset(direction: Direction) -> tuple[int, int]:
    """(drow, dcol) of the neighbor a direction samples, relative to the center.

    shift_image moves the image by the negated offset, which is what lands
    that neighbor on the reference position.
    """
    pre, post = _OPERATORS[direction.quadrant]
    dr = 0 if pre is None else (-direction.l if pre == "L" else direction.l)
    dc = 0 if post is None else (direction.m if post == "L" else -direction.m)
    return dr, dc


def _translate(img: np.ndarray, dr: int, dc: int) -> np.ndarray:
    """Translate by (dr, dc) = (down, right), zero-filling vacated cells."""
    height, width = img.shape
    out = np.zeros_like(img)
    if abs(dr) >= height or abs(dc) >= width:
        warnings.warn(f"shift ({dr},{dc}) moves the whole {height}x{width} image out")
        return out
    src_r = slice(max(0, -dr), height - max(0, dr))
    src_c = slice(max(0, -dc), width - max(0, dc))
    dst_r = slice(max(0, dr), height - max(0, -dr))
    dst_c = slice(max(0, dc), width - max(0, -dc))
    out[dst_r, dst_c] = img[src_r, src_c]
    return out


def shift_image(img, direction: Direction) -> np.ndarray:
    """Shifted image J_k for one direction, zero fill at vacated positions."""
    img = as_image(img)
    dr, dc = neighbor_offset(direction)
    return _translate(img, -dr, -dc)


def _shift_matrix(n: int, kind: str) -> np.ndarray:
    # L: ones on the sub-diagonal; U: ones on the super-diagonal.
    return np.eye(n, k=-1 if kind == "L" else 1)


def shift_oracle(img, direction: Direction) -> np.ndarray:
    """Reference implementation: explicit matrix products on a zero-padded square."""
    img = as_image(img)
    height, width = img.shape
    n = max(height, width)
    padded = np.zeros((n, n))
    padded[:height, :width] = img
    pre, post = _OPERATORS[direction.quadrant]
    out = padded
    if pre is not None:
        out = np.linalg.matrix_power(_shift_matrix(n, pre), direction.l) @ out
    if post is not None:
        out = out @ np.linalg.matrix_power(_shift_matrix(n, post), direction.m)
    if max(direction.l, direction.m) >= min(height, width) and not out[:height, :width].any():
        warnings.warn("shift exponent moves the whole image out")
    return out[:height, :width]
