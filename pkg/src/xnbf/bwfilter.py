"""Binary-weighted enhancement filter.

Per direction k, a binary map fires where the center pixel exceeds its
direction-k neighbor by more than the threshold eta (strict comparison).
The weight image BWI is the sum of all maps, and the filtered output is
O = I * (1 + BWI), with no clipping or renormalization.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .imagecore import as_image
from .neighborhood import Direction, Lattice, enumerate_directions
from .shiftops import shift_image


@dataclass(frozen=True)
class FilterConfig:
    w: int
    eta: float

    def __post_init__(self):
        Lattice(self.w)  # validates oddness / minimum size
        if not np.isfinite(self.eta):
            raise ValueError("eta must be finite")


def binary_map(img, direction: Direction, eta: float) -> np.ndarray:
    """0/1 comparison map: 1 where img - shifted(img) > eta (strict)."""
    img = as_image(img)
    return ((img - shift_image(img, direction)) > eta).astype(np.uint8)


def weight_image(img, cfg: FilterConfig) -> np.ndarray:
    """Elementwise sum of the binary maps over all lattice directions."""
    img = as_image(img)
    bwi = np.zeros(img.shape, dtype=np.int64)
    for direction in enumerate_directions(cfg.w):
        bwi += binary_map(img, direction, cfg.eta)
    return bwi


def apply_filter(img, cfg: FilterConfig) -> np.ndarray:
    """Enhanced output O = I * (1 + BWI), raw values (no clipping)."""
    img = as_image(img)
    return img * (1 + weight_image(img, cfg))


def zero_border(bwi: np.ndarray, w: int) -> np.ndarray:
    """Copy of a weight image with the (w-1)/2 border band zeroed (display aid)."""
    band = (w - 1) // 2
    out = bwi.copy()
    out[:band, :] = 0
    out[-band:, :] = 0
    out[:, :band] = 0
    out[:, -band:] = 0
    return out


def direction_kspace(sample, direction: Direction, eta: float,
                     map_only: bool = False) -> np.ndarray:
    """Log-scaled, DC-centered DFT magnitude of one directional component.

    The component is sample * B_k (or B_k alone with map_only). Intended
    for visualization; the transform is the unnormalized forward DFT with
    magnitude log(1 + |.|).
    """
    sample = as_image(sample)
    component = binary_map(sample, direction, eta).astype(np.float64)
    if not map_only:
        component = sample * component
    spectrum = np.fft.fftshift(np.fft.fft2(component))
    return np.log1p(np.abs(spectrum))
