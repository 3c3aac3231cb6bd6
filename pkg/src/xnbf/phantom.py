"""Synthetic two-disc phantom: inner disc, annulus and background.

The default geometry reproduces the classic low-contrast setup: a bright
disc on a dark background with an inner disc whose mean exceeds the
annulus by only 5e-3, around a mean intensity of 0.655.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .imagecore import add_gaussian_noise


@dataclass(frozen=True)
class PhantomSpec:
    size: tuple[int, int] = (256, 256)       # (height, width)
    center: tuple[float, float] = (128.0, 128.0)  # (row, col)
    r_outer: float = 90.0
    r_inner: float = 42.0
    mu_background: float = 0.15
    mu_annulus: float = 0.650
    mu_inner: float = 0.655
    noise_percent: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if not 0 < self.r_inner < self.r_outer:
            raise ValueError(f"need 0 < r_inner < r_outer, got {self.r_inner}, {self.r_outer}")
        if self.r_outer > min(self.size) / 2:
            raise ValueError("outer disc does not fit inside the image")
        if self.noise_percent < 0:
            raise ValueError("noise percent must be >= 0")

    @property
    def noise_sigma(self) -> float:
        # p% noise = sigma of p/100 of the inner-disc mean
        return self.noise_percent / 100.0 * self.mu_inner


def _radius_grid(spec: PhantomSpec) -> np.ndarray:
    height, width = spec.size
    rows = np.arange(height)[:, None] - spec.center[0]
    cols = np.arange(width)[None, :] - spec.center[1]
    return np.hypot(rows, cols)


def make_phantom(spec: PhantomSpec = PhantomSpec()) -> np.ndarray:
    """Piecewise-constant two-disc image (hard edges), plus optional noise."""
    radius = _radius_grid(spec)
    img = np.full(spec.size, spec.mu_background, dtype=np.float64)
    img[radius <= spec.r_outer] = spec.mu_annulus
    img[radius <= spec.r_inner] = spec.mu_inner
    if spec.noise_percent > 0:
        img = add_gaussian_noise(img, spec.noise_sigma, spec.seed)
    return img


def phantom_regions(spec: PhantomSpec = PhantomSpec()):
    """Ground-truth (inner, annulus, background) masks; disjoint, covering."""
    radius = _radius_grid(spec)
    inner = radius <= spec.r_inner
    annulus = (radius <= spec.r_outer) & ~inner
    background = ~(inner | annulus)
    return inner, annulus, background


def with_noise(spec: PhantomSpec, percent: float, seed: int) -> PhantomSpec:
    return replace(spec, noise_percent=percent, seed=seed)


def interior_region_masks(spec: PhantomSpec, margin: float):
    """(inner, annulus) masks eroded by `margin` pixels from both circles.

    Measurement masks for filter evaluation: the band next to a region
    boundary carries the strong edge response (and, near the image rim,
    the zero-padding response), which would swamp region-mean statistics.
    """
    radius = _radius_grid(spec)
    inner = radius <= spec.r_inner - margin
    annulus = (radius >= spec.r_inner + margin) & (radius <= spec.r_outer - margin)
    if not inner.any() or not annulus.any():
        raise ValueError(f"margin {margin} leaves an empty measurement region")
    return inner, annulus


_FIELD_PARSERS = {
    "size": lambda s: tuple(int(v) for v in s.split(",")),
    "center": lambda s: tuple(float(v) for v in s.split(",")),
    "r_outer": float,
    "r_inner": float,
    "mu_background": float,
    "mu_annulus": float,
    "mu_inner": float,
    "noise_percent": float,
    "seed": int,
}


def load_phantom_spec(path) -> PhantomSpec:
    """Read a flat key=value spec file; unset keys keep their defaults."""
    values = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected key=value, got {line!r}")
        key, _, raw = line.partition("=")
        key = key.strip()
        if key not in _FIELD_PARSERS:
            raise ValueError(f"{path}:{lineno}: unknown phantom field {key!r}")
        values[key] = _FIELD_PARSERS[key](raw.strip())
    return PhantomSpec(**values)
