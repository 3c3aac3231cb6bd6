"""Image container, region handling, file I/O, noise injection and profiles.

Images are plain 2D float64 numpy arrays, row-major, indexed (row, col).
Rois are given in (x=col, y=row) order. Intensities are kept in double
precision regardless of file bit depth; integer formats are mapped to
[0, 1] on load by dividing by the format's maximum sample value.
"""

from __future__ import annotations

import re
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image as PilImage

# Mean intensity the noise-percent convention is anchored to:
# "p% noise" means gaussian sigma = (p / 100) * REFERENCE_MEAN.
REFERENCE_MEAN = 0.655

FORMATS = ("pgm", "png", "rawf32")


@dataclass(frozen=True)
class Roi:
    """Rectangular region, top-left corner (x0, y0) = (col, row)."""

    x0: int
    y0: int
    w: int
    h: int

    def __post_init__(self):
        if self.w < 1 or self.h < 1:
            raise ValueError(f"roi extent must be >= 1, got {self.w}x{self.h}")
        if self.x0 < 0 or self.y0 < 0:
            raise ValueError(f"roi origin must be non-negative, got ({self.x0},{self.y0})")

    def check_within(self, img: np.ndarray):
        height, width = img.shape
        if self.x0 + self.w > width or self.y0 + self.h > height:
            raise ValueError(
                f"roi ({self.x0},{self.y0},{self.w},{self.h}) exceeds "
                f"image bounds {width}x{height}"
            )


def as_image(data) -> np.ndarray:
    """Coerce to a validated 2D float64 image array."""
    img = np.asarray(data, dtype=np.float64)
    if img.ndim != 2:
        raise ValueError(f"image must be 2D, got shape {img.shape}")
    if img.size == 0:
        raise ValueError("image must be non-empty")
    if not np.all(np.isfinite(img)):
        raise ValueError("image contains non-finite values")
    return img


def percent_to_sigma(percent: float, reference_mean: float = REFERENCE_MEAN) -> float:
    """Noise sigma for a 'p% noise' level relative to a reference mean."""
    if percent < 0:
        raise ValueError("noise percent must be >= 0")
    return percent / 100.0 * reference_mean


def _infer_format(path) -> str:
    suffix = Path(path).suffix.lower()
    if suffix == ".pgm":
        return "pgm"
    if suffix == ".png":
        return "png"
    return "rawf32"


# ---------------------------------------------------------------------------
# PGM (P2 / P5)

def _read_pgm(path: Path) -> np.ndarray:
    data = path.read_bytes()
    # Header: magic, width, height, maxval -- whitespace separated, with
    # optional '#' comments.
    tokens = []
    pos = 0
    while len(tokens) < 4:
        match = re.match(rb"\s*(#[^\n]*\n|\S+)", data[pos:])
        if match is None:
            raise ValueError(f"malformed PGM header in {path}")
        pos += match.end()
        tok = match.group(1)
        if not tok.startswith(b"#"):
            tokens.append(tok)
    magic = tokens[0]
    if magic not in (b"P2", b"P5"):
        raise ValueError(f"not a PGM file (magic {magic!r}): {path}")
    width, height, maxval = (int(t) for t in tokens[1:4])
    if width < 1 or height < 1 or not 0 < maxval < 65536:
        raise ValueError(f"invalid PGM dimensions/maxval in {path}")
    if magic == b"P5":
        body = data[pos + 1:]  # single whitespace after maxval
        dtype = ">u2" if maxval > 255 else np.uint8
        samples = np.frombuffer(body, dtype=dtype, count=width * height)
        if samples.size != width * height:
            raise ValueError(f"truncated PGM payload in {path}")
    else:
        samples = np.array(data[pos:].split(), dtype=np.float64)
        if samples.size != width * height:
            raise ValueError(f"P2 sample count mismatch in {path}")
    img = samples.astype(np.float64).reshape(height, width) / float(maxval)
    return img


def _write_pgm(samples: np.ndarray, path: Path, maxval: int):
    height, width = samples.shape
    header = f"P5\n{width} {height}\n{maxval}\n".encode()
    if maxval > 255:
        body = samples.astype(">u2").tobytes()
    else:
        body = samples.astype(np.uint8).tobytes()
    path.write_bytes(header + body)


# ---------------------------------------------------------------------------
# rawf32: little-endian float32, row-major, '<name>.dim' sidecar "width height"

def _dim_sidecar(path: Path) -> Path:
    return Path(str(path) + ".dim")


def _read_rawf32(path: Path) -> np.ndarray:
    sidecar = _dim_sidecar(path)
    if not sidecar.exists():
        raise FileNotFoundError(f"missing dimension sidecar {sidecar}")
    parts = sidecar.read_text().split()
    if len(parts) != 2:
        raise ValueError(f"malformed sidecar {sidecar}: expected 'width height'")
    width, height = int(parts[0]), int(parts[1])
    samples = np.fromfile(path, dtype="<f4")
    if samples.size != width * height:
        raise ValueError(
            f"raw payload has {samples.size} samples, sidecar says {width}x{height}"
        )
    return samples.astype(np.float64).reshape(height, width)


def _write_rawf32(img: np.ndarray, path: Path):
    height, width = img.shape
    img.astype("<f4").tofile(path)
    _dim_sidecar(path).write_text(f"{width} {height}\n")


# ---------------------------------------------------------------------------

def load_image(path, fmt: str | None = None) -> np.ndarray:
    """Load a grayscale image as a float64 array.

    Integer formats (pgm, png) are scaled to [0, 1] by the format's
    maximum sample value; rawf32 is read verbatim.
    """
    path = Path(path)
    fmt = fmt or _infer_format(path)
    if fmt not in FORMATS:
        raise ValueError(f"unknown format {fmt!r}, expected one of {FORMATS}")
    if not path.exists():
        raise FileNotFoundError(f"no such image file: {path}")
    if fmt == "pgm":
        return as_image(_read_pgm(path))
    if fmt == "rawf32":
        return as_image(_read_rawf32(path))
    with PilImage.open(path) as pil:
        if pil.mode == "L":
            maxval = 255.0
        elif pil.mode in ("I;16", "I"):
            maxval = 65535.0
        else:
            raise ValueError(f"unsupported PNG mode {pil.mode!r} (grayscale 8/16-bit only)")
        arr = np.asarray(pil, dtype=np.float64)
    return as_image(arr / maxval)


def _quantize(img: np.ndarray, scaling: str, maxval: int) -> np.ndarray:
    if scaling == "clip01":
        scaled = np.clip(img, 0.0, 1.0)
    elif scaling == "minmax":
        lo, hi = img.min(), img.max()
        if hi == lo:
            warnings.warn("constant image under minmax scaling, writing all-zero")
            return np.zeros(img.shape, dtype=np.int64)
        scaled = (img - lo) / (hi - lo)
    else:
        raise ValueError(f"unknown scaling {scaling!r}")
    # round half up
    return np.floor(scaled * maxval + 0.5).astype(np.int64)


def save_image(img, path, fmt: str | None = None, scaling: str = "clip01",
               depth: int = 8):
    """Write an image; integer formats quantize per `scaling` at `depth` bits."""
    img = as_image(img)
    path = Path(path)
    fmt = fmt or _infer_format(path)
    if fmt == "rawf32":
        _write_rawf32(img, path)
        return
    if depth not in (8, 16):
        raise ValueError("depth must be 8 or 16")
    maxval = (1 << depth) - 1
    samples = _quantize(img, scaling, maxval)
    if fmt == "pgm":
        _write_pgm(samples, path, maxval)
    elif fmt == "png":
        if depth == 8:
            pil = PilImage.fromarray(samples.astype(np.uint8))
        else:
            pil = PilImage.fromarray(samples.astype(np.uint16))
        pil.save(path)
    else:
        raise ValueError(f"unknown format {fmt!r}")


def add_gaussian_noise(img, sigma: float, seed: int) -> np.ndarray:
    """Add i.i.d. Gaussian(0, sigma^2) noise; deterministic for a fixed seed."""
    img = as_image(img)
    if sigma < 0:
        raise ValueError("sigma must be >= 0")
    if sigma == 0:
        return img.copy()
    rng = np.random.default_rng(seed)
    return img + rng.normal(0.0, sigma, size=img.shape)


def extract_roi(img, roi: Roi) -> np.ndarray:
    img = as_image(img)
    roi.check_within(img)
    return img[roi.y0:roi.y0 + roi.h, roi.x0:roi.x0 + roi.w].copy()


def line_profile(img, axis: str, index: int, start: int, stop: int) -> np.ndarray:
    """Intensities along one row or column, endpoints inclusive."""
    img = as_image(img)
    height, width = img.shape
    if start > stop:
        raise ValueError(f"profile range inverted: {start} > {stop}")
    if axis == "row":
        if not (0 <= index < height and 0 <= start and stop < width):
            raise ValueError("row profile out of bounds")
        return img[index, start:stop + 1].copy()
    if axis == "col":
        if not (0 <= index < width and 0 <= start and stop < height):
            raise ValueError("col profile out of bounds")
        return img[start:stop + 1, index].copy()
    raise ValueError(f"axis must be 'row' or 'col', got {axis!r}")
