"""Noise-variance and region-contrast estimation, and threshold selection.

The comparison threshold eta is picked inside the bracket whose lower end
is the estimated noise variance within an ROI and whose upper end is the
difference between the mean intensities of the two tissue classes there.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .imagecore import Roi, as_image, extract_roi


class ThresholdBracketError(ValueError):
    """Raised when the (noise, contrast) bracket is empty or inverted."""


@dataclass(frozen=True)
class NoiseEstimate:
    sigma2: float        # estimated noise variance
    gamma: float         # skewness of the pooled retained pixels
    n_blocks_used: int

    @property
    def sigma(self) -> float:
        return float(np.sqrt(self.sigma2))


@dataclass(frozen=True)
class ContrastEstimate:
    c_roi: float
    mu_hi: float
    mu_lo: float


def skewness(samples) -> float:
    """Population sample skewness m3 / m2^1.5; 0 for constant input."""
    x = np.asarray(samples, dtype=np.float64).ravel()
    if x.size < 3:
        raise ValueError("skewness needs at least 3 samples")
    d = x - x.mean()
    m2 = np.mean(d * d)
    if m2 == 0.0:
        return 0.0
    m3 = np.mean(d * d * d)
    return float(m3 / m2 ** 1.5)


def estimate_noise_variance(img, roi: Roi, block_side: int = 8,
                            keep_fraction: float = 0.25) -> NoiseEstimate:
    """Block-based noise variance estimate inside an ROI.

    The ROI is partitioned into non-overlapping block_side^2 blocks; the
    keep_fraction of blocks with smallest |skewness| (most homogeneous)
    are retained, and sigma2 is the median of their variances.
    """
    patch = extract_roi(as_image(img), roi)
    if block_side < 2:
        raise ValueError("block side must be >= 2")
    rows = patch.shape[0] // block_side
    cols = patch.shape[1] // block_side
    if rows * cols < 16:
        raise ValueError(
            f"roi holds only {rows * cols} blocks of side {block_side}, need >= 16"
        )
    blocks = (
        patch[:rows * block_side, :cols * block_side]
        .reshape(rows, block_side, cols, block_side)
        .swapaxes(1, 2)
        .reshape(rows * cols, block_side * block_side)
    )
    variances = blocks.var(axis=1)
    skews = np.array([abs(skewness(b)) for b in blocks])
    n_keep = max(1, int(round(keep_fraction * len(blocks))))
    keep = np.argsort(skews, kind="stable")[:n_keep]
    sigma2 = float(np.median(variances[keep]))
    pooled = blocks[keep].ravel()
    gamma = skewness(pooled)
    return NoiseEstimate(sigma2=sigma2, gamma=gamma, n_blocks_used=n_keep)


def estimate_croi(img, roi: Roi, bins: int = 256) -> ContrastEstimate:
    """Two-class contrast inside an ROI.

    The ROI histogram is split at the threshold maximizing between-class
    variance (exhaustive search over the bins); c_roi is the difference of
    the two class means.
    """
    pixels = extract_roi(as_image(img), roi).ravel()
    lo, hi = pixels.min(), pixels.max()
    if lo == hi:
        raise ValueError("constant roi: no two-class split possible")
    hist, edges = np.histogram(pixels, bins=bins, range=(lo, hi))
    centers = 0.5 * (edges[:-1] + edges[1:])
    weight = hist.astype(np.float64)
    total = weight.sum()
    cum_w = np.cumsum(weight)
    cum_m = np.cumsum(weight * centers)
    mean_all = cum_m[-1] / total

    best_k, best_score = None, -1.0
    for k in range(bins - 1):  # split after bin k
        w0 = cum_w[k]
        w1 = total - w0
        if w0 == 0 or w1 == 0:
            continue
        mu0 = cum_m[k] / w0
        mu1 = (cum_m[-1] - cum_m[k]) / w1
        score = w0 * w1 * (mu0 - mu1) ** 2
        if score > best_score:
            best_k, best_score = k, score
    if best_k is None:
        raise ValueError("degenerate roi histogram: no split found")

    threshold = edges[best_k + 1]
    low_class = pixels[pixels <= threshold]
    high_class = pixels[pixels > threshold]
    mu_lo = float(low_class.mean())
    mu_hi = float(high_class.mean())
    return ContrastEstimate(c_roi=mu_hi - mu_lo, mu_hi=mu_hi, mu_lo=mu_lo)


def select_threshold(noise: NoiseEstimate, contrast: ContrastEstimate,
                     policy: str = "midpoint", alpha: float | None = None,
                     lower: str = "variance") -> float:
    """Pick eta inside the (noise, c_roi) bracket.

    `lower` selects the bracket's lower endpoint: "variance" uses sigma2
    literally (the default), "stddev" uses sqrt(sigma2).
    """
    if lower == "variance":
        low = noise.sigma2
    elif lower == "stddev":
        low = noise.sigma
    else:
        raise ValueError(f"unknown lower endpoint {lower!r}")
    high = contrast.c_roi
    if low >= high:
        raise ThresholdBracketError(
            f"threshold bracket inverted (noise {low:.6g} >= contrast {high:.6g}); "
            "the image is too noisy for direct filtering -- enable NLM pre-filtering"
        )
    if policy == "midpoint":
        return 0.5 * (low + high)
    if policy == "fraction":
        if alpha is None or not 0.0 < alpha < 1.0:
            raise ValueError("fraction policy needs alpha strictly inside (0, 1)")
        return low + alpha * (high - low)
    raise ValueError(f"unknown policy {policy!r}")
