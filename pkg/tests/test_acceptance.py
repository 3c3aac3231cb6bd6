"""End-to-end acceptance checks.

Each test prints a single "CRITERION <n>: PASS/FAIL" line (bypassing
capture) so a full run yields one status line per numbered check.
"""

import time

import numpy as np
import pytest

from xnbf import (
    DiffusionConfig,
    FilterConfig,
    NlmConfig,
    PhantomSpec,
    anisotropic_diffuse,
    apply_filter,
    cnr,
    cnr_sweep,
    enumerate_directions,
    estimate_croi,
    estimate_noise_variance,
    interior_region_masks,
    make_phantom,
    neighborhood_mask,
    nlm_filter,
    phantom_regions,
    quadrant_count,
    select_threshold,
    shift_image,
    shift_oracle,
    skewness,
    weight_image,
    zero_border,
)
from xnbf.metrics import DEFAULT_ESTIMATION_ROI

from conftest import MATRIX_A
from test_neighborhood import PRINTED_MASKS
from test_shiftops import TABLE2


def report(capsys, label, ok, detail=""):
    with capsys.disabled():
        print(f"\nCRITERION {label}: {'PASS' if ok else 'FAIL'}  {detail}")


# ---------------------------------------------------------------------------
# 1. published mask tables and direction counts, exact


def test_01_mask_tables_and_counts(capsys):
    t0 = time.perf_counter()
    masks_ok = all(
        neighborhood_mask(n)[::-1].tolist() == PRINTED_MASKS[n]
        for n in (1, 2, 3, 4, 5)
    )
    quad_ok = [quadrant_count(neighborhood_mask(n)) for n in (1, 2, 3, 4, 5)] == [
        1, 3, 7, 11, 19]
    dirs_ok = [len(enumerate_directions(w)) for w in (3, 5, 7, 9, 11)] == [
        8, 16, 32, 48, 80]
    elapsed = time.perf_counter() - t0
    ok = masks_ok and quad_ok and dirs_ok and elapsed < 1.0
    report(capsys, 1, ok, f"masks/counts exact, {elapsed:.3f}s")
    assert masks_ok and quad_ok and dirs_ok
    assert elapsed < 1.0


# ---------------------------------------------------------------------------
# 2. published 5x5 shift products, bit exact for both implementations


def test_02_shift_products_exact(capsys):
    ok = True
    for direction, expected in TABLE2.items():
        want = np.array(expected, dtype=float)
        ok &= np.array_equal(shift_image(MATRIX_A, direction), want)
        ok &= np.array_equal(shift_oracle(MATRIX_A, direction), want)
    report(capsys, 2, ok, "8 printed products, both implementations")
    assert ok


# ---------------------------------------------------------------------------
# 3. fast shift vs matrix-power oracle on 100 random images


def test_03_oracle_equivalence(capsys):
    rng = np.random.default_rng(2024)
    dirs = [d for w in (3, 5, 7, 9, 11) for d in enumerate_directions(w)]
    ok = True
    for _ in range(100):
        img = rng.random((8, 8))
        for d in dirs:
            if not np.array_equal(shift_image(img, d), shift_oracle(img, d)):
                ok = False
    report(capsys, 3, ok, f"100 images x {len(dirs)} directions")
    assert ok


# ---------------------------------------------------------------------------
# 4. noise-variance estimator accuracy across seeds

INJECTED_VARIANCE = 4.2903e-5  # (0.00655)^2 at the 1% level


def test_04_noise_estimation(capsys):
    worst = 0.0
    slowest = 0.0
    for seed in range(10):
        img = make_phantom(PhantomSpec(noise_percent=1.0, seed=seed))
        t0 = time.perf_counter()
        est = estimate_noise_variance(img, DEFAULT_ESTIMATION_ROI)
        slowest = max(slowest, time.perf_counter() - t0)
        worst = max(worst, abs(est.sigma2 / INJECTED_VARIANCE - 1.0))
    ok = worst < 0.25 and slowest < 1.0
    report(capsys, 4, ok,
           f"max error {100 * worst:.1f}% (limit 25%), max {slowest:.3f}s")
    assert worst < 0.25
    assert slowest < 1.0


# ---------------------------------------------------------------------------
# 5. threshold-regime behavior on the 1%-noise phantom, w = 11

W_REGIME = 11


@pytest.fixture(scope="module")
def regime_setup(phantom_1pct):
    noise = estimate_noise_variance(phantom_1pct, DEFAULT_ESTIMATION_ROI)
    contrast = estimate_croi(phantom_1pct, DEFAULT_ESTIMATION_ROI)
    return phantom_1pct, noise, contrast


def test_05i_low_threshold_spurious_weights(capsys, regime_setup):
    img, noise, _ = regime_setup
    bwi = weight_image(img, FilterConfig(W_REGIME, 0.5 * noise.sigma2))
    annulus = interior_region_masks(PhantomSpec(), margin=W_REGIME)[1]
    frac = float((bwi[annulus] > 0).mean())
    ok = frac > 0.01
    report(capsys, "5i", ok,
           f"{100 * frac:.1f}% of deep-annulus pixels weighted (need > 1%)")
    assert frac > 0.01


def test_05ii_midpoint_threshold_enhances(capsys, regime_setup):
    img, noise, contrast = regime_setup
    eta = select_threshold(noise, contrast)
    filtered = apply_filter(img, FilterConfig(W_REGIME, eta))
    spec = PhantomSpec()
    inner = phantom_regions(spec)[0]
    annulus = interior_region_masks(spec, margin=W_REGIME)[1]
    sigma = spec.mu_inner * 0.01
    before = cnr(img, inner, annulus, sigma).cnr
    after = cnr(filtered, inner, annulus, sigma).cnr
    ratio = after / before
    ok = ratio >= 5.0
    report(capsys, "5ii", ok, f"CNR gain {ratio:.1f}x (need >= 5x)")
    assert ratio >= 5.0


def test_05iii_high_threshold_near_identity(capsys, regime_setup):
    img, _, contrast = regime_setup
    eta = 2.0 * contrast.c_roi
    cfg = FilterConfig(W_REGIME, eta)
    bwi = weight_image(img, cfg)
    out = img * (1 + bwi)
    interior = np.zeros(img.shape, dtype=bool)
    band = (W_REGIME - 1) // 2
    interior[band:-band, band:-band] = True
    mean_bwi = float(bwi[interior].mean())
    mean_dev = float((np.abs(out - img) / np.abs(img))[interior].mean())
    ok = mean_bwi < 0.05 and mean_dev < 0.01
    report(capsys, "5iii", ok,
           f"mean weight {mean_bwi:.3f} (need < 0.05), "
           f"mean relative deviation {mean_dev:.3f} (need < 0.01)")
    assert ok, (
        f"near-identity tolerance not reachable on this input: mean weight "
        f"{mean_bwi:.4f} >= 0.05 and mean relative deviation {mean_dev:.4f} "
        f">= 0.01. With eta = 2 * measured contrast = {eta:.4f} and noise "
        f"sigma = 0.00655, a pairwise difference of two noisy pixels is "
        f"Gaussian with scale sigma * sqrt(2), so in homogeneous areas each "
        f"of the 80 directional comparisons still fires with probability "
        f"~Phi(-{eta / (0.00655 * np.sqrt(2)):.2f}) ~= 8e-3, putting a floor "
        f"of ~0.65 under the mean weight before any boundary response (the "
        f"disc edges, whose 0.5 step always exceeds eta, raise the measured "
        f"value further). Suppressing the noise-driven weights to 0.05 would "
        f"need eta >~ 4.5 * sigma * sqrt(2) ~= 0.042, about twice the value "
        f"exercised here, and no eta silences the edge bands. The "
        f"implementation is the plain strict-threshold comparison; the "
        f"bound itself is infeasible."
    )


# ---------------------------------------------------------------------------
# 6. lattice-size behavior on a small-lesion phantom

LESION_SPEC = PhantomSpec(size=(128, 128), center=(64.0, 64.0),
                          r_outer=45.0, r_inner=7.0)
LESION_ETA = 0.0025  # half the lesion/annulus contrast


def _lesion_radius():
    rows = np.arange(128)[:, None] - 64.0
    cols = np.arange(128)[None, :] - 64.0
    return np.hypot(rows, cols)


def test_06_lattice_size_behavior(capsys):
    img = make_phantom(LESION_SPEC)
    radius = _lesion_radius()

    # w = 3: responds only in a thin band at the lesion boundary
    bwi3 = zero_border(weight_image(img, FilterConfig(3, LESION_ETA)), 3)
    inside_outer = radius <= LESION_SPEC.r_outer - 3  # ignore the outer edge
    hits = (bwi3 > 0) & inside_outer
    near_edge = np.abs(radius - LESION_SPEC.r_inner) <= 2.0
    band_frac = float((hits & near_edge).sum() / hits.sum())

    # w = 15: weights cover the whole lesion
    bwi15 = zero_border(weight_image(img, FilterConfig(15, LESION_ETA)), 15)
    lesion = radius <= LESION_SPEC.r_inner
    fill_frac = float((bwi15[lesion] > 0).mean())

    ok = band_frac >= 0.80 and fill_frac >= 0.90
    report(capsys, 6, ok,
           f"w=3 edge-band fraction {100 * band_frac:.0f}% (need >= 80%), "
           f"w=15 lesion fill {100 * fill_frac:.0f}% (need >= 90%)")
    assert band_frac >= 0.80
    assert fill_frac >= 0.90


# ---------------------------------------------------------------------------
# 7. CNR vs noise level: decreasing trend, beats diffusion at low noise

SWEEP_SIGMAS = [0.005 * k for k in range(1, 11)]


def test_07_cnr_trend(capsys):
    t0 = time.perf_counter()
    rows = cnr_sweep(SWEEP_SIGMAS, seed=999, lattice=11, repeats=4)
    elapsed = time.perf_counter() - t0
    filtered = [row["cnr_filtered"] for row in rows]
    trend_ok = all(b <= 1.1 * a for a, b in zip(filtered, filtered[1:]))
    beats = all(row["cnr_filtered"] >= row["cnr_diffusion"]
                for row in rows if row["sigma"] < 0.03)
    ok = trend_ok and beats and elapsed < 60.0
    report(capsys, 7, ok,
           f"trend non-increasing (10% slack): {trend_ok}, beats diffusion "
           f"below sigma 0.03: {beats}, {elapsed:.1f}s (limit 60s)")
    assert trend_ok, f"filtered CNR sequence {filtered}"
    assert beats
    assert elapsed < 60.0


# ---------------------------------------------------------------------------
# 8. invariant suite, exact assertions


def test_08_invariants(capsys):
    rng = np.random.default_rng(88)
    img = rng.random((24, 24))
    checks = {}

    # scale equivariance with an exactly representable factor
    cfg = FilterConfig(5, 0.03)
    checks["scale"] = np.array_equal(
        apply_filter(8.0 * img, FilterConfig(5, 8.0 * 0.03)),
        8.0 * apply_filter(img, cfg))

    # larger threshold never adds weight anywhere
    lo = weight_image(img, FilterConfig(5, 0.01))
    hi = weight_image(img, FilterConfig(5, 0.05))
    checks["eta_monotone"] = bool((hi <= lo).all())

    # diffusion conserves the mean per iteration and obeys the max principle
    dcfg = DiffusionConfig(kappa=0.3, iterations=1)
    step = img.copy()
    mean_ok, range_ok = True, True
    for _ in range(20):
        nxt = anisotropic_diffuse(step, dcfg)
        mean_ok &= abs(nxt.mean() / step.mean() - 1.0) < 1e-10
        range_ok &= img.min() <= nxt.min() and nxt.max() <= img.max()
        step = nxt
    checks["diffusion_mean"] = mean_ok
    checks["diffusion_range"] = range_ok

    # NLM output is a convex combination of window values
    smooth = nlm_filter(img, NlmConfig(t=3, f=1, h=0.2))
    checks["nlm_convex"] = bool(
        (smooth >= img.min()).all() and (smooth <= img.max()).all())

    # skewness unchanged by translation (exactly representable samples)
    x = np.array([0.0, 1.0, 3.0, 8.0])
    checks["skew_shift"] = skewness(x) == skewness(x + 5.0)

    # accumulation order of the directional maps is irrelevant
    dirs = enumerate_directions(5)
    perm = rng.permutation(len(dirs))
    acc = np.zeros(img.shape, dtype=np.int64)
    for idx in perm:
        d = dirs[idx]
        acc += ((img - shift_image(img, d)) > 0.03).astype(np.int64)
    checks["permutation"] = np.array_equal(acc, weight_image(img, cfg))

    ok = all(checks.values())
    failed = [name for name, good in checks.items() if not good]
    report(capsys, 8, ok, "all exact" if ok else f"failed: {failed}")
    assert ok, failed


# ---------------------------------------------------------------------------
# 9. diffusion smoothing-constant regimes at 4% and 7% noise

OUTER_BAND = 3.0     # half-width of the contrast band at the outer circle
HOMOG_MARGIN = 10    # erosion for the homogeneous annulus sample


def _band_contrast(img, radius, r_outer):
    inside = (radius >= r_outer - OUTER_BAND) & (radius <= r_outer)
    outside = (radius > r_outer) & (radius <= r_outer + OUTER_BAND)
    return float(img[inside].mean() - img[outside].mean())


def test_09_diffusion_kappa_regimes(capsys):
    spec = PhantomSpec()
    rows = np.arange(256)[:, None] - 128.0
    cols = np.arange(256)[None, :] - 128.0
    radius = np.hypot(rows, cols)
    clean = make_phantom(spec)
    clean_contrast = _band_contrast(clean, radius, spec.r_outer)
    homog = interior_region_masks(spec, margin=HOMOG_MARGIN)[1]

    ok = True
    details = []
    for percent in (4.0, 7.0):
        noisy_spec = PhantomSpec(noise_percent=percent, seed=5)
        sigma = noisy_spec.noise_sigma
        img = make_phantom(noisy_spec)
        results = {}
        for name, factor in (("sub", 0.25), ("mid", 3.0), ("supra", 10.0)):
            out = anisotropic_diffuse(img, DiffusionConfig(kappa=factor * sigma))
            residual = float(np.var(out[homog] - clean[homog])) / sigma ** 2
            contrast = _band_contrast(out, radius, spec.r_outer) / clean_contrast
            results[name] = (residual, contrast)
        sub_ok = results["sub"][0] > 0.5          # noise survives
        mid_ok = results["mid"][0] < 0.5 and results["mid"][1] > 0.5
        supra_ok = results["supra"][1] < 0.5      # edge washed out
        ok &= sub_ok and mid_ok and supra_ok
        details.append(
            f"{percent:g}%: residual sub {results['sub'][0]:.2f} mid "
            f"{results['mid'][0]:.3f}, contrast mid {results['mid'][1]:.2f} "
            f"supra {results['supra'][1]:.2f}")
    report(capsys, 9, ok, "; ".join(details))
    assert ok, details


# ---------------------------------------------------------------------------
# 10. single-threaded speed of the largest standard lattice


def test_10_performance(capsys):
    assert len(enumerate_directions(15)) == 144  # 4 * (35 + 1)
    rng = np.random.default_rng(0)
    img = rng.random((256, 256))
    t0 = time.perf_counter()
    apply_filter(img, FilterConfig(15, 0.1))
    elapsed = time.perf_counter() - t0
    ok = elapsed < 2.0
    report(capsys, 10, ok, f"256x256, w=15: {elapsed:.2f}s (limit 2s)")
    assert elapsed < 2.0
