"""Batch command-line front end.

Exit codes: 0 success, 2 invalid configuration, 3 I/O failure,
4 estimation bracket failure (noise too high without pre-filtering).
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .baselines import (
    DiffusionConfig,
    NlmConfig,
    anisotropic_diffuse,
    nlm_filter,
    prefilter_pipeline,
)
from .bwfilter import FilterConfig, apply_filter, direction_kspace, weight_image, zero_border
from .estimation import (
    ThresholdBracketError,
    estimate_croi,
    estimate_noise_variance,
    select_threshold,
)
from .imagecore import Roi, load_image, save_image
from .metrics import SWEEP_CSV_HEADER, cnr_sweep, sweep_csv
from .neighborhood import direction_count, enumerate_directions, neighborhood_mask, Lattice
from .phantom import PhantomSpec, load_phantom_spec, make_phantom, with_noise

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_IO = 3
EXIT_BRACKET = 4


def _parse_roi(text: str) -> Roi:
    parts = text.split(",")
    if len(parts) != 4:
        raise argparse.ArgumentTypeError("roi must be x0,y0,w,h")
    return Roi(*(int(p) for p in parts))


def _parse_range(text: str) -> list[float]:
    """'start:stop:step' (inclusive end) or a comma list of values."""
    if ":" in text:
        start, stop, step = (float(v) for v in text.split(":"))
        if step <= 0 or stop < start:
            raise argparse.ArgumentTypeError(f"bad range {text!r}")
        values = []
        v = start
        while v <= stop + 1e-12:
            values.append(round(v, 12))
            v += step
        return values
    return [float(v) for v in text.split(",")]


def _load(args) -> np.ndarray:
    return load_image(args.input, getattr(args, "format", None))


def _save(img, path, args, scaling="clip01"):
    save_image(img, path, getattr(args, "format", None), scaling=scaling)


def _write_report(path, lines):
    if path:
        Path(path).write_text("\n".join(lines) + "\n")
    for line in lines:
        print(line)


# ---------------------------------------------------------------------------
# subcommand bodies

def cmd_phantom(args):
    if args.spec:
        spec = load_phantom_spec(args.spec)
        spec = with_noise(spec, args.noise if args.noise is not None else spec.noise_percent,
                          args.seed)
    else:
        spec = PhantomSpec(noise_percent=args.noise or 0.0, seed=args.seed)
    _save(make_phantom(spec), args.out, args)
    return EXIT_OK


def cmd_estimate(args):
    img = _load(args)
    noise = estimate_noise_variance(img, args.roi, block_side=args.block)
    contrast = estimate_croi(img, args.roi)
    try:
        eta = select_threshold(noise, contrast)
        eta_text = f"{eta:.8g}"
    except ThresholdBracketError:
        eta_text = "nan"
    print("sigma2,gamma,c_roi,eta_midpoint")
    print(f"{noise.sigma2:.8g},{noise.gamma:.8g},{contrast.c_roi:.8g},{eta_text}")
    return EXIT_OK


def _resolve_eta(img, args):
    if args.eta is not None:
        return args.eta
    if not args.eta_auto:
        raise ValueError("either --eta or --eta-auto is required")
    if args.roi is None:
        raise ValueError("--eta-auto needs --roi")
    noise = estimate_noise_variance(img, args.roi, block_side=args.block)
    contrast = estimate_croi(img, args.roi)
    return select_threshold(noise, contrast)


def cmd_filter(args):
    img = _load(args)
    eta = _resolve_eta(img, args)
    cfg = FilterConfig(w=args.lattice, eta=eta)
    bwi = weight_image(img, cfg)
    if args.mask_border:
        bwi = zero_border(bwi, cfg.w)
    _save(img * (1 + bwi), args.out, args)
    if args.emit_bwi:
        _save(bwi.astype(float), args.emit_bwi, args, scaling="minmax")
    if args.emit_kspace:
        out_dir = Path(args.emit_kspace)
        out_dir.mkdir(parents=True, exist_ok=True)
        for i, direction in enumerate(enumerate_directions(cfg.w)):
            mag = direction_kspace(img, direction, eta)
            name = f"kspace_{i:03d}_{direction.quadrant.value}_l{direction.l}_m{direction.m}.png"
            save_image(mag, out_dir / name, "png", scaling="minmax")
    return EXIT_OK


def cmd_diffuse(args):
    img = _load(args)
    cfg = DiffusionConfig(kappa=args.kappa, lam=args.lam,
                          iterations=args.iters, gfun=args.g)
    _save(anisotropic_diffuse(img, cfg), args.out, args)
    return EXIT_OK


def cmd_nlm(args):
    img = _load(args)
    cfg = NlmConfig(t=args.t, f=args.f, h=args.h)
    _save(nlm_filter(img, cfg), args.out, args)
    return EXIT_OK


def cmd_prefilter(args):
    img = _load(args)
    out, report = prefilter_pipeline(img, args.roi)
    _save(out, args.out, args)
    print(f"action={report['action']} sigma={report['sigma']:.8g} "
          f"roi_mean={report['roi_mean']:.8g}")
    return EXIT_OK


def cmd_pipeline(args):
    t_start = time.perf_counter()
    if args.phantom:
        spec = PhantomSpec(noise_percent=args.noise or 0.0, seed=args.seed)
        img = make_phantom(spec)
    else:
        if not args.input:
            raise ValueError("pipeline needs --in or --phantom")
        img = _load(args)
    roi = args.roi or Roi(68, 68, 120, 120)

    noise = estimate_noise_variance(img, roi, block_side=args.block)
    prefiltered = False
    if args.prefilter:
        img, pre_report = prefilter_pipeline(img, roi)
        prefiltered = pre_report["action"] == "prefiltered"
        if prefiltered:
            noise = estimate_noise_variance(img, roi, block_side=args.block)
    contrast = estimate_croi(img, roi)
    eta = select_threshold(noise, contrast)

    cfg = FilterConfig(w=args.lattice, eta=eta)
    t_filter = time.perf_counter()
    bwi = weight_image(img, cfg)
    out = img * (1 + bwi)
    t_done = time.perf_counter()

    if args.out:
        _save(out, args.out, args)
    if args.emit_bwi:
        _save(bwi.astype(float), args.emit_bwi, args, scaling="minmax")
    _write_report(args.report, [
        f"xnbf {__version__} pipeline",
        f"lattice_w={cfg.w}",
        f"n_directions={direction_count(cfg.w)}",
        f"sigma2={noise.sigma2:.8g}",
        f"c_roi={contrast.c_roi:.8g}",
        f"eta={eta:.8g}",
        f"prefiltered={prefiltered}",
        f"roi={roi.x0},{roi.y0},{roi.w},{roi.h}",
        f"block_side={args.block}",
        f"seed={args.seed}",
        f"time_estimate_s={t_filter - t_start:.3f}",
        f"time_filter_s={t_done - t_filter:.3f}",
    ])
    return EXIT_OK


def cmd_sweep(args):
    values = args.range
    if not values:
        raise ValueError("empty sweep range")
    if args.phantom:
        base = PhantomSpec(noise_percent=args.noise or 0.0, seed=args.seed)
        img = make_phantom(base)
    else:
        if not args.input:
            raise ValueError("sweep needs --in or --phantom")
        img = _load(args)
    roi = args.roi or Roi(68, 68, 120, 120)
    prefix = args.prefix
    csv_lines = [f"{args.kind},eta,lattice_w,mean_output"]
    for value in values:
        if args.kind == "lattice":
            w = int(value)
            eta = _sweep_eta(img, roi, args)
            out = apply_filter(img, FilterConfig(w=w, eta=eta))
        elif args.kind == "eta":
            w, eta = args.lattice, float(value)
            out = apply_filter(img, FilterConfig(w=w, eta=eta))
        elif args.kind == "kappa":
            w, eta = 0, float("nan")
            out = anisotropic_diffuse(img, DiffusionConfig(kappa=float(value)))
        elif args.kind == "noise":
            w = args.lattice
            spec = PhantomSpec(noise_percent=float(value), seed=args.seed)
            noisy = make_phantom(spec)
            eta = _sweep_eta(noisy, roi, args)
            out = apply_filter(noisy, FilterConfig(w=w, eta=eta))
        else:
            raise ValueError(f"unknown sweep kind {args.kind!r}")
        path = f"{prefix}_{args.kind}={value:g}.{args.ext}"
        save_image(out, path, scaling="minmax")
        csv_lines.append(f"{value:g},{eta:.8g},{w},{out.mean():.8g}")
    Path(f"{prefix}_{args.kind}.csv").write_text("\n".join(csv_lines) + "\n")
    return EXIT_OK


def _sweep_eta(img, roi, args):
    if args.eta is not None:
        return args.eta
    noise = estimate_noise_variance(img, roi, block_side=args.block)
    contrast = estimate_croi(img, roi)
    return select_threshold(noise, contrast)


def cmd_cnr_sweep(args):
    rows = cnr_sweep(args.sigmas, seed=args.seed, lattice=args.lattice,
                     repeats=args.repeats)
    text = sweep_csv(rows)
    if args.out:
        Path(args.out).write_text(text)
    print(SWEEP_CSV_HEADER if args.out else text, end="\n" if args.out else "")
    return EXIT_OK


def cmd_directions(args):
    lat = Lattice(args.lattice)
    mask = neighborhood_mask(lat.n)
    dirs = enumerate_directions(args.lattice)
    print(f"lattice w={lat.w} n={lat.n} N_q={int(mask.sum())} N_d={len(dirs)}")
    print("mask (rows l=n..1, cols m=1..n):")
    for row in mask[::-1]:
        print(" ".join(str(int(v)) for v in row))
    lines = ["index,quadrant,l,m"]
    for i, d in enumerate(dirs):
        lines.append(f"{i},{d.quadrant.value},{d.l},{d.m}")
    if args.csv:
        Path(args.csv).write_text("\n".join(lines) + "\n")
    else:
        print("\n".join(lines))
    return EXIT_OK


def cmd_kspace(args):
    img = _load(args)
    eta = args.eta if args.eta is not None else 0.0
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    for i, direction in enumerate(enumerate_directions(args.lattice)):
        mag = direction_kspace(img, direction, eta, map_only=args.map_only)
        name = f"kspace_{i:03d}_{direction.quadrant.value}_l{direction.l}_m{direction.m}.png"
        save_image(mag, out_dir / name, "png", scaling="minmax")
    print(f"wrote {len(enumerate_directions(args.lattice))} spectra to {out_dir}")
    return EXIT_OK


# ---------------------------------------------------------------------------

def _add_io(p, inp=True, out=True):
    if inp:
        p.add_argument("--in", dest="input", help="input image path")
    if out:
        p.add_argument("--out", help="output path")
    p.add_argument("--format", choices=("pgm", "png", "rawf32"), default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="xnbf",
                                     description="extended-neighborhood binary-weighted filtering")
    parser.add_argument("--version", action="version", version=f"xnbf {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("phantom", help="generate the two-disc phantom")
    _add_io(p, inp=False)
    p.add_argument("--noise", type=float, default=0.0, help="noise percent")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--spec", help="key=value phantom spec file")
    p.set_defaults(func=cmd_phantom)

    p = sub.add_parser("estimate", help="noise variance, contrast and threshold")
    _add_io(p, out=False)
    p.add_argument("--roi", type=_parse_roi, required=True)
    p.add_argument("--block", type=int, default=8)
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("filter", help="binary-weighted enhancement filter")
    _add_io(p)
    p.add_argument("--lattice", type=int, default=11)
    p.add_argument("--eta", type=float, default=None)
    p.add_argument("--eta-auto", action="store_true")
    p.add_argument("--roi", type=_parse_roi, default=None)
    p.add_argument("--block", type=int, default=8)
    p.add_argument("--emit-bwi", help="write the weight image here")
    p.add_argument("--emit-kspace", help="write per-direction spectra to this directory")
    p.add_argument("--mask-border", action="store_true",
                   help="zero the (w-1)/2 border band of the weight image")
    p.set_defaults(func=cmd_filter)

    p = sub.add_parser("diffuse", help="anisotropic diffusion baseline")
    _add_io(p)
    p.add_argument("--kappa", type=float, required=True)
    p.add_argument("--lambda", dest="lam", type=float, default=0.2)
    p.add_argument("--iters", type=int, default=50)
    p.add_argument("--g", choices=("exponential", "rational"), default="exponential")
    p.set_defaults(func=cmd_diffuse)

    p = sub.add_parser("nlm", help="non-local means filter")
    _add_io(p)
    p.add_argument("--t", type=int, default=5)
    p.add_argument("--f", type=int, default=1)
    p.add_argument("--h", type=float, default=10.0 / 255.0)
    p.set_defaults(func=cmd_nlm)

    p = sub.add_parser("prefilter", help="noise-gated NLM pre-filtering")
    _add_io(p)
    p.add_argument("--roi", type=_parse_roi, required=True)
    p.set_defaults(func=cmd_prefilter)

    p = sub.add_parser("pipeline", help="estimate -> (prefilter) -> filter -> report")
    _add_io(p)
    p.add_argument("--phantom", action="store_true", help="use the built-in phantom as input")
    p.add_argument("--noise", type=float, default=None, help="phantom noise percent")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--roi", type=_parse_roi, default=None)
    p.add_argument("--block", type=int, default=8)
    p.add_argument("--lattice", type=int, default=11)
    p.add_argument("--prefilter", action="store_true")
    p.add_argument("--emit-bwi")
    p.add_argument("--report", help="write the run report here")
    p.set_defaults(func=cmd_pipeline)

    p = sub.add_parser("sweep", help="parameter sweeps (lattice, eta, kappa, noise)")
    _add_io(p)
    p.add_argument("kind", choices=("lattice", "eta", "kappa", "noise"))
    p.add_argument("--range", type=_parse_range, required=True,
                   help="start:stop:step or comma list")
    p.add_argument("--phantom", action="store_true")
    p.add_argument("--noise", type=float, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--roi", type=_parse_roi, default=None)
    p.add_argument("--block", type=int, default=8)
    p.add_argument("--lattice", type=int, default=11)
    p.add_argument("--eta", type=float, default=None)
    p.add_argument("--prefix", default="sweep")
    p.add_argument("--ext", choices=("pgm", "png"), default="png")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("cnr-sweep", help="CNR vs noise level comparison table")
    p.add_argument("--sigmas", type=_parse_range, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--lattice", type=int, default=11)
    p.add_argument("--repeats", type=int, default=1)
    p.add_argument("--out", help="CSV output path")
    p.set_defaults(func=cmd_cnr_sweep)

    p = sub.add_parser("directions", help="print the mask and direction list")
    p.add_argument("--lattice", type=int, required=True)
    p.add_argument("--csv", help="write the direction list as CSV here")
    p.set_defaults(func=cmd_directions)

    p = sub.add_parser("kspace", help="per-direction frequency-domain images")
    _add_io(p, out=False)
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--lattice", type=int, default=3)
    p.add_argument("--eta", type=float, default=None)
    p.add_argument("--map-only", action="store_true",
                   help="transform the binary map instead of the masked image")
    p.set_defaults(func=cmd_kspace)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on bad usage already; normalize
        return EXIT_CONFIG if exc.code not in (0,) else 0
    try:
        return args.func(args)
    except ThresholdBracketError as exc:
        print(f"error: {exc}", file=sys.stderr)
        print("hint: rerun with --prefilter to denoise first", file=sys.stderr)
        return EXIT_BRACKET
    except (FileNotFoundError, OSError) as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ValueError, argparse.ArgumentTypeError) as exc:
        print(f"invalid configuration: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
