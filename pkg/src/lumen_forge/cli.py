"""Command-line interface.

Subcommands expose the pipeline (enhance, dehaze), the standalone filter,
the synthetic degradation, and the metrics/evaluation harness.  Flag values
override config-file values, which override the built-in defaults.  Exit
codes: 0 success, 1 usage error, 2 IO error.
"""

from __future__ import annotations

import argparse
import os
import sys

from .config import PipelineConfig, parse_config_text
from .fusion import dehaze, enhance
from .gdwgif import gdwgif
from .harness import DegradeSpec, degrade, evaluate_directory, psnr, ssim
from .image_core import ColorImage, load_image, save_image

__all__ = ["main", "run_cli"]

_DEFAULTS = PipelineConfig()


class _UsageError(Exception):
    pass


def _add_common(parser: argparse.ArgumentParser) -> None:
    g = parser.add_argument_group("pipeline options")
    g.add_argument("--lambda", dest="lam", type=float, default=None,
                   help=f"filter regularization strength (default: {_DEFAULTS.lam})")
    g.add_argument("--xi", type=int, default=None,
                   help=f"filter window radius in pixels (default: {_DEFAULTS.xi})")
    g.add_argument("--r", type=int, default=None,
                   help=f"adaptive window coefficient (default: {_DEFAULTS.r})")
    g.add_argument("--threshold", type=float, default=None,
                   help=f"edge-class threshold (default: {_DEFAULTS.threshold})")
    g.add_argument("--alpha", type=float, default=None,
                   help=f"gamma adjustment factor (default: {_DEFAULTS.alpha})")
    g.add_argument("--tau-r", dest="tau_r", type=float, default=None,
                   help=f"reflection regularizer (default: {_DEFAULTS.tau_r})")
    g.add_argument("--seed", type=int, default=None,
                   help=f"random seed for all stochastic steps (default: {_DEFAULTS.seed})")
    g.add_argument("--depth", type=int, choices=(8, 16), default=None,
                   help=f"output bit depth (default: {_DEFAULTS.depth})")
    g.add_argument("--config", type=str, default=None,
                   help="key = value config file; flags override it (default: none)")


def _build_config(args: argparse.Namespace) -> PipelineConfig:
    overrides: dict = {}
    if getattr(args, "config", None):
        try:
            with open(args.config, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise _UsageError(f"cannot read config file: {exc}") from exc
        try:
            overrides.update(parse_config_text(text))
        except ValueError as exc:
            raise _UsageError(str(exc)) from exc
    for attr in ("lam", "xi", "r", "threshold", "alpha", "tau_r", "seed", "depth"):
        value = getattr(args, attr, None)
        if value is not None:
            overrides[attr] = value
    try:
        return PipelineConfig().with_overrides(**overrides)
    except ValueError as exc:
        raise _UsageError(str(exc)) from exc


def _cmd_enhance(args, cfg: PipelineConfig) -> int:
    save_image(enhance(load_image(args.input), cfg), args.output, cfg.depth)
    return 0


def _cmd_dehaze(args, cfg: PipelineConfig) -> int:
    save_image(dehaze(load_image(args.input), cfg), args.output, cfg.depth)
    return 0


def _cmd_filter(args, cfg: PipelineConfig) -> int:
    img = load_image(args.input)
    params = cfg.filter_params()
    filtered = ColorImage(*(gdwgif(p, params=params) for p in img.planes))
    save_image(filtered, args.output, cfg.depth)
    return 0


def _cmd_degrade(args, cfg: PipelineConfig) -> int:
    spec = DegradeSpec(
        gamma=args.gamma,
        gauss_sigma=args.gauss_sigma,
        poisson_peak=args.poisson_peak,
        poisson_enabled=not args.no_poisson,
        seed=cfg.seed,
    )
    save_image(degrade(load_image(args.input), spec), args.output, cfg.depth)
    return 0


def _cmd_metrics(args, cfg: PipelineConfig) -> int:
    ref = load_image(args.reference)
    test = load_image(args.test)
    print(f"psnr = {psnr(ref, test):.2f}")
    print(f"ssim = {ssim(ref, test):.4f}")
    return 0


def _cmd_eval(args, cfg: PipelineConfig) -> int:
    report = evaluate_directory(args.clean_dir, cfg, DegradeSpec(seed=cfg.seed))
    table = report.to_table()
    with open(args.report, "w", encoding="utf-8") as fh:
        fh.write(table)
    with open(args.report + ".json", "w", encoding="utf-8") as fh:
        fh.write(report.to_json())
    sys.stdout.write(table)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lumen-forge",
        description="Image enhancement and noise suppression under complex illumination.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("enhance", help="enhance a low-light or unevenly lit image")
    p.add_argument("input")
    p.add_argument("output")
    _add_common(p)
    p.set_defaults(func=_cmd_enhance)

    p = sub.add_parser("dehaze", help="remove haze by enhancing the negative image")
    p.add_argument("input")
    p.add_argument("output")
    _add_common(p)
    p.set_defaults(func=_cmd_dehaze)

    p = sub.add_parser("filter", help="standalone edge-preserving filter, channel-wise")
    p.add_argument("input")
    p.add_argument("output")
    _add_common(p)
    p.set_defaults(func=_cmd_filter)

    p = sub.add_parser("degrade", help="apply the synthetic low-light degradation")
    p.add_argument("input")
    p.add_argument("output")
    p.add_argument("--gamma", type=float, default=2.5,
                   help="darkening exponent (default: 2.5)")
    p.add_argument("--gauss-sigma", type=float, default=0.02,
                   help="Gaussian noise sigma (default: 0.02)")
    p.add_argument("--poisson-peak", type=float, default=255.0,
                   help="Poisson photon scale (default: 255)")
    p.add_argument("--no-poisson", action="store_true",
                   help="disable Poisson noise (default: enabled)")
    _add_common(p)
    p.set_defaults(func=_cmd_degrade)

    p = sub.add_parser("metrics", help="PSNR/SSIM of a test image against a reference")
    p.add_argument("reference")
    p.add_argument("test")
    _add_common(p)
    p.set_defaults(func=_cmd_metrics)

    p = sub.add_parser("eval", help="degrade/enhance/score every image in a directory")
    p.add_argument("clean_dir")
    p.add_argument("report")
    _add_common(p)
    p.set_defaults(func=_cmd_eval)

    return parser


def run_cli(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 1
    try:
        cfg = _build_config(args)
        return args.func(args, cfg)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (FileNotFoundError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run_cli(sys.argv[1:]))


if __name__ == "__main__":
    main()
