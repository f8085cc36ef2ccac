"""Command-line front end: ``add-noise``, ``denoise``, ``evaluate``, ``benchmark``."""

from __future__ import annotations

import argparse
import csv
import io
import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import imageio, metrics
from .framelet import BANDS, analyze, synthesize
from .shrinkage import METHODS, DenoiseParams, denoise_pyramid, resolve_noise

log = logging.getLogger("frameletshrink")

DEFAULT_SIGMAS = (10.0, 30.0, 50.0, 70.0, 100.0)
COLUMNS = ("image", "sigma", "method", "psnr_db", "ssim")


@dataclass
class BenchmarkConfig:
    images: list[str] = field(default_factory=lambda: list(imageio.TEST_IMAGES))
    sigma_list: list[float] = field(default_factory=lambda: list(DEFAULT_SIGMAS))
    methods: list[str] = field(default_factory=lambda: list(METHODS))
    levels: int = 3
    window_radius: int = 3
    seed: int = 42
    fmt: str = "csv"
    trials: int = 1

    def __post_init__(self):
        if not self.sigma_list:
            raise ValueError("sigma_list must not be empty")
        if any(s < 0 for s in self.sigma_list):
            raise ValueError("noise levels must be >= 0")
        if not self.methods:
            raise ValueError("at least one method is required")
        for m in self.methods:
            if m not in METHODS:
                raise ValueError(f"unknown method {m!r}; valid methods: {', '.join(METHODS)}")
        if self.fmt not in ("csv", "md"):
            raise ValueError("format must be csv or md")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")


def load_image(spec: str) -> tuple[str, np.ndarray]:
    """Load a PGM path, or a bundled image by name."""
    path = Path(spec)
    if path.is_file():
        return path.stem, imageio.load_pgm(path)
    if spec in imageio.TEST_IMAGES:
        return spec, imageio.bundled_image(spec)
    raise FileNotFoundError(f"cannot read image {spec!r}: no such file")


def parse_sigma_mode(text: str) -> float | None:
    if text == "estimate":
        return None
    if text.startswith("given:"):
        value = float(text.split(":", 1)[1])
        if not value >= 0:
            raise ValueError("given noise level must be >= 0")
        return value
    raise ValueError(f"invalid --sigma-mode {text!r}; use given:<value> or estimate")


def cell_seed(seed: int, image_index: int, trial: int) -> int:
    """Noise seed for one (image, trial); shared across noise levels and methods."""
    state = np.random.SeedSequence([seed, image_index, trial]).generate_state(1, np.uint64)
    return int(state[0])


def run_benchmark(config: BenchmarkConfig) -> list[dict[str, str]]:
    rows = []
    for index, spec in enumerate(config.images):
        try:
            name, clean = load_image(spec)
        except Exception as exc:  # one bad image must not abort the sweep
            log.error("image %s: %s", spec, exc)
            name, clean = Path(spec).stem, None
        for sigma in sorted(config.sigma_list):
            for method in (m for m in METHODS if m in config.methods):
                row = {"image": name, "sigma": f"{sigma:g}", "method": method}
                try:
                    if clean is None:
                        raise RuntimeError("image could not be loaded")
                    psnrs, ssims = [], []
                    for trial in range(config.trials):
                        noisy = imageio.add_awgn(clean, sigma, cell_seed(config.seed, index, trial))
                        params = DenoiseParams(
                            levels=config.levels, window_radius=config.window_radius, sigma_e=sigma
                        )
                        pyr = analyze(noisy, params.levels)
                        out = synthesize(denoise_pyramid(pyr, params, resolve_noise(pyr, params), method))
                        out = np.clip(out, 0.0, 255.0)
                        psnrs.append(metrics.psnr(clean, out))
                        ssims.append(metrics.ssim(clean, out))
                    row["psnr_db"] = metrics.format_db(float(np.mean(psnrs)))
                    row["ssim"] = f"{np.mean(ssims):.6f}"
                except Exception as exc:
                    log.error("cell %s sigma=%g %s failed: %s", name, sigma, method, exc)
                    row["psnr_db"] = row["ssim"] = f"error: {type(exc).__name__}"
                rows.append(row)
    return rows


def format_table(rows: list[dict[str, str]], fmt: str) -> str:
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=COLUMNS, lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
        return buf.getvalue()
    widths = {c: max([len(c)] + [len(r[c]) for r in rows]) for c in COLUMNS}
    lines = [
        "| " + " | ".join(c.ljust(widths[c]) for c in COLUMNS) + " |",
        "| " + " | ".join("-" * widths[c] for c in COLUMNS) + " |",
    ]
    for r in rows:
        lines.append("| " + " | ".join(r[c].ljust(widths[c]) for c in COLUMNS) + " |")
    return "\n".join(lines) + "\n"


def cmd_add_noise(args) -> int:
    clean = imageio.load_pgm(args.input)
    noisy = imageio.add_awgn(clean, args.sigma, args.seed)
    imageio.save_pgm(args.output, noisy, args.pgm)
    saved = imageio.quantize(noisy)
    print(f"psnr_db {metrics.format_db(metrics.psnr(clean, noisy))}")
    print(f"psnr_db_saved {metrics.format_db(metrics.psnr(clean, saved))}")
    return 0


def cmd_denoise(args) -> int:
    if args.method not in METHODS:
        raise ValueError(f"unknown method {args.method!r}; valid methods: {', '.join(METHODS)}")
    params = DenoiseParams(
        levels=args.levels, window_radius=args.window, sigma_e=parse_sigma_mode(args.sigma_mode)
    )
    noisy = imageio.load_pgm(args.input)
    pyr = analyze(noisy, params.levels)
    noise = resolve_noise(pyr, params)
    out = denoise_pyramid(pyr, params, noise, args.method)
    imageio.save_pgm(args.output, synthesize(out), args.pgm)
    print(f"sigma_e {noise.sigma_e:.4f}")
    for level in range(1, pyr.levels + 1):
        before = np.concatenate([pyr.detail[level - 1][b].ravel() for b in BANDS])
        after = np.concatenate([out.detail[level - 1][b].ravel() for b in BANDS])
        killed = np.count_nonzero((after == 0) & (before != 0))
        pct = 100.0 * killed / max(np.count_nonzero(before), 1)
        print(f"level {level} killed {pct:.2f}%")
    return 0


def cmd_evaluate(args) -> int:
    reference = imageio.load_pgm(args.reference)
    test = imageio.load_pgm(args.test)
    report = metrics.quality(reference, test)
    row = report.as_row()
    if args.format == "csv":
        print("psnr_db,ssim,mse")
        print(f"{row['psnr_db']},{row['ssim']},{row['mse']}")
    else:
        for key, value in row.items():
            print(f"{key} {value}")
    return 0


def cmd_benchmark(args) -> int:
    config = BenchmarkConfig(
        images=args.images or list(imageio.TEST_IMAGES),
        sigma_list=args.sigmas,
        methods=args.methods,
        levels=args.levels,
        window_radius=args.window,
        seed=args.seed,
        fmt=args.format,
        trials=args.trials,
    )
    text = format_table(run_benchmark(config), config.fmt)
    if args.output:
        Path(args.output).write_text(text, encoding="ascii")
    else:
        sys.stdout.write(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="frameletshrink", description="Framelet-domain bivariate shrinkage denoising."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("add-noise", help="add seeded white Gaussian noise to a PGM")
    p.add_argument("input")
    p.add_argument("output")
    p.add_argument("--sigma", type=float, required=True)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--pgm", choices=("P5", "P2"), default="P5")
    p.set_defaults(func=cmd_add_noise)

    p = sub.add_parser("denoise", help="denoise a PGM")
    p.add_argument("input")
    p.add_argument("output")
    p.add_argument("--method", default="bivariate")
    p.add_argument("--levels", type=int, default=3)
    p.add_argument("--window", type=int, default=3, help="window radius (3 gives 7x7)")
    p.add_argument("--sigma-mode", default="estimate", help="given:<value> or estimate")
    p.add_argument("--pgm", choices=("P5", "P2"), default="P5")
    p.set_defaults(func=cmd_denoise)

    p = sub.add_parser("evaluate", help="PSNR/SSIM/MSE of a test image against a reference")
    p.add_argument("reference")
    p.add_argument("test")
    p.add_argument("--format", choices=("csv", "md"), default="md")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("benchmark", help="noise-level sweep over images and methods")
    p.add_argument("images", nargs="*", help="PGM paths or bundled names (default: camera astronaut)")
    p.add_argument("--sigmas", type=float, nargs="+", default=list(DEFAULT_SIGMAS))
    p.add_argument("--methods", nargs="+", default=list(METHODS))
    p.add_argument("--levels", type=int, default=3)
    p.add_argument("--window", type=int, default=3)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--format", choices=("csv", "md"), default="csv")
    p.add_argument("--output")
    p.set_defaults(func=cmd_benchmark)
    return parser


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
