"""Bivariate MAP shrinkage denoising in a decimated framelet domain."""

from .framelet import (
    BANDS,
    FilterBank,
    FrameletPyramid,
    analyze,
    default_filter_bank,
    parent_of,
    synthesize,
)
from .imageio import add_awgn, bundled_image, load_pgm, read_pgm, save_pgm, write_pgm
from .metrics import QualityReport, mse, psnr, quality, ssim
from .shrinkage import (
    DenoiseParams,
    LocalStats,
    NoiseModel,
    denoise_image,
    denoise_pyramid,
    estimate_noise_sigma,
    local_signal_sigma,
    map_oracle,
    noise_pdf,
    prior_pdf,
    shrink_bivariate,
    soft_threshold,
)

__all__ = [
    "BANDS",
    "DenoiseParams",
    "FilterBank",
    "FrameletPyramid",
    "LocalStats",
    "NoiseModel",
    "QualityReport",
    "add_awgn",
    "analyze",
    "bundled_image",
    "default_filter_bank",
    "denoise_image",
    "denoise_pyramid",
    "estimate_noise_sigma",
    "load_pgm",
    "local_signal_sigma",
    "map_oracle",
    "mse",
    "noise_pdf",
    "parent_of",
    "prior_pdf",
    "psnr",
    "quality",
    "read_pgm",
    "save_pgm",
    "shrink_bivariate",
    "ssim",
    "synthesize",
    "write_pgm",
]
