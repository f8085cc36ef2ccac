"""Bivariate MAP shrinkage of framelet coefficients.

A child coefficient ``g1`` and its parent ``g2`` (same band, one level
coarser) are modelled as signal plus independent Gaussian noise, with a
circularly symmetric Laplacian-like prior on the clean pair. The MAP
estimate of the child has the closed form implemented in
:func:`shrink_bivariate`; :func:`map_oracle` recovers it by brute force.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .framelet import (
    BANDS,
    FrameletPyramid,
    analyze,
    as_image,
    atom_norms,
    expand_parent,
    synthesize,
)

SQRT3 = math.sqrt(3.0)
MAD_SCALE = 0.6745

METHODS = ("bivariate", "soft_univariate")


@dataclass(frozen=True)
class NoiseModel:
    """Std of the additive white Gaussian noise, in image intensity units."""

    sigma_e: float

    def __post_init__(self):
        if not (math.isfinite(self.sigma_e) and self.sigma_e >= 0):
            raise ValueError(f"sigma_e must be finite and >= 0, got {self.sigma_e}")


@dataclass(frozen=True)
class LocalStats:
    sigma_map: np.ndarray
    window_radius: int


@dataclass(frozen=True)
class DenoiseParams:
    """Estimator settings.

    ``sigma_e=None`` means the noise level is estimated from the finest
    ``HH22`` subband.
    """

    levels: int = 3
    window_radius: int = 3
    sigma_e: float | None = None
    epsilon_sigma: float = 1e-8

    def __post_init__(self):
        if self.levels < 1:
            raise ValueError("levels must be >= 1")
        if self.window_radius < 1:
            raise ValueError("window_radius must be >= 1")
        if not self.epsilon_sigma > 0:
            raise ValueError("epsilon_sigma must be > 0")
        if self.sigma_e is not None:
            NoiseModel(self.sigma_e)


def noise_pdf(e1, e2, sigma_e):
    """Bivariate isotropic Gaussian density of the noise pair."""
    if not sigma_e > 0:
        raise ValueError("sigma_e must be > 0")
    e1, e2 = np.asarray(e1, float), np.asarray(e2, float)
    var = sigma_e * sigma_e
    return np.exp(-(e1 * e1 + e2 * e2) / (2 * var)) / (2 * np.pi * var)


def prior_pdf(f1, f2, sigma):
    """Circularly symmetric prior of a clean (child, parent) pair.

    Each marginal has standard deviation ``sigma``.
    """
    if not sigma > 0:
        raise ValueError("sigma must be > 0")
    f1, f2 = np.asarray(f1, float), np.asarray(f2, float)
    return 3.0 / (2 * np.pi * sigma * sigma) * np.exp(-SQRT3 / sigma * np.hypot(f1, f2))


def log_posterior(f1, f2, g1, g2, sigma_e, sigma):
    """MAP objective up to an additive constant."""
    f1, f2 = np.asarray(f1, float), np.asarray(f2, float)
    fit = ((g1 - f1) ** 2 + (g2 - f2) ** 2) / (2 * sigma_e * sigma_e)
    return -fit + np.log(prior_pdf(f1, f2, sigma))


def _check_finite(*arrays):
    for a in arrays:
        if np.any(np.isnan(a)):
            raise ValueError("NaN input to shrinkage")
        if not np.all(np.isfinite(a)):
            raise ValueError("non-finite input to shrinkage")


def shrink_bivariate(g1, g2, sigma_e, sigma, epsilon_sigma: float = 1e-8):
    """MAP estimate of the child coefficient ``g1`` given its parent ``g2``.

    ``sigma_e`` is the noise std and ``sigma`` the marginal signal std; both
    broadcast against ``g1``. The pair magnitude is soft-thresholded at
    ``sqrt(3) * sigma_e**2 / sigma`` and ``g1`` scaled accordingly. ``sigma``
    at or below ``epsilon_sigma`` kills the coefficient; ``sigma_e == 0``
    returns ``g1`` unchanged.
    """
    g1, g2 = np.asarray(g1, float), np.asarray(g2, float)
    sigma_e, sigma = np.asarray(sigma_e, float), np.asarray(sigma, float)
    _check_finite(g1, g2, sigma_e, sigma)
    if np.any(sigma_e < 0) or np.any(sigma < 0):
        raise ValueError("sigma_e and sigma must be >= 0")
    g1, g2, sigma_e, sigma = np.broadcast_arrays(g1, g2, sigma_e, sigma)

    radius = np.hypot(g1, g2)
    flat = sigma <= epsilon_sigma
    with np.errstate(divide="ignore", invalid="ignore"):
        threshold = SQRT3 * sigma_e**2 / np.where(flat, 1.0, sigma)
        gain = np.maximum(radius - threshold, 0.0) / radius
    gain = np.where(radius > 0, gain, 0.0)
    gain = np.where(flat, 0.0, gain)
    gain = np.where(sigma_e == 0, 1.0, gain)
    out = gain * g1
    return out if out.ndim else float(out)


def soft_threshold(g, t):
    """Univariate soft threshold ``sign(g) * max(|g| - t, 0)``."""
    g, t = np.asarray(g, float), np.asarray(t, float)
    if np.any(t < 0):
        raise ValueError("threshold must be >= 0")
    out = np.sign(g) * np.maximum(np.abs(g) - t, 0.0)
    return out if out.ndim else float(out)


def map_oracle(g1, g2, sigma_e, sigma, half_range, step):
    """Grid-search maximiser of :func:`log_posterior`.

    The grid is ``k * step`` for integer ``k`` covering ``[-half_range,
    half_range]`` on both axes, so the origin is always a candidate. Ties go
    to the candidate of smaller norm.
    """
    if not (step > 0 and half_range > 0):
        raise ValueError("empty grid: step and half_range must be > 0")
    if half_range < max(abs(g1), abs(g2)):
        raise ValueError("half_range must cover the observation")
    k = int(math.floor(half_range / step + 1e-9))
    axis = np.arange(-k, k + 1) * step
    f1 = axis[:, None]
    best_val, best = -np.inf, (0.0, 0.0)
    # row blocks bound memory for fine grids
    block = max(1, 2_000_000 // axis.size)
    for start in range(0, axis.size, block):
        rows = f1[start : start + block]
        obj = log_posterior(rows, axis[None, :], g1, g2, sigma_e, sigma)
        top = obj.max()
        if top < best_val:
            continue
        cand = np.argwhere(obj == top)
        norms = rows[cand[:, 0], 0] ** 2 + axis[cand[:, 1]] ** 2
        i, j = cand[np.argmin(norms)]
        point = (float(rows[i, 0]), float(axis[j]))
        if top > best_val or point[0] ** 2 + point[1] ** 2 < best[0] ** 2 + best[1] ** 2:
            best_val, best = top, point
    return best


def estimate_noise_sigma(pyr: FrameletPyramid) -> float:
    """Robust noise std from the finest ``HH22`` subband.

    Coefficients are divided by their atom norms first so the estimate is in
    image units.
    """
    band = pyr.detail[0]["HH22"] / atom_norms(pyr, 1, "HH22")
    return float(np.median(np.abs(band)) / MAD_SCALE)


def local_signal_sigma(subband, window_radius: int, sigma_e) -> LocalStats:
    """Local signal std from the windowed second moment of a subband.

    ``sigma_e`` may be a scalar or a per-coefficient noise-std map.
    """
    if window_radius < 1:
        raise ValueError("window_radius must be >= 1")
    g = np.asarray(subband, float)
    size = 2 * window_radius + 1
    moment = ndimage.uniform_filter(g * g, size=size, mode="reflect")
    noise_var = np.asarray(sigma_e, float) ** 2
    sigma_map = np.sqrt(np.maximum(moment - noise_var, 0.0))
    return LocalStats(sigma_map=sigma_map, window_radius=window_radius)


def _shrink_band(pyr, level, band, params, noise, method):
    g1 = pyr.detail[level - 1][band]
    noise_std = noise.sigma_e * atom_norms(pyr, level, band)
    sigma = local_signal_sigma(g1, params.window_radius, noise_std).sigma_map
    if method == "soft_univariate":
        g2 = np.zeros_like(g1)
    elif level < pyr.levels:
        g2 = expand_parent(pyr.detail[level][band], g1.shape)
    else:
        g2 = np.zeros_like(g1)
    return shrink_bivariate(g1, g2, noise_std, sigma, params.epsilon_sigma)


def denoise_pyramid(
    pyr: FrameletPyramid,
    params: DenoiseParams,
    noise: NoiseModel,
    method: str = "bivariate",
) -> FrameletPyramid:
    """Shrink every detail coefficient; the approximation band is kept.

    ``bivariate`` pairs each coefficient with its parent (the coarsest level
    has none and uses a zero parent); ``soft_univariate`` always uses a zero
    parent, which reduces to soft thresholding at the same local threshold.
    """
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}; choose from {', '.join(METHODS)}")
    pyr.validate()
    out = pyr.copy()
    for level in range(1, pyr.levels + 1):
        for band in BANDS:
            out.detail[level - 1][band] = _shrink_band(pyr, level, band, params, noise, method)
    return out


def resolve_noise(pyr: FrameletPyramid, params: DenoiseParams) -> NoiseModel:
    if params.sigma_e is not None:
        return NoiseModel(params.sigma_e)
    return NoiseModel(estimate_noise_sigma(pyr))


def denoise_image(image, params: DenoiseParams | None = None, method: str = "bivariate") -> np.ndarray:
    """Analyse, shrink and resynthesise a noisy image. Output is not clamped."""
    params = params or DenoiseParams()
    pyr = analyze(as_image(image), params.levels)
    noise = resolve_noise(pyr, params)
    return synthesize(denoise_pyramid(pyr, params, noise, method))
