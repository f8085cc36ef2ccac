"""
Denoising sweep
===============

Add seeded white Gaussian noise to the two bundled images, denoise with the
bivariate estimator and the univariate soft-threshold baseline, and report
PSNR/SSIM over the noise levels 10..100. The same sweep is available as
``frameletshrink benchmark``.
"""

import numpy as np

from frameletshrink import DenoiseParams, add_awgn, analyze, bundled_image, denoise_image, estimate_noise_sigma, psnr, ssim

for name in ("camera", "astronaut"):
    clean = bundled_image(name)
    print(f"\n{name}")
    print(" sigma  est.   noisy dB   bivariate dB/SSIM    soft dB/SSIM")
    for sigma in (10, 30, 50, 70, 100):
        noisy = add_awgn(clean, sigma, seed=42)
        estimate = estimate_noise_sigma(analyze(noisy, 3))
        row = [f"{sigma:6d} {estimate:6.2f} {psnr(clean, noisy):9.2f}"]
        for method in ("bivariate", "soft_univariate"):
            out = np.clip(denoise_image(noisy, DenoiseParams(), method), 0, 255)
            row.append(f"{psnr(clean, out):9.2f} / {ssim(clean, out):.3f}")
        print("   ".join(row))
