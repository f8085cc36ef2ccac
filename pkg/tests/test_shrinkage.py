import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st
from scipy import integrate

from frameletshrink.framelet import BANDS, analyze, synthesize
from frameletshrink.imageio import add_awgn
from frameletshrink.metrics import psnr
from frameletshrink.shrinkage import (
    DenoiseParams,
    NoiseModel,
    denoise_image,
    denoise_pyramid,
    estimate_noise_sigma,
    local_signal_sigma,
    log_posterior,
    map_oracle,
    noise_pdf,
    prior_pdf,
    shrink_bivariate,
    soft_threshold,
)

SQRT3 = math.sqrt(3)


class TestDensities:
    def test_noise_pdf_values(self):
        assert noise_pdf(0, 0, 1) == pytest.approx(1 / (2 * math.pi), rel=1e-15)
        assert noise_pdf(1, 1, 1) == pytest.approx(0.05854983152431917, rel=1e-14)

    def test_noise_pdf_normalised(self):
        total, _ = integrate.dblquad(lambda y, x: noise_pdf(x, y, 1.0), -8, 8, -8, 8)
        assert abs(total - 1) < 1e-6

    def test_prior_pdf_peak(self):
        assert prior_pdf(0, 0, 1) == pytest.approx(0.477464829275686, rel=1e-14)

    def test_prior_pdf_normalised(self):
        h = 0.02
        axis = np.arange(-20, 20 + h / 2, h)
        f1, f2 = np.meshgrid(axis, axis, indexing="ij")
        total = integrate.trapezoid(integrate.trapezoid(prior_pdf(f1, f2, 1.0), axis), axis)
        assert abs(total - 1) < 1e-4

    def test_prior_marginal_std(self):
        # marginal variance of f1 equals sigma**2 for the chosen normalisation
        sigma = 2.0
        h = 0.02
        axis = np.arange(-40, 40 + h / 2, h)
        f1, f2 = np.meshgrid(axis, axis, indexing="ij")
        p = prior_pdf(f1, f2, sigma)
        var = integrate.trapezoid(integrate.trapezoid(p * f1**2, axis), axis)
        assert var == pytest.approx(sigma**2, rel=1e-3)

    def test_prior_rotational_symmetry(self):
        assert prior_pdf(3, 4, 2.5) == prior_pdf(5, 0, 2.5)

    @pytest.mark.parametrize("bad", [0.0, -1.0])
    def test_domain_errors(self, bad):
        with pytest.raises(ValueError):
            noise_pdf(0, 0, bad)
        with pytest.raises(ValueError):
            prior_pdf(0, 0, bad)


class TestShrinkBivariate:
    def test_zero_child(self):
        for g2 in (-4.0, 0.0, 9.0):
            assert shrink_bivariate(0.0, g2, 1.0, 2.0) == 0.0

    def test_hand_evaluated_case(self):
        # threshold 1, magnitude 5 -> factor 0.8
        assert shrink_bivariate(3, 4, 1, SQRT3) == pytest.approx(2.4, abs=1e-12)

    def test_sub_threshold(self):
        assert shrink_bivariate(0.3, 0.4, 1, SQRT3) == 0.0

    def test_noise_free_is_identity(self):
        assert shrink_bivariate(7, 0, 0, 5) == 7.0

    def test_flat_signal_kills(self):
        assert shrink_bivariate(7, 3, 1, 0) == 0.0
        assert shrink_bivariate(7, 3, 1, 1e-9) == 0.0

    def test_both_zero(self):
        assert shrink_bivariate(0.0, 0.0, 1.0, 1.0) == 0.0

    def test_nan_rejected(self):
        with pytest.raises(ValueError):
            shrink_bivariate(float("nan"), 1, 1, 1)

    def test_vectorised(self):
        g1 = np.array([3.0, 0.3, -3.0])
        g2 = np.array([4.0, 0.4, 4.0])
        np.testing.assert_allclose(shrink_bivariate(g1, g2, 1.0, SQRT3), [2.4, 0.0, -2.4])

    def test_zero_parent_is_soft_threshold(self):
        g = np.linspace(-10, 10, 101)
        t = SQRT3 * 2.0**2 / 3.0
        np.testing.assert_allclose(shrink_bivariate(g, 0.0, 2.0, 3.0), soft_threshold(g, t), atol=1e-12)


finite = st.floats(-50, 50, allow_nan=False)
positive = st.floats(0.05, 10, allow_nan=False)


@settings(max_examples=300)
@given(g1=finite, g2=finite, se=st.floats(0, 10), s=st.floats(0, 10))
def test_never_amplifies_and_keeps_sign(g1, g2, se, s):
    out = shrink_bivariate(g1, g2, se, s)
    assert abs(out) <= abs(g1)
    assert out == 0 or np.sign(out) == np.sign(g1)


@settings(max_examples=200)
@given(g1=st.floats(0.01, 50), a=finite, b=finite, se=positive, s=positive)
def test_monotone_in_parent_magnitude(g1, a, b, se, s):
    lo, hi = sorted((abs(a), abs(b)))
    assert shrink_bivariate(g1, lo, se, s) <= shrink_bivariate(g1, hi, se, s) + 1e-12


@settings(max_examples=300)
@given(g1=finite, g2=finite, se=positive, s=positive)
def test_zero_exactly_below_threshold(g1, g2, se, s):
    radius = math.hypot(g1, g2)
    threshold = SQRT3 * se**2 / s
    assume(abs(radius - threshold) > 1e-9 * max(1.0, threshold))
    out = shrink_bivariate(g1, g2, se, s)
    assert (out == 0) == (radius <= threshold or g1 == 0)


@settings(max_examples=300)
@given(g1=finite, g2=finite, se=positive, s=positive)
def test_stationarity_and_norm_identity(g1, g2, se, s):
    f1 = shrink_bivariate(g1, g2, se, s)
    f2 = shrink_bivariate(g2, g1, se, s)
    norm = math.hypot(f1, f2)
    assume(norm > 0)
    grad = [(g - f) / se**2 - SQRT3 * f / (s * norm) for g, f in ((g1, f1), (g2, f2))]
    assert math.hypot(*grad) <= 1e-6
    assert abs(norm - (math.hypot(g1, g2) - SQRT3 * se**2 / s)) <= 1e-9


class TestSoftThreshold:
    @pytest.mark.parametrize("g,t,expected", [(5, 2, 3), (-5, 2, -3), (1, 2, 0)])
    def test_examples(self, g, t, expected):
        assert soft_threshold(g, t) == expected

    def test_negative_threshold(self):
        with pytest.raises(ValueError):
            soft_threshold(1.0, -1.0)


class TestMapOracle:
    def test_agrees_with_closed_form(self):
        f1, f2 = map_oracle(3, 4, 1, SQRT3, 10, 0.01)
        assert abs(f1 - 2.4) <= 0.02
        assert abs(f2 - 3.2) <= 0.02

    def test_origin(self):
        assert map_oracle(0, 0, 1, 1, 5, 0.01) == (0.0, 0.0)

    def test_sub_threshold_collapses(self):
        assert map_oracle(0.3, 0.4, 1, SQRT3, 5, 0.005) == (0.0, 0.0)

    def test_returns_grid_maximum(self):
        f = map_oracle(1.3, -0.7, 0.8, 1.1, 2, 0.05)
        axis = np.arange(-40, 41) * 0.05
        obj = log_posterior(axis[:, None], axis[None, :], 1.3, -0.7, 0.8, 1.1)
        assert log_posterior(*f, 1.3, -0.7, 0.8, 1.1) == pytest.approx(obj.max(), abs=1e-12)

    def test_errors(self):
        with pytest.raises(ValueError):
            map_oracle(0, 0, 1, 1, 5, 0.0)
        with pytest.raises(ValueError):
            map_oracle(6, 0, 1, 1, 5, 0.1)


class TestNoiseEstimate:
    def test_zero_pyramid(self):
        assert estimate_noise_sigma(analyze(np.zeros((32, 32)), 2)) == 0.0

    def test_pure_noise(self):
        noise = add_awgn(np.zeros((256, 256)), 20.0, seed=7)
        assert 18 <= estimate_noise_sigma(analyze(noise, 3)) <= 22

    def test_natural_image(self, camera):
        noisy = add_awgn(camera, 30.0, seed=7)
        assert 27 <= estimate_noise_sigma(analyze(noisy, 3)) <= 33


class TestLocalSigma:
    def test_zero_band(self):
        stats = local_signal_sigma(np.zeros((9, 9)), 3, 1.0)
        assert np.all(stats.sigma_map == 0)
        assert stats.window_radius == 3

    def test_constant_band(self):
        stats = local_signal_sigma(np.full((10, 13), 5.0), 3, 3.0)
        np.testing.assert_allclose(stats.sigma_map, 4.0, rtol=1e-12)

    def test_clamped_when_noise_dominates(self, rng):
        band = rng.uniform(-1, 1, size=(16, 16))
        assert np.all(local_signal_sigma(band, 2, 2.0).sigma_map == 0)

    def test_matches_explicit_window_mean(self, rng):
        band = rng.normal(size=(12, 15))
        r = 2
        padded = np.pad(band, r, mode="symmetric")
        out = local_signal_sigma(band, r, 0.5).sigma_map
        for i in range(band.shape[0]):
            for j in range(band.shape[1]):
                m = np.mean(padded[i : i + 2 * r + 1, j : j + 2 * r + 1] ** 2)
                assert out[i, j] == pytest.approx(math.sqrt(max(m - 0.25, 0)), abs=1e-12)


class TestDenoise:
    def test_noise_free_pyramid_unchanged(self, camera):
        pyr = analyze(camera, 3)
        out = denoise_pyramid(pyr, DenoiseParams(sigma_e=0.0), NoiseModel(0.0))
        for level in range(3):
            for band in BANDS:
                np.testing.assert_array_equal(out.detail[level][band], pyr.detail[level][band])
        np.testing.assert_array_equal(out.approx, pyr.approx)

    def test_tiny_details_are_removed(self, rng):
        x = 100 + rng.normal(0, 0.01, size=(32, 32))
        pyr = analyze(x, 2)
        out = denoise_pyramid(pyr, DenoiseParams(levels=2), NoiseModel(50.0))
        for level in out.detail:
            for band in BANDS:
                assert np.all(level[band] == 0)
        smooth = synthesize(out)
        assert np.std(smooth) < np.std(x)

    def test_identity_when_noise_is_zero(self, astronaut):
        out = denoise_image(astronaut, DenoiseParams(sigma_e=0.0))
        assert np.max(np.abs(out - astronaut)) <= 1e-9

    def test_gain_at_sigma_30(self, camera):
        noisy = add_awgn(camera, 30.0, seed=3)
        out = np.clip(denoise_image(noisy, DenoiseParams(sigma_e=30.0)), 0, 255)
        assert psnr(camera, out) >= psnr(camera, noisy) + 3

    def test_estimated_noise_also_gains(self, camera):
        noisy = add_awgn(camera, 30.0, seed=3)
        out = np.clip(denoise_image(noisy, DenoiseParams()), 0, 255)
        assert psnr(camera, out) >= psnr(camera, noisy) + 3

    def test_unknown_method(self, camera):
        with pytest.raises(ValueError, match="bivariate"):
            denoise_image(camera, method="median")

    def test_deterministic(self, camera):
        noisy = add_awgn(camera, 20.0, seed=1)
        a = denoise_image(noisy)
        b = denoise_image(noisy)
        assert a.tobytes() == b.tobytes()

    @pytest.mark.parametrize(
        "kwargs", [{"levels": 0}, {"window_radius": 0}, {"epsilon_sigma": 0.0}, {"sigma_e": -1.0}]
    )
    def test_invalid_params(self, kwargs):
        with pytest.raises(ValueError):
            DenoiseParams(**kwargs)
