import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

import roughtda.profile_baselines as pb
from roughtda.errors import ParameterError
from roughtda.profile_baselines import (ALPHA, PeakConfig, cutoff_for_ra, detect_peaks,
                                        fft_denoise_mean_line, gaussian_kernel, gaussian_mean_line,
                                        mph_from_percentiles, peak_feature_vector,
                                        roughness_profile_fft, roughness_profile_gaussian,
                                        select_cutoff)
from roughtda.surface_synth import Profile


def sine_profile(wavelength, amplitude, n, spacing, phase=0.3):
    x = np.arange(n) * spacing
    return Profile(amplitude * np.sin(2 * np.pi * x / wavelength + phase), spacing)


def ra(z):
    return np.mean(np.abs(z - np.mean(z)))


# ---------------------------------------------------------------------------
# Gaussian filter

def test_kernel_peak_value():
    lc = 0.8
    k = gaussian_kernel(lc, 0.01, normalize=False)
    assert k[len(k) // 2] == pytest.approx(1 / (ALPHA * lc), rel=1e-12)
    assert len(k) == 161
    assert gaussian_kernel(lc, 0.01).sum() == pytest.approx(1.0, rel=1e-12)


def test_kernel_error():
    with pytest.raises(ParameterError):
        gaussian_kernel(0.0, 0.01)


def test_constant_mean_line():
    p = Profile(np.full(300, 3.25), 0.01)
    np.testing.assert_allclose(gaussian_mean_line(p, 0.8).heights, 3.25, rtol=1e-9)
    r = roughness_profile_gaussian(p)
    np.testing.assert_allclose(r.heights, 0.0, atol=1e-9 * 3.25)


def test_long_sine_passes_mean_line():
    p = sine_profile(0.8, 1.0, 800, 0.01)
    mean = gaussian_mean_line(p, 0.08).heights
    assert np.abs(mean).max() >= 0.9


def test_long_sine_removed_from_roughness():
    # amplitude 0.02 um -> Ra ~ 0.013 um -> 0.08 mm cutoff, wavelength 10x that
    p = sine_profile(0.8, 0.02, 800, 0.01)
    r = roughness_profile_gaussian(p)
    assert r.cutoff_used == 0.08
    assert ra(r.heights) <= 0.1 * ra(p.heights)


def test_white_noise_mostly_kept():
    p = Profile(np.random.default_rng(0).normal(size=1000), 0.01)
    r = roughness_profile_gaussian(p)
    assert r.heights.var() >= 0.5 * p.heights.var()


@pytest.mark.parametrize("value, cutoff", [(1.0, 0.8), (0.01, 0.08), (0.02, 0.08), (0.05, 0.25),
                                           (2.0, 0.8), (5.0, 2.5), (11.0, 8.0)])
def test_band_table(value, cutoff):
    assert cutoff_for_ra(value) == cutoff


def test_select_cutoff_first_value_when_candidate_too_long(monkeypatch):
    p = Profile(np.random.default_rng(1).normal(size=201), 0.01)
    assert p.length == pytest.approx(2.0)
    answers = iter([0.8, 8.0, 0.25])
    monkeypatch.setattr(pb, "cutoff_for_ra", lambda _ra: next(answers))
    assert select_cutoff(p) == 0.8


def test_select_cutoff_terminates_on_cycle(monkeypatch):
    p = Profile(np.random.default_rng(1).normal(size=500), 0.01)
    answers = iter([0.8, 0.25, 0.8, 0.25])
    monkeypatch.setattr(pb, "cutoff_for_ra", lambda _ra: next(answers))
    assert select_cutoff(p) == 0.25


def test_select_cutoff_fixpoint():
    p = Profile(np.random.default_rng(2).normal(size=500), 0.01)
    c = select_cutoff(p)
    r = p.heights - gaussian_mean_line(p, c).heights
    assert cutoff_for_ra(ra(r)) == c


@given(arrays(float, 64, elements=st.floats(-5, 5)))
def test_gaussian_reconstruction(z):
    p = Profile(z, 0.01)
    r = roughness_profile_gaussian(p, cutoff=0.08)
    np.testing.assert_allclose(r.heights + gaussian_mean_line(p, 0.08).heights, z, atol=1e-12)


# ---------------------------------------------------------------------------
# FFT denoising

def test_fft_threshold_zero_identity():
    z = np.random.default_rng(3).normal(size=257)
    out = fft_denoise_mean_line(Profile(z), 0.0).heights
    np.testing.assert_allclose(out, z, rtol=1e-9, atol=1e-9 * np.abs(z).max())
    np.testing.assert_allclose(roughness_profile_fft(Profile(z), 0.0).heights, 0, atol=1e-9)


def test_fft_threshold_one_two_tone():
    n = 256
    t = np.arange(n)
    big = 2.0 * np.cos(2 * np.pi * 5 * t / n)
    small = 0.7 * np.sin(2 * np.pi * 31 * t / n)
    out = fft_denoise_mean_line(Profile(big + small), 1.0).heights
    np.testing.assert_allclose(out, big, atol=1e-9)


def test_fft_denoise_recovers_sine():
    rng = np.random.default_rng(8)
    t = np.arange(1024)
    clean = np.sin(2 * np.pi * 12 * t / 1024)
    noisy = clean + 0.01 * rng.normal(size=t.size)
    mean = fft_denoise_mean_line(Profile(noisy), 0.4).heights
    assert np.corrcoef(mean, clean)[0, 1] >= 0.999


@pytest.mark.parametrize("threshold", [0.0, 0.4])
def test_fft_denoise_idempotent(threshold):
    rng = np.random.default_rng(9)
    z = np.cumsum(rng.normal(size=300))
    once = fft_denoise_mean_line(Profile(z), threshold)
    twice = fft_denoise_mean_line(once, threshold)
    np.testing.assert_allclose(twice.heights, once.heights, atol=1e-9 * np.abs(z).max())


@given(arrays(float, st.integers(3, 80), elements=st.floats(-5, 5)), st.floats(0, 1))
def test_fft_reconstruction(z, threshold):
    p = Profile(z)
    np.testing.assert_allclose(roughness_profile_fft(p, threshold).heights
                               + fft_denoise_mean_line(p, threshold).heights, z, atol=1e-12)


@pytest.mark.parametrize("threshold", [-0.1, 1.5])
def test_fft_threshold_error(threshold):
    with pytest.raises(ParameterError):
        fft_denoise_mean_line(Profile(np.zeros(8)), threshold)


# ---------------------------------------------------------------------------
# peaks

def test_detect_peaks_example():
    assert detect_peaks([0, 1, 0, 5, 0, 2, 0], mpd=2, mph=1.5) == [(3, 5.0), (5, 2.0)]


def test_detect_peaks_above_max():
    assert detect_peaks([0, 1, 0, 5, 0], mpd=1, mph=6) == []


def test_detect_peaks_mpd_suppresses_neighbour():
    assert detect_peaks([0, 3, 0, 5, 0, 4, 0], mpd=3) == [(3, 5.0)]


def test_detect_peaks_plateau():
    assert detect_peaks([0, 2, 2, 2, 0]) == [(1, 2.0)]


def test_mph_formula():
    spec = np.array([0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10], dtype=float)
    # 40th percentile 4, 50th 5
    assert mph_from_percentiles(spec, 0.5, 40, 50) == pytest.approx(4.5)
    assert mph_from_percentiles([2.0, 4.0], 0.5, 0, 100) == 3.0


@given(arrays(float, st.integers(0, 60), elements=st.floats(0, 10)), st.integers(1, 8),
       st.floats(0, 10))
def test_detect_peaks_constraints(x, mpd, mph):
    peaks = detect_peaks(x, mpd, mph)
    idx = [i for i, _ in peaks]
    amps = [a for _, a in peaks]
    assert all(a >= mph for a in amps)
    assert all(abs(i - j) >= mpd for k, i in enumerate(idx) for j in idx[k + 1:])
    assert amps == sorted(amps, reverse=True)
    assert all(0 < i < len(x) - 1 for i in idx)


def test_peak_vector_length_and_zero():
    v = peak_feature_vector(Profile(np.zeros(128)), PeakConfig())
    assert v.values.shape == (20,) and np.all(v.values == 0)
    assert len(peak_feature_vector(Profile(np.zeros(128)), PeakConfig(n_peaks=3))) == 12


def test_peak_vector_sine_frequency():
    n, k = 256, 20
    z = np.sin(2 * np.pi * k * np.arange(n) / n) + 0.001 * np.random.default_rng(0).normal(size=n)
    v = peak_feature_vector(Profile(z, 0.5)).values
    df = 1 / (n * 0.5)
    assert abs(v[0] - k * df) <= df
    assert abs(v[10] - k * df) <= df


def test_peak_vector_deterministic():
    z = np.random.default_rng(5).normal(size=200)
    a = peak_feature_vector(Profile(z)).values
    b = peak_feature_vector(Profile(z.copy())).values
    assert np.array_equal(a, b)


@pytest.mark.parametrize("kwargs", [dict(mpd_fft=0), dict(alpha=2), dict(pct_low=60),
                                    dict(n_peaks=0)])
def test_peak_config_errors(kwargs):
    with pytest.raises(ParameterError):
        PeakConfig(**kwargs)
