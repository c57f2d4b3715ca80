"""
Classical 1-D profile features.

* Gaussian mean-line filtering with the cutoff chosen iteratively from Ra
  (spacing in mm, heights in micrometres).
* FFT denoising by thresholding the normalised magnitude spectrum.
* Peak coordinates of the FFT and PSD spectra under MPH / MPD constraints.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np
from scipy import ndimage, signal

from .errors import ParameterError
from .surface_synth import Profile
from .tda_features import FeatureVector

ALPHA = np.sqrt(np.log(2) / np.pi)

# (upper Ra bound in um, cutoff in mm) for nonperiodic profiles
CUTOFF_BANDS = (
    (0.02, 0.08),
    (0.1, 0.25),
    (2.0, 0.8),
    (10.0, 2.5),
    (np.inf, 8.0),
)


@dataclass(frozen=True)
class PeakConfig:
    mpd_fft: int = 10
    mpd_psd: int = 7
    alpha: float = 0.5
    pct_low: float = 40.0
    pct_high: float = 50.0
    n_peaks: int = 5

    def __post_init__(self):
        if self.mpd_fft < 1 or self.mpd_psd < 1:
            raise ParameterError("mpd must be >= 1")
        if not 0 <= self.alpha <= 1:
            raise ParameterError("alpha must be in [0, 1]")
        if not 0 <= self.pct_low <= self.pct_high <= 100:
            raise ParameterError("need 0 <= pct_low <= pct_high <= 100")
        if self.n_peaks < 1:
            raise ParameterError("n_peaks must be >= 1")


@dataclass(frozen=True)
class RoughnessProfile:
    heights: np.ndarray
    spacing: float
    cutoff_used: float | None = None

    @property
    def length(self) -> float:
        return (len(self.heights) - 1) * self.spacing


def gaussian_kernel(cutoff: float, spacing: float, normalize: bool = True) -> np.ndarray:
    """Weighting function sampled at multiples of `spacing` over ``[-cutoff, cutoff]``."""
    if cutoff <= 0:
        raise ParameterError(f"cutoff must be positive, got {cutoff}")
    half = int(np.floor(cutoff / spacing + 1e-9))
    x = np.arange(-half, half + 1) * spacing
    scale = ALPHA * cutoff
    g = np.exp(-np.pi * (x / scale) ** 2) / scale
    return g / g.sum() if normalize else g


def gaussian_mean_line(profile: Profile, cutoff: float) -> Profile:
    """Low-pass mean line; reflective boundaries, unit-sum kernel."""
    k = gaussian_kernel(cutoff, profile.spacing)
    mean = ndimage.correlate1d(profile.heights, k, mode="reflect")
    return replace(profile, heights=mean)


def arithmetic_mean_deviation(z: np.ndarray) -> float:
    z = np.asarray(z, dtype=float)
    return float(np.mean(np.abs(z - z.mean())))


def cutoff_for_ra(ra: float) -> float:
    for upper, cutoff in CUTOFF_BANDS:
        if ra <= upper:
            return cutoff
    return CUTOFF_BANDS[-1][1]


def select_cutoff(profile: Profile) -> float:
    """
    Iterative cutoff choice for nonperiodic profiles.

    Starts from the band of the raw Ra, then re-measures Ra on the roughness
    profile and moves to the new band until it stops changing. A candidate
    longer than the measurement length, or a band seen before, ends the
    search.
    """
    first = cutoff_for_ra(arithmetic_mean_deviation(profile.heights))
    current = first
    seen = {current}
    while True:
        rough = profile.heights - gaussian_mean_line(profile, current).heights
        nxt = cutoff_for_ra(arithmetic_mean_deviation(rough))
        if nxt == current:
            return current
        if nxt > profile.length:
            return first
        if nxt in seen:
            return current
        seen.add(nxt)
        current = nxt


def roughness_profile_gaussian(profile: Profile, cutoff: float | None = None) -> RoughnessProfile:
    if cutoff is None:
        cutoff = select_cutoff(profile)
    mean = gaussian_mean_line(profile, cutoff)
    return RoughnessProfile(profile.heights - mean.heights, profile.spacing, cutoff)


def fft_denoise_mean_line(profile: Profile, threshold: float = 0.4) -> Profile:
    """
    Keep only Fourier coefficients whose magnitude, normalised by the largest
    one, is at least `threshold`.
    """
    if not 0 <= threshold <= 1:
        raise ParameterError(f"threshold must be in [0, 1], got {threshold}")
    x = profile.heights
    spec = np.fft.fft(x)
    mag = np.abs(spec)
    # mirror bins may differ in the last ulp; use the larger of each pair
    mag = np.maximum(mag, mag[(-np.arange(len(x))) % len(x)])
    top = mag.max()
    if top > 0:
        spec = np.where(mag / top >= threshold, spec, 0)
    mean = np.fft.ifft(spec)
    scale = max(np.abs(x).max(), 1.0)
    assert np.abs(mean.imag).max() < 1e-9 * scale
    return replace(profile, heights=mean.real.copy())


def roughness_profile_fft(profile: Profile, threshold: float = 0.4) -> RoughnessProfile:
    mean = fft_denoise_mean_line(profile, threshold)
    return RoughnessProfile(profile.heights - mean.heights, profile.spacing, None)


def mph_from_percentiles(spectrum, alpha: float = 0.5, pct_low: float = 40.0,
                         pct_high: float = 50.0) -> float:
    y_min, y_max = np.percentile(spectrum, [pct_low, pct_high])
    return float(y_min + alpha * (y_max - y_min))


def detect_peaks(spectrum, mpd: int = 1, mph: float | None = None) -> list[tuple[int, float]]:
    """
    Local maxima at least `mph` high, kept greedily from the tallest down so
    that no two retained peaks are closer than `mpd` samples.

    A plateau counts once, at its left edge. End points are never peaks.
    """
    if mpd < 1:
        raise ParameterError("mpd must be >= 1")
    x = np.asarray(spectrum, dtype=float)
    if len(x) < 3:
        return []
    dx = np.diff(x)
    # rising into i, then falling or flat out of i; flats resolved to their left edge
    cand = []
    i = 1
    while i < len(x) - 1:
        if dx[i - 1] > 0:
            j = i
            while j < len(x) - 1 and dx[j] == 0:
                j += 1
            if j < len(x) - 1 and dx[j] < 0:
                cand.append(i)
            i = j + 1 if j > i else i + 1
        else:
            i += 1
    cand = np.array(cand, dtype=int)
    if mph is not None and len(cand):
        cand = cand[x[cand] >= mph]
    order = cand[np.lexsort((cand, -x[cand]))] if len(cand) else cand
    kept: list[int] = []
    for c in order:
        if all(abs(c - k) >= mpd for k in kept):
            kept.append(int(c))
    return [(k, float(x[k])) for k in kept]


def fft_spectrum(profile: Profile):
    n = len(profile.heights)
    freqs = np.fft.rfftfreq(n, profile.spacing)
    return freqs, np.abs(np.fft.rfft(profile.heights))


def psd_spectrum(profile: Profile):
    return signal.periodogram(profile.heights, fs=1.0 / profile.spacing, window="boxcar",
                              detrend=False, scaling="density")


def _peak_coords(freqs, amps, mpd, config):
    mph = mph_from_percentiles(amps, config.alpha, config.pct_low, config.pct_high)
    peaks = detect_peaks(amps, mpd, mph)[: config.n_peaks]
    out = np.zeros(2 * config.n_peaks)
    for i, (k, a) in enumerate(peaks):
        out[2 * i] = freqs[k]
        out[2 * i + 1] = a
    return out


def peak_feature_vector(profile: Profile, config: PeakConfig = PeakConfig()) -> FeatureVector:
    """
    ``[f1, a1, ..., fn, an]`` for the FFT magnitude followed by the same for
    the periodogram; missing peaks are zero.
    """
    f, a = fft_spectrum(profile)
    fp, ap = psd_spectrum(profile)
    v = np.concatenate([
        _peak_coords(f, a, config.mpd_fft, config),
        _peak_coords(fp, ap, config.mpd_psd, config),
    ])
    return FeatureVector(v, f"fft-peaks:n{config.n_peaks}")
