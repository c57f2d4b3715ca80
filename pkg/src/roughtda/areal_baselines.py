"""
Classical 2-D surface features: Gaussian smoothing, areal power spectral
density and peaks of its angular spectrum.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np
from scipy import ndimage

from .errors import ParameterError
from .profile_baselines import PeakConfig, detect_peaks, mph_from_percentiles
from .surface_synth import SurfaceGrid
from .tda_features import FeatureVector


@dataclass(frozen=True)
class Gaussian2DConfig:
    kernel_size: int = 21

    def __post_init__(self):
        if self.kernel_size < 3 or self.kernel_size % 2 == 0:
            raise ParameterError(f"kernel_size must be odd and >= 3, got {self.kernel_size}")

    @property
    def sigma(self) -> float:
        return self.kernel_size / 6.0

    @property
    def half_width(self) -> int:
        return (self.kernel_size - 1) // 2


@dataclass(frozen=True)
class Spectrum2D:
    values: np.ndarray
    freq_spacing: tuple[float, float]


@dataclass(frozen=True)
class AngularFeatures:
    top5_densities: np.ndarray
    zeta_c: float
    zeta_d: float

    def as_array(self) -> np.ndarray:
        return np.concatenate([self.top5_densities, [self.zeta_c, self.zeta_d]])


def gaussian_kernel_2d(config: Gaussian2DConfig) -> np.ndarray:
    w = config.half_width
    u = np.arange(-w, w + 1)
    g = np.exp(-(u[:, None] ** 2 + u[None, :] ** 2) / (2 * config.sigma ** 2))
    return g / g.sum()


def _as_grid(surface) -> SurfaceGrid:
    if isinstance(surface, SurfaceGrid):
        return surface
    return SurfaceGrid(np.asarray(surface, dtype=float), 0.0, 0, 0)


def gaussian_filter_2d(surface, config: Gaussian2DConfig = Gaussian2DConfig()) -> SurfaceGrid:
    s = _as_grid(surface)
    if config.kernel_size >= min(s.shape):
        raise ParameterError(f"kernel_size {config.kernel_size} too large for grid {s.shape}")
    out = ndimage.convolve(s.heights, gaussian_kernel_2d(config), mode="reflect")
    return replace(s, heights=out)


def roughness_surface(surface, config: Gaussian2DConfig = Gaussian2DConfig()) -> SurfaceGrid:
    s = _as_grid(surface)
    return replace(s, heights=s.heights - gaussian_filter_2d(s, config).heights)


def apsd(surface) -> Spectrum2D:
    """
    ``|H|**2 / (M N Tx Ty)`` with ``H = Tx Ty DFT`` the Riemann-sum Fourier
    transform, so that summing over frequency cells returns the mean power.
    Zero frequency is shifted to the centre.
    """
    s = _as_grid(surface)
    M, N = s.shape
    t = s.spacing
    G = np.abs(np.fft.fft2(s.heights)) ** 2 * (t * t) / (M * N)
    return Spectrum2D(np.fft.fftshift(G), (1.0 / (N * t), 1.0 / (M * t)))


def polar_spectra(spec: Spectrum2D, n_radii: int | None = None, n_angles: int = 180):
    """
    Radial and angular marginals of the APSD resampled on a polar grid.

    Radii run from 0 to Nyquist, angles over [0, 180) degrees; the periodic
    spectrum is interpolated bilinearly with wrap-around.

    Returns
    -------
    radial, angular : ndarray
    radii : ndarray
        Radial frequencies (cycles per unit length along x).
    angles : ndarray
        Degrees.
    """
    P = spec.values
    M, N = P.shape
    if n_radii is None:
        n_radii = N // 2
    if n_radii < 4 or n_angles < 4:
        raise ParameterError("n_radii and n_angles must be >= 4")
    rho = np.linspace(0.0, 1.0, n_radii)
    theta = np.arange(n_angles) * (180.0 / n_angles)
    th = np.deg2rad(theta)
    cy, cx = M // 2, N // 2
    col = cx + rho[:, None] * (N / 2) * np.cos(th)[None, :]
    row = cy - rho[:, None] * (M / 2) * np.sin(th)[None, :]
    polar = ndimage.map_coordinates(P, [row.ravel(), col.ravel()], order=1, mode="grid-wrap")
    polar = polar.reshape(n_radii, n_angles)
    radii = rho * (N / 2) * spec.freq_spacing[0]
    return polar.sum(axis=1), polar.sum(axis=0), radii, theta


def angular_features(surface, prefilter: bool = True,
                     g2d: Gaussian2DConfig = Gaussian2DConfig(),
                     peaks: PeakConfig = PeakConfig(),
                     n_radii: int | None = None, n_angles: int = 180) -> AngularFeatures:
    s = _as_grid(surface)
    if prefilter:
        s = roughness_surface(s, g2d)
    spec = apsd(s)
    M, N = spec.values.shape
    values = spec.values.copy()
    # DC carries no direction
    values[M // 2, N // 2] = 0.0
    radial, angular, radii, angles = polar_spectra(Spectrum2D(values, spec.freq_spacing),
                                                   n_radii, n_angles)
    mph = mph_from_percentiles(angular, peaks.alpha, peaks.pct_low, peaks.pct_high)
    found = detect_peaks(angular, peaks.mpd_psd, mph)[:5]
    top = np.zeros(5)
    top[: len(found)] = [a for _, a in found]
    zeta_c = float(angles[int(np.argmax(angular))])
    zeta_d = float(radii[1 + int(np.argmax(radial[1:]))]) if radial[1:].max() > 0 else 0.0
    return AngularFeatures(top, zeta_c, zeta_d)


def angular_feature_vector(surface, prefilter: bool = True,
                           g2d: Gaussian2DConfig = Gaussian2DConfig(),
                           peaks: PeakConfig = PeakConfig()) -> FeatureVector:
    """Top-5 angular peak densities, then the angle and radius of the spectral maxima."""
    feats = angular_features(surface, prefilter, g2d, peaks)
    tag = f"fft2d-angular:{'gauss' if prefilter else 'direct'}:K{g2d.kernel_size}"
    return FeatureVector(feats.as_array(), tag)
