"""
Synthetic self-affine surfaces and the labelled dataset built from them.

Surfaces are produced by Fourier filtering of white noise: the spectrum of a
Gaussian random field is shaped so that its power falls off as
``|q|**(-2 - 2*H)``, where ``H`` is the Hurst exponent.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError


class RoughnessLabel(enum.IntEnum):
    Rough = 0
    SomewhatRough = 1
    Smooth = 2

    @classmethod
    def parse(cls, value) -> "RoughnessLabel":
        if isinstance(value, RoughnessLabel):
            return value
        if isinstance(value, str):
            try:
                return cls[value]
            except KeyError:
                return cls(int(value))
        return cls(int(value))


@dataclass(frozen=True)
class SurfaceGrid:
    heights: np.ndarray
    hurst: float
    index: int
    label: RoughnessLabel
    spacing: float = 1.0

    def __post_init__(self):
        h = np.asarray(self.heights, dtype=float)
        if h.ndim != 2:
            raise ParameterError("surface heights must be a 2-D array")
        if not np.all(np.isfinite(h)):
            raise ParameterError("surface heights must be finite")
        if self.spacing <= 0:
            raise ParameterError("spacing must be positive")
        object.__setattr__(self, "heights", h)
        object.__setattr__(self, "label", RoughnessLabel.parse(self.label))

    @property
    def shape(self):
        return self.heights.shape


@dataclass(frozen=True)
class Profile:
    heights: np.ndarray
    spacing: float = 1.0
    label: RoughnessLabel = RoughnessLabel.Rough
    parent_index: int = -1

    def __post_init__(self):
        h = np.asarray(self.heights, dtype=float)
        if h.ndim != 1:
            raise ParameterError("profile heights must be a 1-D array")
        if not np.all(np.isfinite(h)):
            raise ParameterError("profile heights must be finite")
        if self.spacing <= 0:
            raise ParameterError("spacing must be positive")
        object.__setattr__(self, "heights", h)
        object.__setattr__(self, "label", RoughnessLabel.parse(self.label))

    @property
    def length(self) -> float:
        """Measurement length ``(n - 1) * spacing``."""
        return (len(self.heights) - 1) * self.spacing

    def __len__(self):
        return len(self.heights)


@dataclass(frozen=True)
class GeneratorConfig:
    count: int = 201
    size: int = 128
    seed: int = 0
    profiles_per_direction: int = 3
    spacing: float = 1.0

    def __post_init__(self):
        if self.count < 3 or self.count % 3:
            raise ParameterError(f"count must be >= 3 and divisible by 3, got {self.count}")
        if self.size < 8:
            raise ParameterError(f"size must be >= 8, got {self.size}")
        if self.seed < 0:
            raise ParameterError("seed must be non-negative")
        if not 1 <= self.profiles_per_direction < self.size:
            raise ParameterError("profiles_per_direction must be in [1, size)")
        if self.spacing <= 0:
            raise ParameterError("spacing must be positive")


def surface_seed(master_seed: int, index: int) -> int:
    """Counter-based child seed: depends only on (master_seed, index)."""
    ss = np.random.SeedSequence(entropy=int(master_seed), spawn_key=(int(index),))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def generate_surface(hurst: float, size: int, seed: int, spacing: float = 1.0,
                     index: int = 0, label: RoughnessLabel | None = None) -> SurfaceGrid:
    """
    Self-affine random surface of Hurst exponent `hurst`.

    White noise is transformed, every Fourier coefficient is scaled by
    ``|q|**(-1 - hurst)`` (DC removed), and the result is transformed back and
    normalised to zero mean and unit standard deviation.

    Parameters
    ----------
    hurst : float
        Hurst exponent in [0, 1]; larger is smoother.
    size : int
        Grid side length (>= 8).
    seed : int
        Seed of the white noise; equal arguments give bit-identical grids.
    """
    if not 0.0 <= hurst <= 1.0 or not np.isfinite(hurst):
        raise ParameterError(f"hurst must be in [0, 1], got {hurst}")
    if size < 8:
        raise ParameterError(f"size must be >= 8, got {size}")

    rng = np.random.default_rng(seed)
    noise = rng.standard_normal((size, size))
    spectrum = np.fft.rfft2(noise)

    qy = np.fft.fftfreq(size)[:, None]
    qx = np.fft.rfftfreq(size)[None, :]
    q = np.hypot(qx, qy)
    q[0, 0] = 1.0
    amplitude = q ** (-1.0 - hurst)
    amplitude[0, 0] = 0.0

    heights = np.fft.irfft2(spectrum * amplitude, s=(size, size))
    heights -= heights.mean()
    heights /= heights.std()

    if label is None:
        label = RoughnessLabel.Rough
    return SurfaceGrid(heights, float(hurst), int(index), label, float(spacing))


def label_for_index(index: int, count: int) -> RoughnessLabel:
    if count < 3 or count % 3:
        raise ParameterError(f"count must be divisible by 3, got {count}")
    if not 0 <= index < count:
        raise ParameterError(f"index {index} out of range for count {count}")
    band = count // 3
    if index < band:
        return RoughnessLabel.Rough
    if index >= 2 * band:
        return RoughnessLabel.Smooth
    return RoughnessLabel.SomewhatRough


def hurst_values(count: int) -> np.ndarray:
    return np.arange(count) / (count - 1)


def _generate_one(args):
    config, i = args
    h = i / (config.count - 1)
    return generate_surface(h, config.size, surface_seed(config.seed, i), config.spacing,
                            index=i, label=label_for_index(i, config.count))


def generate_dataset(config: GeneratorConfig, jobs: int = 1) -> list[SurfaceGrid]:
    """All `config.count` surfaces, Hurst values equally spaced on [0, 1]."""
    tasks = [(config, i) for i in range(config.count)]
    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=jobs) as ex:
            return list(ex.map(_generate_one, tasks, chunksize=8))
    return [_generate_one(t) for t in tasks]


def profile_indices(n: int, per_direction: int) -> list[int]:
    return [k * n // (per_direction + 1) for k in range(1, per_direction + 1)]


def extract_profiles(surface: SurfaceGrid, per_direction: int = 3) -> list[Profile]:
    """
    Rows then columns at ``floor(k * n / (per_direction + 1))``, k = 1..per_direction.
    """
    rows, cols = surface.shape
    if not 1 <= per_direction < min(rows, cols):
        raise ParameterError(f"per_direction must be in [1, {min(rows, cols)}), got {per_direction}")
    h = surface.heights
    out = []
    for r in profile_indices(rows, per_direction):
        out.append(Profile(h[r, :].copy(), surface.spacing, surface.label, surface.index))
    for c in profile_indices(cols, per_direction):
        out.append(Profile(h[:, c].copy(), surface.spacing, surface.label, surface.index))
    return out


def extract_all_profiles(surfaces, per_direction: int = 3) -> list[Profile]:
    return [p for s in surfaces for p in extract_profiles(s, per_direction)]
