"""
Vectorizations of persistence diagrams: Carlsson coordinates, persistence
images and Chebyshev/Lagrange template functions.

Persistence images and template functions need dataset-wide ranges. Build the
config once with :func:`fit_persistence_image_config` or
:func:`fit_template_config` over every diagram, then apply it per diagram.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass

import numpy as np

from .errors import ConfigError
from .persistence import PersistenceDiagram


@dataclass(frozen=True)
class FeatureVector:
    values: np.ndarray
    provenance: str

    def __len__(self):
        return len(self.values)


def config_digest(config) -> str:
    blob = json.dumps(asdict(config), sort_keys=True, default=float)
    return hashlib.sha256(blob.encode()).hexdigest()[:12]


def _pairs(pd):
    if isinstance(pd, PersistenceDiagram):
        return pd.pairs
    return np.asarray(pd, dtype=float).reshape(-1, 2)


# ---------------------------------------------------------------------------
# Carlsson coordinates

@dataclass(frozen=True)
class CarlssonCoordinates:
    f1: float
    f2: float
    f3: float
    f4: float
    f5: float

    def as_array(self) -> np.ndarray:
        return np.array([self.f1, self.f2, self.f3, self.f4, self.f5])


def carlsson_coordinates(pd, d_max: float | None = None) -> CarlssonCoordinates:
    """
    The five polynomial coordinates of a diagram.

    ``d_max`` defaults to the largest death in the diagram; pass it explicitly
    to evaluate sub-diagrams against a common reference.
    """
    p = _pairs(pd)
    if len(p) == 0:
        return CarlssonCoordinates(0.0, 0.0, 0.0, 0.0, 0.0)
    b, d = p[:, 0], p[:, 1]
    life = d - b
    if d_max is None:
        d_max = d.max()
    return CarlssonCoordinates(
        float(np.sum(b * life)),
        float(np.sum((d_max - d) * life)),
        float(np.sum(b ** 2 * life ** 4)),
        float(np.sum((d_max - d) ** 2 * life ** 4)),
        float(max(life.max(), 0.0)),
    )


# ---------------------------------------------------------------------------
# Persistence images

@dataclass(frozen=True)
class PersistenceImageConfig:
    birth_range: tuple[float, float]
    lifetime_range: tuple[float, float]
    sigma: float
    p_max: float | None = None
    grid_cols: int = 20
    grid_rows: int = 16
    subsamples: int = 4

    def __post_init__(self):
        if self.grid_cols < 1 or self.grid_rows < 1:
            raise ConfigError("persistence image grid dims must be >= 1")
        if not self.sigma > 0:
            raise ConfigError("sigma must be positive")
        if self.subsamples < 4:
            raise ConfigError("at least 4x4 subsamples per pixel are required")
        for name in ("birth_range", "lifetime_range"):
            lo, hi = getattr(self, name)
            if not hi > lo:
                raise ConfigError(f"{name} is degenerate: {lo, hi}")
        if self.p_max is not None and not self.p_max > 0:
            raise ConfigError("p_max must be positive")

    @property
    def weight_scale(self) -> float:
        return self.p_max if self.p_max is not None else self.lifetime_range[1]


def fit_persistence_image_config(diagrams, grid_cols: int = 20, grid_rows: int = 16,
                                 sigma_fraction: float = 0.1, pad_sigmas: float = 3.0,
                                 sigma: float | None = None) -> PersistenceImageConfig:
    """Dataset-wide ranges: sigma is a fraction of the lifetime span, ranges are padded by 3 sigma."""
    pts = np.vstack([_pairs(d) for d in diagrams] + [np.empty((0, 2))])
    if len(pts) == 0:
        raise ConfigError("cannot calibrate a persistence image on empty diagrams")
    b = pts[:, 0]
    life = pts[:, 1] - pts[:, 0]
    p_lo, p_hi = float(life.min()), float(life.max())
    span = p_hi - p_lo
    if sigma is None:
        sigma = sigma_fraction * span if span > 0 else sigma_fraction * max(abs(p_hi), 1.0)
    pad = pad_sigmas * sigma
    return PersistenceImageConfig(
        birth_range=(float(b.min()) - pad, float(b.max()) + pad),
        lifetime_range=(p_lo - pad, p_hi + pad),
        sigma=float(sigma),
        p_max=p_hi if p_hi > 0 else None,
        grid_cols=grid_cols,
        grid_rows=grid_rows,
    )


def persistence_weight(life: np.ndarray, p_max: float) -> np.ndarray:
    return np.clip(np.asarray(life, dtype=float) / p_max, 0.0, 1.0)


def _cell_integrals(centers, lo, hi, n_cells, sigma, sub):
    """
    Midpoint-rule integrals of unit 1-D Gaussians over each cell.

    Returns an array (n_points, n_cells).
    """
    width = (hi - lo) / n_cells
    h = width / sub
    x = lo + h * (np.arange(n_cells * sub) + 0.5)
    g = np.exp(-0.5 * ((x[None, :] - centers[:, None]) / sigma) ** 2) / (np.sqrt(2 * np.pi) * sigma)
    return g.reshape(len(centers), n_cells, sub).sum(axis=2) * h


def persistence_image(pd, config: PersistenceImageConfig) -> FeatureVector:
    """
    Pixel integrals of the weighted persistence surface, flattened row by row.

    Rows index lifetime (increasing), columns index birth. The 2-D Gaussian is
    separable, so the midpoint rule over the sub-sample grid factorizes into
    two 1-D sums.
    """
    p = _pairs(pd)
    b = p[:, 0]
    life = p[:, 1] - p[:, 0]
    w = persistence_weight(life, config.weight_scale)
    keep = w > 0
    b, life, w = b[keep], life[keep], w[keep]
    img = np.zeros((config.grid_rows, config.grid_cols))
    if len(b):
        bx = _cell_integrals(b, *config.birth_range, config.grid_cols, config.sigma, config.subsamples)
        py = _cell_integrals(life, *config.lifetime_range, config.grid_rows, config.sigma,
                             config.subsamples)
        img = np.einsum("k,ki,kj->ij", w, py, bx)
    return FeatureVector(img.ravel(), f"pi:{config_digest(config)}")


# ---------------------------------------------------------------------------
# Template functions

@dataclass(frozen=True)
class TemplateConfig:
    birth_range: tuple[float, float]
    lifetime_range: tuple[float, float]
    mesh_a_size: int = 10
    mesh_b_size: int = 10

    def __post_init__(self):
        if self.mesh_a_size < 2 or self.mesh_b_size < 2:
            raise ConfigError("mesh sizes must be >= 2")
        for name in ("birth_range", "lifetime_range"):
            lo, hi = getattr(self, name)
            if not hi > lo:
                raise ConfigError(f"{name} is degenerate: {lo, hi}")

    @property
    def mesh_a(self) -> np.ndarray:
        return chebyshev_nodes(*self.birth_range, self.mesh_a_size)

    @property
    def mesh_b(self) -> np.ndarray:
        return chebyshev_nodes(*self.lifetime_range, self.mesh_b_size)


def fit_template_config(diagrams, mesh_a_size: int = 10, mesh_b_size: int = 10,
                        padding: float = 0.05) -> TemplateConfig:
    """Padded bounding box of all diagram points in (birth, lifetime) coordinates."""
    pts = np.vstack([_pairs(d) for d in diagrams] + [np.empty((0, 2))])
    if len(pts) == 0:
        raise ConfigError("empty dataset bounding box")
    b = pts[:, 0]
    life = pts[:, 1] - pts[:, 0]

    def box(v):
        lo, hi = float(v.min()), float(v.max())
        span = hi - lo if hi > lo else max(abs(hi), 1.0)
        return lo - padding * span, hi + padding * span

    return TemplateConfig(box(b), box(life), mesh_a_size, mesh_b_size)


def chebyshev_nodes(lo: float, hi: float, n: int) -> np.ndarray:
    """Chebyshev points of the first kind on [lo, hi], ascending."""
    k = np.arange(n)
    x = np.cos((2 * k + 1) * np.pi / (2 * n))
    return np.sort(0.5 * (lo + hi) + 0.5 * (hi - lo) * x)


def lagrange_basis(nodes: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Cardinal polynomials ``l_i(x)``, shape (len(x), len(nodes))."""
    nodes = np.asarray(nodes, dtype=float)
    x = np.asarray(x, dtype=float)
    n = len(nodes)
    out = np.ones((len(x), n))
    for i in range(n):
        for m in range(n):
            if m != i:
                out[:, i] *= (x - nodes[m]) / (nodes[i] - nodes[m])
    return out


def template_features(pd, config: TemplateConfig) -> FeatureVector:
    """
    Sum over diagram points of ``|l_i(b) * l_j(p)|``, with points outside the
    padded box contributing nothing. Index (i, j) is flattened row-major with
    i over the birth mesh.
    """
    p = _pairs(pd)
    b = p[:, 0]
    life = p[:, 1] - p[:, 0]
    (b0, b1), (p0, p1) = config.birth_range, config.lifetime_range
    inside = (b >= b0) & (b <= b1) & (life >= p0) & (life <= p1)
    b, life = b[inside], life[inside]
    la = np.abs(lagrange_basis(config.mesh_a, b))
    lb = np.abs(lagrange_basis(config.mesh_b, life))
    feats = la.T @ lb
    return FeatureVector(feats.ravel(), f"tf:{config_digest(config)}")
