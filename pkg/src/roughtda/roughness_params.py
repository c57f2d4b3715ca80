"""
Profile (Ra ... RSm) and areal (Sa ... Sdr) roughness parameters.

Heights are mean-centred before any moment is taken. Higher moments of a flat
input are reported as 0 so that feature matrices stay finite.
"""

from __future__ import annotations

from dataclasses import astuple, dataclass, fields

import numpy as np

from .errors import ParameterError


@dataclass(frozen=True)
class ProfileParams:
    Ra: float
    Rq: float
    Rsk: float
    Rku: float
    Rp: float
    Rv: float
    Rz: float
    Rdq: float
    RSm: float

    @classmethod
    def names(cls):
        return [f.name for f in fields(cls)]

    def as_array(self) -> np.ndarray:
        return np.array(astuple(self), dtype=float)


@dataclass(frozen=True)
class ArealParams:
    Sa: float
    Sq: float
    Ssk: float
    Sku: float
    Sp: float
    Sv: float
    Sz: float
    Sdq: float
    Sdr: float

    @classmethod
    def names(cls):
        return [f.name for f in fields(cls)]

    def as_array(self) -> np.ndarray:
        return np.array(astuple(self), dtype=float)


def _centered(z):
    # a flat input must stay exactly flat, not become rounding residue
    if np.ptp(z) == 0:
        return np.zeros_like(z)
    return z - z.mean()


def _moments(z):
    a = float(np.mean(np.abs(z)))
    scale = float(np.abs(z).max())
    q = scale * float(np.sqrt(np.mean((z / scale) ** 2))) if scale > 0 else 0.0
    if q > 0:
        zn = z / q
        sk = float(np.mean(zn ** 3))
        ku = float(np.mean(zn ** 4))
    else:
        sk = ku = 0.0
    p = float(z.max())
    v = float(-z.min())
    return a, q, sk, ku, p, v


def mean_upcrossing_spacing(z: np.ndarray, spacing: float) -> float | None:
    """Mean distance between successive upward zero crossings (linear interpolation)."""
    i = np.nonzero((z[:-1] < 0) & (z[1:] >= 0))[0]
    if len(i) < 2:
        return None
    x = (i + z[i] / (z[i] - z[i + 1])) * spacing
    return float(np.mean(np.diff(x)))


def profile_parameters(r) -> ProfileParams:
    """
    Parameters of a roughness profile (anything with ``heights`` and
    ``spacing``, or a bare array with unit spacing).
    """
    z = np.asarray(getattr(r, "heights", r), dtype=float)
    spacing = float(getattr(r, "spacing", 1.0))
    if z.ndim != 1 or len(z) < 2:
        raise ParameterError("profile needs at least 2 samples")
    z = _centered(z)
    ra, rq, rsk, rku, rp, rv = _moments(z)
    rdq = float(np.sqrt(np.mean(np.gradient(z, spacing) ** 2)))
    if rq == 0:
        rsm = 0.0
    else:
        rsm = mean_upcrossing_spacing(z, spacing)
        if rsm is None:
            rsm = (len(z) - 1) * spacing
    return ProfileParams(ra, rq, rsk, rku, rp, rv, rp + rv, rdq, rsm)


def areal_parameters(r) -> ArealParams:
    z = np.asarray(getattr(r, "heights", r), dtype=float)
    spacing = float(getattr(r, "spacing", 1.0))
    if z.ndim != 2 or min(z.shape) < 2:
        raise ParameterError("grid must be at least 2x2")
    z = _centered(z)
    sa, sq, ssk, sku, sp, sv = _moments(z)
    gy, gx = np.gradient(z, spacing)
    g2 = gx ** 2 + gy ** 2
    sdq = float(np.sqrt(np.mean(g2)))
    sdr = float(np.mean(np.sqrt(1.0 + g2) - 1.0) * 100.0)
    return ArealParams(sa, sq, ssk, sku, sp, sv, sp + sv, sdq, sdr)
