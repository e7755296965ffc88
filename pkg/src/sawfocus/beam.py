"""Two-dimensional Hermite-Gauss beams for focused surface acoustic waves.

A wave confined to a surface picks up half the Gouy phase of the familiar
3-d beam, (l + 1/2) arctan(x/x_R) per mode order l, which is what shifts
the transverse resonance ladder.  Everything here works in SI units with
the waist at x = 0 and propagation along +x.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import material

__all__ = [
    "BeamParams",
    "ComplexFieldMap",
    "hermite",
    "beam_radius",
    "gouy_phase",
    "curvature_radius",
    "anisotropic_curvature",
    "displacement",
    "render_field",
]


@dataclass(frozen=True)
class BeamParams:
    """Geometry of a focused beam: wavelength, waist radius, amplitude."""

    wavelength: float
    waist: float
    amplitude: float = 1.0

    def __post_init__(self):
        if self.wavelength <= 0:
            raise ValueError("wavelength must be positive")
        if self.waist <= 0:
            raise ValueError("waist must be positive")

    @property
    def rayleigh_length(self):
        return math.pi * self.waist ** 2 / self.wavelength

    @property
    def wavenumber(self):
        return 2.0 * math.pi / self.wavelength


def hermite(l, t):
    """Physicists' Hermite polynomial H_l(t), by the two-term recurrence."""
    if l < 0 or l != int(l):
        raise ValueError("mode order must be a non-negative integer")
    t = np.asarray(t, dtype=float)
    h_prev = np.ones_like(t)
    if l == 0:
        return h_prev
    h = 2.0 * t
    for n in range(1, int(l)):
        h, h_prev = 2.0 * t * h - 2.0 * n * h_prev, h
    return h


def beam_radius(params, x):
    """w(x) = w0 sqrt(1 + (x/x_R)^2)."""
    xr = params.rayleigh_length
    x = np.asarray(x, dtype=float)
    return params.waist * np.sqrt(1.0 + (x / xr) ** 2)


def gouy_phase(params, l, x):
    """Surface-wave Gouy phase (l + 1/2) arctan(x/x_R)."""
    if l < 0 or l != int(l):
        raise ValueError("mode order must be a non-negative integer")
    x = np.asarray(x, dtype=float)
    return (l + 0.5) * np.arctan(x / params.rayleigh_length)


def curvature_radius(params, x):
    """Isotropic wavefront curvature R(x) = x (1 + (x_R/x)^2).

    The waist is planar: R(0) is +inf, which downstream phase terms treat
    as zero curvature.
    """
    xr = params.rayleigh_length
    x = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        r = x * (1.0 + (xr / x) ** 2)
    r = np.where(x == 0.0, math.inf, r)
    return float(r) if r.ndim == 0 else r


def anisotropic_curvature(params, profile, x, y):
    """R_SAW(x, y) = R(x) v_g(theta) / v_g(0), theta = arctan(y/x).

    Angles beyond the profile's tabulated span are clamped to the nearest
    edge sample.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        theta = np.arctan(np.divide(y, x))
    theta = np.where((x == 0.0) & (y == 0.0), 0.0, theta)
    lo = max(profile.theta_min, -math.pi / 2)
    hi = min(profile.theta_max, math.pi / 2)
    theta = np.clip(theta, lo, hi)
    ratio = material.group_velocity(profile, theta) / material.group_velocity(profile, 0.0)
    r = curvature_radius(params, x) * ratio
    r = np.asarray(r)
    return float(r) if r.ndim == 0 else r


def displacement(params, profile, l, x, y):
    """Complex displacement u_l(x, y) of the order-l Hermite-Gauss mode.

    u_l = U (w0/w) H_l(sqrt(2) y / w) exp(-y^2/w^2)
            * exp(-i (k x + k y^2 / (2 R_SAW) - psi_G))

    At the waist the anisotropic curvature is infinite and the transverse
    phase term vanishes.
    """
    if l < 0 or l != int(l):
        raise ValueError("mode order must be a non-negative integer")
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    w = beam_radius(params, x)
    envelope = (params.amplitude * (params.waist / w)
                * hermite(l, math.sqrt(2.0) * y / w)
                * np.exp(-(y / w) ** 2))
    r_saw = np.asarray(anisotropic_curvature(params, profile, x, y))
    with np.errstate(divide="ignore"):
        transverse = params.wavenumber * y ** 2 / (2.0 * r_saw)
    transverse = np.where(np.isinf(r_saw), 0.0, transverse)
    phase = params.wavenumber * x + transverse - gouy_phase(params, l, x)
    out = envelope * np.exp(-1j * phase)
    return complex(out) if out.ndim == 0 else out


@dataclass
class ComplexFieldMap:
    """Complex field sampled on a rectangular grid, values[iy, ix]."""

    x_grid: np.ndarray
    y_grid: np.ndarray
    values: np.ndarray
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        self.x_grid = np.asarray(self.x_grid, dtype=float)
        self.y_grid = np.asarray(self.y_grid, dtype=float)
        self.values = np.asarray(self.values, dtype=complex)
        for name, g in (("x_grid", self.x_grid), ("y_grid", self.y_grid)):
            if g.ndim != 1 or g.size == 0:
                raise ValueError(f"{name} must be a non-empty 1-d array")
            if g.size > 1 and not np.all(np.diff(g) > 0):
                raise ValueError(f"{name} must be strictly increasing")
        if self.values.shape != (self.y_grid.size, self.x_grid.size):
            raise ValueError("values shape must be (len(y_grid), len(x_grid))")

    def to_csv(self, path):
        """Write rows x_m,y_m,re,im in row-major (y outer) order."""
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("x_m,y_m,re,im\n")
            for iy, yv in enumerate(self.y_grid):
                for ix, xv in enumerate(self.x_grid):
                    v = self.values[iy, ix]
                    fh.write(f"{float(xv)!r},{float(yv)!r},"
                             f"{float(v.real)!r},{float(v.imag)!r}\n")

    @classmethod
    def from_csv(cls, path, metadata=None):
        data = np.genfromtxt(path, delimiter=",", skip_header=1)
        data = np.atleast_2d(data)
        if data.shape[1] != 4:
            raise ValueError(f"{path}: expected 4 columns x_m,y_m,re,im")
        x = np.unique(data[:, 0])
        y = np.unique(data[:, 1])
        if x.size * y.size != data.shape[0]:
            raise ValueError(f"{path}: rows do not form a full rectangular grid")
        values = (data[:, 2] + 1j * data[:, 3]).reshape(y.size, x.size)
        return cls(x, y, values, metadata or {})

    def to_json(self, path):
        doc = {
            "x_m": self.x_grid.tolist(),
            "y_m": self.y_grid.tolist(),
            "re": self.values.real.tolist(),
            "im": self.values.imag.tolist(),
            "metadata": self.metadata,
        }
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(doc, fh, indent=2)
            fh.write("\n")


def render_field(params, profile, l, x_grid, y_grid, normalize=True):
    """Sample u_l on a grid and return a :class:`ComplexFieldMap`.

    With ``normalize=True`` the map is divided by its peak magnitude so the
    largest sample has unit modulus; ``normalize=False`` keeps the raw
    pointwise displacement.
    """
    x_grid = np.asarray(x_grid, dtype=float)
    y_grid = np.asarray(y_grid, dtype=float)
    if x_grid.size == 0 or y_grid.size == 0:
        raise ValueError("grids must be non-empty")
    xx, yy = np.meshgrid(x_grid, y_grid)
    values = displacement(params, profile, l, xx, yy)
    values = np.asarray(values, dtype=complex).reshape(y_grid.size, x_grid.size)
    if normalize:
        peak = np.max(np.abs(values))
        if peak > 0:
            values = values / peak
    meta = {
        "wavelength_m": params.wavelength,
        "waist_m": params.waist,
        "mode_index": int(l),
        "normalized": bool(normalize),
    }
    return ComplexFieldMap(x_grid, y_grid, values, meta)
