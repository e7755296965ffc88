"""Fitting and classification of measured mode images.

Optical interferometer scans arrive as per-pixel amplitude and phase maps.
This module loads them, fits a transverse amplitude slice with the
four-parameter Gaussian A exp(-(y - y0)^2 / w^2) + b to estimate the beam
waist, and classifies the imaged mode by projecting the complex field
onto the Hermite-Gauss basis of a reference beam.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, asdict

import numpy as np
from scipy.optimize import curve_fit

from . import beam as beam_mod

__all__ = [
    "ScanFormatError",
    "FitError",
    "ClassificationError",
    "ScanImage",
    "WaistFit",
    "ModeClassification",
    "wrap_phase",
    "load_scan",
    "save_scan",
    "make_synthetic_scan",
    "fit_waist",
    "classify_mode",
]

SCAN_HEADER = "x_m,y_m,amplitude,phase_rad"
SCAN_HEADER_DC = SCAN_HEADER + ",dc_w"


class ScanFormatError(ValueError):
    """A scan file does not follow the documented pixel-table format."""


class FitError(RuntimeError):
    """The waist fit could not be carried out or did not converge."""


class ClassificationError(ValueError):
    """The scan carries no usable signal to classify."""


def wrap_phase(phi):
    """Wrap angles into (-pi, pi]."""
    phi = np.asarray(phi, dtype=float)
    out = math.pi - np.mod(math.pi - phi, 2.0 * math.pi)
    return float(out) if out.ndim == 0 else out


@dataclass
class ScanImage:
    """Amplitude/phase maps on a rectangular grid, arrays[iy, ix]."""

    x_grid: np.ndarray
    y_grid: np.ndarray
    amplitude: np.ndarray
    phase: np.ndarray
    dc_power: np.ndarray = None

    def __post_init__(self):
        self.x_grid = np.asarray(self.x_grid, dtype=float)
        self.y_grid = np.asarray(self.y_grid, dtype=float)
        self.amplitude = np.asarray(self.amplitude, dtype=float)
        self.phase = np.asarray(self.phase, dtype=float)
        for name, g in (("x_grid", self.x_grid), ("y_grid", self.y_grid)):
            if g.ndim != 1 or g.size == 0:
                raise ValueError(f"{name} must be a non-empty 1-d array")
            if g.size > 1 and not np.all(np.diff(g) > 0):
                raise ValueError(f"{name} must be strictly increasing")
        shape = (self.y_grid.size, self.x_grid.size)
        if self.amplitude.shape != shape or self.phase.shape != shape:
            raise ValueError("amplitude and phase must have shape (ny, nx)")
        if np.any(self.amplitude < 0):
            raise ValueError("amplitude must be non-negative")
        if np.any(self.phase > math.pi) or np.any(self.phase <= -math.pi):
            raise ValueError("phase must be wrapped into (-pi, pi]")
        if self.dc_power is not None:
            self.dc_power = np.asarray(self.dc_power, dtype=float)
            if self.dc_power.shape != shape:
                raise ValueError("dc_power must have shape (ny, nx)")

    def complex_field(self):
        return self.amplitude * np.exp(1j * self.phase)


def load_scan(path):
    """Read a row-major pixel table into a :class:`ScanImage`.

    Expected columns are ``x_m,y_m,amplitude,phase_rad`` with an optional
    trailing ``dc_w``; rows iterate y in the outer loop, x inner, both
    ascending.  Phases are wrapped into (-pi, pi] on load.

    Raises:
        ScanFormatError: With the offending line number.
    """
    rows = []
    has_dc = False
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if lineno == 1:
                if line == SCAN_HEADER_DC:
                    has_dc = True
                elif line != SCAN_HEADER:
                    raise ScanFormatError(
                        f"{path}: line 1: expected header {SCAN_HEADER!r} "
                        f"or {SCAN_HEADER_DC!r}"
                    )
                continue
            if not line:
                raise ScanFormatError(f"{path}: line {lineno}: blank row")
            fields = line.split(",")
            want = 5 if has_dc else 4
            if len(fields) != want:
                raise ScanFormatError(
                    f"{path}: line {lineno}: expected {want} fields, "
                    f"got {len(fields)}"
                )
            try:
                rows.append([float(f) for f in fields])
            except ValueError as exc:
                raise ScanFormatError(f"{path}: line {lineno}: {exc}") from None
    if not rows:
        raise ScanFormatError(f"{path}: no pixel rows")
    data = np.asarray(rows)
    x_grid = np.unique(data[:, 0])
    y_grid = np.unique(data[:, 1])
    nx, ny = x_grid.size, y_grid.size
    if nx * ny != data.shape[0]:
        raise ScanFormatError(
            f"{path}: {data.shape[0]} rows do not fill a {ny} x {nx} grid"
        )
    expect_x = np.tile(x_grid, ny)
    expect_y = np.repeat(y_grid, nx)
    if not (np.array_equal(data[:, 0], expect_x)
            and np.array_equal(data[:, 1], expect_y)):
        raise ScanFormatError(f"{path}: rows are not in row-major order")
    amp = data[:, 2].reshape(ny, nx)
    phase = wrap_phase(data[:, 3].reshape(ny, nx))
    dc = data[:, 4].reshape(ny, nx) if has_dc else None
    try:
        return ScanImage(x_grid, y_grid, amp, phase, dc)
    except ValueError as exc:
        raise ScanFormatError(f"{path}: {exc}") from None


def save_scan(image, path):
    """Write a :class:`ScanImage` in the loader's format, byte-stable."""
    has_dc = image.dc_power is not None
    with open(path, "w", encoding="utf-8") as fh:
        fh.write((SCAN_HEADER_DC if has_dc else SCAN_HEADER) + "\n")
        for iy, yv in enumerate(image.y_grid):
            for ix, xv in enumerate(image.x_grid):
                row = (f"{float(xv)!r},{float(yv)!r},"
                       f"{float(image.amplitude[iy, ix])!r},"
                       f"{float(image.phase[iy, ix])!r}")
                if has_dc:
                    row += f",{float(image.dc_power[iy, ix])!r}"
                fh.write(row + "\n")


def make_synthetic_scan(params, profile, l, x_grid, y_grid,
                        noise=0.0, seed=0):
    """Render a mode and dress it up as an interferometer scan.

    ``noise`` is the fractional amplitude noise per pixel (so the
    signal-to-noise ratio at the peak is 1/noise).  Noise scales with the
    local signal, which is what a lock-in amplitude channel looks like
    once the detection floor is subtracted; an additive floor would put a
    pedestal under the tails and drag the fitted width down by a few
    percent.  Negative excursions are clipped at zero and the phase map
    stays exact.
    """
    fmap = beam_mod.render_field(params, profile, l, x_grid, y_grid,
                                 normalize=True)
    amp = np.abs(fmap.values)
    if noise > 0:
        rng = np.random.default_rng(seed)
        amp = np.clip(amp * (1.0 + rng.normal(0.0, noise, amp.shape)),
                      0.0, None)
    phase = wrap_phase(np.angle(fmap.values))
    return ScanImage(fmap.x_grid, fmap.y_grid, amp, phase)


@dataclass
class WaistFit:
    """Result of the transverse Gaussian fit at one x slice."""

    w0_est: float
    w0_err: float
    center_y: float
    amplitude_scale: float
    offset: float
    residual_rms: float
    peak_at_edge: bool

    def to_dict(self):
        return asdict(self)


def _gauss(y, a, y0, w, b):
    return a * np.exp(-((y - y0) / w) ** 2) + b


def _gauss_jac(y, a, y0, w, b):
    u = (y - y0) / w
    e = np.exp(-u * u)
    return np.column_stack([
        e,
        a * e * 2.0 * u / w,
        a * e * 2.0 * u * u / w,
        np.ones_like(y),
    ])


def fit_waist(image, x_slice=0.0):
    """Gaussian waist estimate from the amplitude slice nearest x_slice.

    Uses Levenberg-Marquardt with the analytic Jacobian.  The initial
    guess comes from the peak location, the half-max width, and a
    10th-percentile baseline.

    Raises:
        ValueError: x_slice outside the scanned span.
        FitError: Fewer than 6 samples across the peak, or no convergence.
    """
    xg = image.x_grid
    if not xg[0] <= x_slice <= xg[-1]:
        raise ValueError(
            f"x_slice {x_slice:.6g} m outside scanned span "
            f"[{xg[0]:.6g}, {xg[-1]:.6g}] m"
        )
    ix = int(np.argmin(np.abs(xg - x_slice)))
    y = image.y_grid
    data = image.amplitude[:, ix]
    baseline = float(np.percentile(data, 10.0))
    peak_idx = int(np.argmax(data))
    height = float(data[peak_idx]) - baseline
    if height <= 0:
        raise FitError("slice has no peak above the baseline")
    above = data - baseline > 0.5 * height
    if int(np.sum(above)) < 6:
        raise FitError(
            f"only {int(np.sum(above))} samples across the peak; need >= 6"
        )
    peak_at_edge = peak_idx == 0 or peak_idx == y.size - 1
    half_width = 0.5 * (y[above][-1] - y[above][0])
    w_init = max(half_width / math.sqrt(math.log(2.0)), float(y[1] - y[0]))
    p0 = [height, float(y[peak_idx]), w_init, baseline]
    try:
        popt, pcov = curve_fit(
            _gauss, y, data, p0=p0, jac=_gauss_jac, method="lm",
            ftol=1e-14, xtol=1e-14, gtol=1e-14, maxfev=10000,
        )
    except RuntimeError as exc:
        raise FitError(f"waist fit did not converge: {exc}") from None
    resid = data - _gauss(y, *popt)
    return WaistFit(
        w0_est=abs(float(popt[2])),
        w0_err=float(math.sqrt(abs(pcov[2, 2]))),
        center_y=float(popt[1]),
        amplitude_scale=float(popt[0]),
        offset=float(popt[3]),
        residual_rms=float(np.sqrt(np.mean(resid ** 2))),
        peak_at_edge=bool(peak_at_edge),
    )


@dataclass
class ModeClassification:
    """Best-matching Hermite-Gauss order and the projection evidence."""

    l_best: int
    projections: np.ndarray
    dominance: float
    spurious: bool


def classify_mode(image, params, profile, l_max=12, threshold=0.6,
                  x_slice=None):
    """Project the complex field at one slice onto the mode basis.

    The slice defaults to the column nearest x = 0 when the scan spans it,
    otherwise the column with the most signal.  ``projections[l]`` is the
    normalized power fraction |c_l|^2 / sum |c|^2; a map whose best
    fraction stays below ``threshold`` is flagged spurious (likely a bulk
    or stray mode rather than any single Hermite-Gauss order).

    Raises:
        ClassificationError: All-zero amplitude map.
    """
    if l_max < 0 or l_max != int(l_max):
        raise ValueError("l_max must be a non-negative integer")
    if not 0 < threshold <= 1:
        raise ValueError("threshold must be in (0, 1]")
    if not np.any(image.amplitude > 0):
        raise ClassificationError("amplitude map is identically zero")
    xg = image.x_grid
    if x_slice is not None:
        if not xg[0] <= x_slice <= xg[-1]:
            raise ValueError("x_slice outside scanned span")
        ix = int(np.argmin(np.abs(xg - x_slice)))
    elif xg[0] <= 0.0 <= xg[-1]:
        ix = int(np.argmin(np.abs(xg)))
    else:
        ix = int(np.argmax(np.sum(image.amplitude, axis=0)))
    y = image.y_grid
    signal = image.complex_field()[:, ix]
    x_here = float(xg[ix])
    power_s = np.trapezoid(np.abs(signal) ** 2, y)
    if power_s <= 0:
        raise ClassificationError("selected slice carries no signal")
    coeffs = np.zeros(int(l_max) + 1, dtype=complex)
    for l in range(int(l_max) + 1):
        basis = beam_mod.displacement(params, profile, l, x_here, y)
        power_b = np.trapezoid(np.abs(basis) ** 2, y)
        coeffs[l] = (np.trapezoid(np.conj(basis) * signal, y)
                     / math.sqrt(power_b * power_s))
    fractions = np.abs(coeffs) ** 2
    fractions = fractions / np.sum(fractions)
    l_best = int(np.argmax(fractions))
    dominance = float(fractions[l_best])
    return ModeClassification(
        l_best=l_best,
        projections=fractions,
        dominance=dominance,
        spurious=dominance < threshold,
    )
