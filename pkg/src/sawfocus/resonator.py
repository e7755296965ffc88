"""Resonance spectra of a two-mirror focusing SAW cavity.

The closed-form resonance ladder

    f_{n,l} = (v_p / 2d) * (n + (2/pi) (l + 1/2) arctan(d / (2 x_R)))

follows from the round-trip phase condition k(f) d - 2 psi_G(d/2) = n pi;
both routes are implemented, the second as a bracketed bisection so each
can check the other.  Transverse splittings, the effective cavity length
of Bragg mirrors, the planar diffraction-limited Q and a coherent
multi-mode |S21| synthesizer round out the module.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import bisect

from . import beam as beam_mod

__all__ = [
    "SolverError",
    "AutocollimationError",
    "ModeId",
    "MirrorModel",
    "ResonatorSpec",
    "Resonance",
    "ResonanceSet",
    "resonance_frequency",
    "round_trip_phase_solve",
    "transverse_splitting",
    "free_spectral_range",
    "diffraction_q",
    "thickness_shift",
    "mirror_effective_length",
    "calibrate_mirror_reflectivity",
    "synthesize_s21",
]

APERTURE_RULES = ("full_2w", "apodized_const_w0", "custom")


class SolverError(RuntimeError):
    """The phase-condition root solver failed to bracket or converge."""


class AutocollimationError(ZeroDivisionError):
    """gamma = -1 makes the parabolic diffraction model singular.

    At autocollimation the beam neither spreads nor focuses to parabolic
    order and the planar diffraction Q diverges; there is no finite answer
    to return.
    """


@dataclass(frozen=True)
class ModeId:
    """Longitudinal index n >= 1 and transverse order l >= 0."""

    n: int
    l: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("longitudinal index n must be >= 1")
        if self.l < 0:
            raise ValueError("transverse order l must be >= 0")


@dataclass(frozen=True)
class MirrorModel:
    """Distributed Bragg mirror reduced to a lumped effective plane.

    Attributes:
        reflectivity_per_period: r_s in (0, 1).
        stopband_center: Design frequency of the mirror, Hz.
        pitch: Strip period of the grating, m.
    """

    reflectivity_per_period: float
    stopband_center: float
    pitch: float

    def __post_init__(self):
        if not 0.0 < self.reflectivity_per_period < 1.0:
            raise ValueError("reflectivity_per_period must be in (0, 1)")
        if self.stopband_center <= 0:
            raise ValueError("stopband_center must be positive")
        if self.pitch <= 0:
            raise ValueError("pitch must be positive")

    @property
    def penetration_length(self):
        """L_p = pitch / (4 r_s), the lumped mirror recession."""
        return self.pitch / (4.0 * self.reflectivity_per_period)

    @property
    def stopband_width(self):
        """Full stopband width, Delta f = f0 * 2 r_s / pi."""
        return self.stopband_center * 2.0 * self.reflectivity_per_period / math.pi


@dataclass(frozen=True)
class ResonatorSpec:
    """Cavity geometry and electrode counts.

    Attributes:
        effective_length: Mirror-to-mirror effective length d, m.
        pitch: Electrode period along the axis, m (lambda/2).
        idt_pairs: Finger pairs per IDT.
        mirror_fingers: Strips per mirror.
        aperture_rule: One of ``full_2w``, ``apodized_const_w0``, ``custom``.
        port_coupling: Per-port dimensionless external-coupling scales.
    """

    effective_length: float
    pitch: float
    idt_pairs: int
    mirror_fingers: int
    aperture_rule: str = "full_2w"
    port_coupling: tuple = (1.0, 1.0)

    def __post_init__(self):
        if self.effective_length <= 0:
            raise ValueError("effective_length must be positive")
        if self.pitch <= 0:
            raise ValueError("pitch must be positive")
        if self.idt_pairs < 1 or self.mirror_fingers < 1:
            raise ValueError("electrode counts must be at least 1")
        if self.aperture_rule not in APERTURE_RULES:
            raise ValueError(f"aperture_rule must be one of {APERTURE_RULES}")
        if len(self.port_coupling) != 2 or any(s <= 0 for s in self.port_coupling):
            raise ValueError("port_coupling must be two positive scales")


def resonance_frequency(spec, params, vp, mode):
    """Closed-form resonance frequency of (n, l), Hz."""
    if vp <= 0:
        raise ValueError("phase velocity must be positive")
    d = spec.effective_length
    gouy = math.atan(d / (2.0 * params.rayleigh_length))
    return (vp / (2.0 * d)) * (mode.n + (2.0 / math.pi) * (mode.l + 0.5) * gouy)


def round_trip_phase_solve(spec, params, vp, mode, rtol=1e-12):
    """Solve k(f) d - 2 psi_G(d/2) = n pi for f by bisection.

    Deliberately independent of :func:`resonance_frequency` apart from the
    bracket centre; serves as its numerical cross-check.
    """
    if vp <= 0:
        raise ValueError("phase velocity must be positive")
    d = spec.effective_length
    gouy = 2.0 * float(beam_mod.gouy_phase(params, mode.l, 0.5 * d))
    target = mode.n * math.pi

    def residual(f):
        return 2.0 * math.pi * f * d / vp - gouy - target

    estimate = resonance_frequency(spec, params, vp, mode)
    lo, hi = 0.5 * estimate, 1.5 * estimate
    if residual(lo) * residual(hi) > 0:
        raise SolverError(
            f"no sign change in bracket [{lo:.6g}, {hi:.6g}] Hz for mode "
            f"(n={mode.n}, l={mode.l})"
        )
    return bisect(residual, lo, hi, xtol=1e-6, rtol=rtol)


def transverse_splitting(spec, params, vp, l):
    """Delta f_{l0} = (v_p / 2d) (2 l / pi) arctan(d / (2 x_R)), Hz."""
    if vp <= 0:
        raise ValueError("phase velocity must be positive")
    if l < 0 or l != int(l):
        raise ValueError("mode order must be a non-negative integer")
    d = spec.effective_length
    gouy = math.atan(d / (2.0 * params.rayleigh_length))
    return (vp / (2.0 * d)) * (2.0 * l / math.pi) * gouy


def free_spectral_range(vp, effective_length):
    """Fundamental spacing v_p / (2 d), Hz.  Diagnostic helper."""
    if vp <= 0 or effective_length <= 0:
        raise ValueError("vp and effective_length must be positive")
    return vp / (2.0 * effective_length)


def diffraction_q(gamma, full_width, wavelength):
    """Planar-cavity diffraction-limited Q, (5 pi / |1 + gamma|) (W/lambda)^2.

    Raises:
        AutocollimationError: At gamma = -1, where beam spreading vanishes
            to parabolic order and the model diverges.
    """
    if full_width <= 0:
        raise ValueError("full_width must be positive")
    if wavelength <= 0:
        raise ValueError("wavelength must be positive")
    if 1.0 + gamma == 0.0:
        raise AutocollimationError(
            "gamma = -1 (autocollimation): parabolic diffraction Q diverges"
        )
    return 5.0 * math.pi / abs(1.0 + gamma) * (full_width / wavelength) ** 2


def thickness_shift(sensitivity, delta_thickness):
    """Linear frequency shift of a film-thickness change, Hz.

    ``sensitivity`` in Hz/m (negative for a mass-loading film), and
    ``delta_thickness`` in m.
    """
    return sensitivity * delta_thickness


def mirror_effective_length(mirror, physical_gap, pitch):
    """d = gap + 2 L_p with L_p = pitch / (4 r_s)."""
    if physical_gap <= 0:
        raise ValueError("physical_gap must be positive")
    if pitch <= 0:
        raise ValueError("pitch must be positive")
    return physical_gap + 2.0 * pitch / (4.0 * mirror.reflectivity_per_period)


def calibrate_mirror_reflectivity(target_length, physical_gap, pitch):
    """Invert the mirror model: r_s that maps gap -> target effective length."""
    if pitch <= 0:
        raise ValueError("pitch must be positive")
    if not 0 < physical_gap < target_length:
        raise ValueError("need 0 < physical_gap < target_length")
    penetration = 0.5 * (target_length - physical_gap)
    r_s = pitch / (4.0 * penetration)
    if not 0.0 < r_s < 1.0:
        raise ValueError(
            f"calibrated reflectivity {r_s:.4g} outside (0, 1); "
            "gap too close to the target length"
        )
    return r_s


@dataclass(frozen=True)
class Resonance:
    """One cavity mode with its loss budget."""

    mode: ModeId
    frequency: float
    q_internal: float
    q_external_port1: float
    q_external_port2: float

    def __post_init__(self):
        if self.frequency <= 0:
            raise ValueError("frequency must be positive")
        for q in (self.q_internal, self.q_external_port1, self.q_external_port2):
            if not q > 0:
                raise ValueError("quality factors must be positive (inf allowed)")


class ResonanceSet:
    """Frequency-sorted collection of :class:`Resonance` entries."""

    def __init__(self, entries):
        entries = list(entries)
        if not entries:
            raise ValueError("resonance set must not be empty")
        self.entries = sorted(entries, key=lambda e: e.frequency)

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)


def synthesize_s21(resonances, freq_grid):
    """Coherent two-port transmission over a frequency grid.

    Each mode contributes sqrt(kappa_1 kappa_2) / (i 2 pi (f - f0) +
    kappa_tot / 2) with kappa_ext,j = 2 pi f0 / Q_ext,j and the internal
    rate from Q_in; contributions add as complex amplitudes.
    """
    f = np.asarray(freq_grid, dtype=float)
    if f.ndim != 1 or f.size == 0:
        raise ValueError("freq_grid must be a non-empty 1-d array")
    if f.size > 1 and not np.all(np.diff(f) > 0):
        raise ValueError("freq_grid must be strictly increasing")
    s21 = np.zeros(f.shape, dtype=complex)
    for res in resonances:
        omega0 = 2.0 * math.pi * res.frequency
        k1 = omega0 / res.q_external_port1
        k2 = omega0 / res.q_external_port2
        ktot = omega0 / res.q_internal + k1 + k2
        s21 += math.sqrt(k1 * k2) / (1j * 2.0 * math.pi * (f - res.frequency)
                                     + 0.5 * ktot)
    return s21
