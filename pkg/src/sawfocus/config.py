"""Loading and validation of the shared JSON device description.

One schema-versioned JSON file describes a device end to end: material
table, beam geometry, cavity length (given directly, or derived from the
physical mirror gap and per-strip reflectivity), electrode counts, loss
budget, and the modes and frequency grid to synthesize.  All numeric
fields carry SI units in their names.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field

import numpy as np

from . import material as material_mod
from . import beam as beam_mod
from . import resonator as resonator_mod

__all__ = ["ConfigError", "DeviceConfig", "load_device_config"]

SCHEMA_VERSION = 1

_KNOWN_KEYS = {
    "schema_version", "material_csv", "boundary", "phase_velocity_mps",
    "wavelength_m", "waist_m", "effective_length_m", "mirror_physical_gap_m",
    "mirror_reflectivity", "pitch_m", "idt_pairs", "mirror_fingers",
    "idt_mirror_gap_periods", "aperture_rule", "q_internal",
    "q_external_base", "port_coupling", "longitudinal_indices",
    "transverse_indices", "frequency_start_hz", "frequency_stop_hz",
    "frequency_step_hz", "thickness_sensitivity_hz_per_m", "out_dir",
}

_REQUIRED_KEYS = {
    "schema_version", "material_csv", "wavelength_m", "waist_m", "pitch_m",
    "idt_pairs", "mirror_fingers", "q_internal", "q_external_base",
    "longitudinal_indices", "transverse_indices",
}


class ConfigError(ValueError):
    """The device description is missing, malformed, or inconsistent."""


def _positive(doc, key, cls=float):
    v = doc[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError(f"{key}: expected a number, got {v!r}")
    v = cls(v)
    if v <= 0:
        raise ConfigError(f"{key}: must be positive, got {v!r}")
    return v


@dataclass
class DeviceConfig:
    """Validated device description with derived quantities resolved."""

    path: str
    material_csv: str
    boundary: str
    phase_velocity_mps: float
    wavelength_m: float
    waist_m: float
    effective_length_m: float
    mirror_physical_gap_m: float
    mirror_reflectivity: float
    pitch_m: float
    idt_pairs: int
    mirror_fingers: int
    idt_mirror_gap_periods: int
    aperture_rule: str
    q_internal: float
    q_external_base: float
    port_coupling: tuple
    longitudinal_indices: list
    transverse_indices: list
    frequency_start_hz: float
    frequency_stop_hz: float
    frequency_step_hz: float
    thickness_sensitivity_hz_per_m: float
    out_dir: str
    _profile: object = field(default=None, repr=False)

    def profile(self):
        if self._profile is None:
            self._profile = material_mod.AnisotropyProfile.from_csv(self.material_csv)
        return self._profile

    def beam(self):
        return beam_mod.BeamParams(self.wavelength_m, self.waist_m)

    def phase_velocity(self):
        """Configured override, or the on-axis material velocity."""
        if self.phase_velocity_mps is not None:
            return self.phase_velocity_mps
        return material_mod.phase_velocity(self.profile(), 0.0, self.boundary)

    def resonator_spec(self, aperture_rule=None):
        return resonator_mod.ResonatorSpec(
            effective_length=self.effective_length_m,
            pitch=self.pitch_m,
            idt_pairs=self.idt_pairs,
            mirror_fingers=self.mirror_fingers,
            aperture_rule=aperture_rule or self.aperture_rule,
            port_coupling=self.port_coupling,
        )

    def mirror_model(self):
        f0 = self.phase_velocity() / self.wavelength_m
        return resonator_mod.MirrorModel(
            reflectivity_per_period=self.mirror_reflectivity,
            stopband_center=f0,
            pitch=self.pitch_m,
        )

    def frequency_grid(self):
        n = int(math.floor((self.frequency_stop_hz - self.frequency_start_hz)
                           / self.frequency_step_hz + 0.5)) + 1
        return self.frequency_start_hz + self.frequency_step_hz * np.arange(n)


def load_device_config(path):
    """Parse and validate a device JSON file.

    Raises:
        ConfigError: On unreadable files, schema violations, missing
            referenced files, or inconsistent derived quantities.
    """
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise ConfigError(f"{path}: top level must be a JSON object")
    unknown = set(doc) - _KNOWN_KEYS
    if unknown:
        raise ConfigError(f"{path}: unknown keys {sorted(unknown)}")
    missing = _REQUIRED_KEYS - set(doc)
    if missing:
        raise ConfigError(f"{path}: missing required keys {sorted(missing)}")
    if doc["schema_version"] != SCHEMA_VERSION:
        raise ConfigError(
            f"{path}: schema_version {doc['schema_version']!r} not supported "
            f"(expected {SCHEMA_VERSION})"
        )

    base_dir = os.path.dirname(os.path.abspath(path))
    material_csv = os.path.normpath(os.path.join(base_dir, doc["material_csv"]))
    if not os.path.isfile(material_csv):
        raise ConfigError(f"{path}: material_csv not found: {material_csv}")

    boundary = doc.get("boundary", "free")
    if boundary not in ("free", "short"):
        raise ConfigError(f"boundary must be 'free' or 'short', got {boundary!r}")

    vp_override = doc.get("phase_velocity_mps")
    if vp_override is not None:
        if not isinstance(vp_override, (int, float)) or vp_override <= 0:
            raise ConfigError("phase_velocity_mps must be positive or null")
        vp_override = float(vp_override)

    wavelength = _positive(doc, "wavelength_m")
    waist = _positive(doc, "waist_m")
    pitch = _positive(doc, "pitch_m")
    if abs(pitch - wavelength / 2.0) > 1e-9 * wavelength:
        raise ConfigError(
            f"pitch_m {pitch!r} is not wavelength_m/2 = {wavelength / 2.0!r}"
        )
    idt_pairs = _positive(doc, "idt_pairs", int)
    mirror_fingers = _positive(doc, "mirror_fingers", int)
    gap_periods = doc.get("idt_mirror_gap_periods", 1)
    if not isinstance(gap_periods, int) or gap_periods < 0:
        raise ConfigError("idt_mirror_gap_periods must be an integer >= 0")

    aperture_rule = doc.get("aperture_rule", "full_2w")
    if aperture_rule not in resonator_mod.APERTURE_RULES:
        raise ConfigError(
            f"aperture_rule must be one of {resonator_mod.APERTURE_RULES}, "
            f"got {aperture_rule!r}"
        )

    q_internal = _positive(doc, "q_internal")
    q_external = _positive(doc, "q_external_base")
    port_coupling = doc.get("port_coupling", [1.0, 1.0])
    if (not isinstance(port_coupling, list) or len(port_coupling) != 2
            or any(not isinstance(s, (int, float)) or s <= 0
                   for s in port_coupling)):
        raise ConfigError("port_coupling must be two positive numbers")
    port_coupling = (float(port_coupling[0]), float(port_coupling[1]))

    longitudinal = doc["longitudinal_indices"]
    if (not isinstance(longitudinal, list)
            or any(not isinstance(n, int) or n < 1 for n in longitudinal)):
        raise ConfigError("longitudinal_indices must be integers >= 1")
    transverse = doc["transverse_indices"]
    if (not isinstance(transverse, list)
            or any(not isinstance(l, int) or l < 1 for l in transverse)):
        raise ConfigError("transverse_indices must be integers >= 1")

    # Cavity length: given directly, derived from the mirror model, or
    # both (in which case the per-strip reflectivity is calibrated).
    d = doc.get("effective_length_m")
    gap = doc.get("mirror_physical_gap_m")
    r_s = doc.get("mirror_reflectivity")
    if d is not None and (not isinstance(d, (int, float)) or d <= 0):
        raise ConfigError("effective_length_m must be positive or null")
    if gap is not None and (not isinstance(gap, (int, float)) or gap <= 0):
        raise ConfigError("mirror_physical_gap_m must be positive or null")
    if r_s is not None and not (isinstance(r_s, (int, float)) and 0 < r_s < 1):
        raise ConfigError("mirror_reflectivity must be in (0, 1) or null")
    try:
        if d is not None and gap is not None and r_s is None:
            r_s = resonator_mod.calibrate_mirror_reflectivity(d, gap, pitch)
        elif d is None and gap is not None and r_s is not None:
            mirror = resonator_mod.MirrorModel(r_s, 1.0, pitch)
            d = resonator_mod.mirror_effective_length(mirror, gap, pitch)
        elif d is not None and gap is not None and r_s is not None:
            raise ConfigError(
                "give at most two of effective_length_m, "
                "mirror_physical_gap_m, mirror_reflectivity"
            )
        elif d is None:
            raise ConfigError(
                "need effective_length_m, or mirror_physical_gap_m with "
                "mirror_reflectivity"
            )
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"mirror calibration failed: {exc}") from None

    f_start = _positive(doc, "frequency_start_hz") if "frequency_start_hz" in doc else 2.05e9
    f_stop = _positive(doc, "frequency_stop_hz") if "frequency_stop_hz" in doc else 2.90e9
    f_step = _positive(doc, "frequency_step_hz") if "frequency_step_hz" in doc else 5.0e4
    if f_stop <= f_start:
        raise ConfigError("frequency_stop_hz must exceed frequency_start_hz")

    sensitivity = doc.get("thickness_sensitivity_hz_per_m", 0.0)
    if not isinstance(sensitivity, (int, float)):
        raise ConfigError("thickness_sensitivity_hz_per_m must be a number")

    out_dir = doc.get("out_dir", "out")
    if not isinstance(out_dir, str) or not out_dir:
        raise ConfigError("out_dir must be a non-empty string")

    return DeviceConfig(
        path=os.path.abspath(path),
        material_csv=material_csv,
        boundary=boundary,
        phase_velocity_mps=vp_override,
        wavelength_m=wavelength,
        waist_m=waist,
        effective_length_m=float(d),
        mirror_physical_gap_m=None if gap is None else float(gap),
        mirror_reflectivity=None if r_s is None else float(r_s),
        pitch_m=pitch,
        idt_pairs=idt_pairs,
        mirror_fingers=mirror_fingers,
        idt_mirror_gap_periods=gap_periods,
        aperture_rule=aperture_rule,
        q_internal=q_internal,
        q_external_base=q_external,
        port_coupling=port_coupling,
        longitudinal_indices=sorted(longitudinal),
        transverse_indices=sorted(transverse),
        frequency_start_hz=f_start,
        frequency_stop_hz=f_stop,
        frequency_step_hz=f_step,
        thickness_sensitivity_hz_per_m=float(sensitivity),
        out_dir=out_dir,
    )
