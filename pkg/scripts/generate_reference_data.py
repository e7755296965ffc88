#!/usr/bin/env python3
"""Regenerate the checked-in reference data under data/.

Everything written here is SYNTHETIC.  The velocity tables are cosine
series calibrated to the headline observables of a ZnO-on-sapphire film
(Love-branch gamma = -0.45, Love/Rayleigh coupling ratio 4.2, on-axis
free velocity 4300 m/s); the scan file is a rendered l = 0 mode with
seeded amplitude noise at SNR 10.  Run from the repository root:

    python scripts/generate_reference_data.py
"""

import json
import os
import sys

import numpy as np

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from sawfocus import imaging, material
from sawfocus.beam import BeamParams

DATA_DIR = os.path.join(os.path.dirname(__file__), "..", "data")

DEVICE_CONFIG = {
    "schema_version": 1,
    "material_csv": "love_profile.csv",
    "boundary": "free",
    "phase_velocity_mps": None,
    "wavelength_m": 2.0e-6,
    "waist_m": 2.0e-6,
    "effective_length_m": 33.6e-6,
    "mirror_physical_gap_m": 29.0e-6,
    "mirror_reflectivity": None,
    "pitch_m": 1.0e-6,
    "idt_pairs": 5,
    "mirror_fingers": 200,
    "idt_mirror_gap_periods": 1,
    "aperture_rule": "full_2w",
    "q_internal": 2000.0,
    "q_external_base": 8000.0,
    "port_coupling": [1.0, 1.0],
    "longitudinal_indices": [33, 34],
    "transverse_indices": [2, 4, 8, 12],
    "frequency_start_hz": 2.05e9,
    "frequency_stop_hz": 2.90e9,
    "frequency_step_hz": 5.0e4,
    "thickness_sensitivity_hz_per_m": -4.5e14,
    "out_dir": "out",
}

SCAN_SEED = 7
SCAN_NOISE = 0.1  # amplitude sigma relative to peak, i.e. SNR 10


def main():
    os.makedirs(DATA_DIR, exist_ok=True)

    love = material.synthetic_love_profile()
    love.to_csv(os.path.join(DATA_DIR, "love_profile.csv"))
    rayleigh = material.synthetic_rayleigh_profile()
    rayleigh.to_csv(os.path.join(DATA_DIR, "rayleigh_profile.csv"))

    with open(os.path.join(DATA_DIR, "device_config.json"), "w",
              encoding="utf-8") as fh:
        json.dump(DEVICE_CONFIG, fh, indent=2)
        fh.write("\n")

    params = BeamParams(wavelength=2.0e-6, waist=2.0e-6)
    x_grid = np.arange(-8, 9) * 0.25e-6
    y_grid = np.arange(-24, 25) * 0.25e-6
    scan = imaging.make_synthetic_scan(params, love, 0, x_grid, y_grid,
                                       noise=SCAN_NOISE, seed=SCAN_SEED)
    imaging.save_scan(scan, os.path.join(DATA_DIR, "synthetic_scan_l0.csv"))

    for name in ("love_profile.csv", "rayleigh_profile.csv",
                 "device_config.json", "synthetic_scan_l0.csv"):
        print(os.path.join(DATA_DIR, name))


if __name__ == "__main__":
    main()
