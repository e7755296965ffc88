"""Shared fixtures: the shipped device inputs and a few standard profiles."""

import pathlib

import pytest

from sawfocus.beam import BeamParams
from sawfocus.material import AnisotropyProfile, IsotropicProfile
from sawfocus.resonator import ResonatorSpec

REPO_ROOT = pathlib.Path(__file__).resolve().parent.parent
DATA_DIR = REPO_ROOT / "data"
GOLDEN_DIR = pathlib.Path(__file__).resolve().parent / "golden"

# Device parameters used throughout: lambda = 2 um, w0 = 2 um, d = 33.6 um,
# pitch 1 um, 5 IDT pairs per port, 200 mirror strips per mirror.
WAVELENGTH = 2e-6
WAIST = 2e-6
EFFECTIVE_LENGTH = 33.6e-6
PITCH = 1e-6
IDT_PAIRS = 5
MIRROR_FINGERS = 200
PHASE_VELOCITY = 4300.0


@pytest.fixture(scope="session")
def love_profile():
    return AnisotropyProfile.from_csv(DATA_DIR / "love_profile.csv")


@pytest.fixture(scope="session")
def rayleigh_profile():
    return AnisotropyProfile.from_csv(DATA_DIR / "rayleigh_profile.csv")


@pytest.fixture(scope="session")
def isotropic():
    return IsotropicProfile(4000.0)


@pytest.fixture()
def device_beam():
    return BeamParams(WAVELENGTH, WAIST)


@pytest.fixture()
def device_spec():
    return ResonatorSpec(
        effective_length=EFFECTIVE_LENGTH,
        pitch=PITCH,
        idt_pairs=IDT_PAIRS,
        mirror_fingers=MIRROR_FINGERS,
    )


@pytest.fixture(scope="session")
def device_config_path():
    return DATA_DIR / "device_config.json"
