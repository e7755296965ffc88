"""Design and analysis toolkit for focusing surface-acoustic-wave resonators.

Submodules:

* :mod:`sawfocus.material`   angle-dependent velocities, coupling, gamma
* :mod:`sawfocus.beam`       2-d Hermite-Gauss beam fields
* :mod:`sawfocus.resonator`  resonance ladders, Q budgets, |S21| synthesis
* :mod:`sawfocus.transducer` aperture-overlap conversion efficiencies
* :mod:`sawfocus.layout`     curved electrode geometry and SVG export
* :mod:`sawfocus.imaging`    scan loading, waist fits, mode classification
* :mod:`sawfocus.config`     shared JSON device description
* :mod:`sawfocus.cli`        command-line entry points
"""

from .beam import BeamParams, ComplexFieldMap
from .material import AnisotropyProfile, IsotropicProfile
from .resonator import MirrorModel, ModeId, Resonance, ResonanceSet, ResonatorSpec
from .transducer import TransducerSpec

__version__ = "0.1.0"

__all__ = [
    "AnisotropyProfile",
    "IsotropicProfile",
    "BeamParams",
    "ComplexFieldMap",
    "ModeId",
    "MirrorModel",
    "Resonance",
    "ResonanceSet",
    "ResonatorSpec",
    "TransducerSpec",
    "__version__",
]
