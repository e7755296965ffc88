"""Coupling between straight-summed IDT apertures and Hermite-Gauss modes.

An interdigital transducer integrates the surface displacement coherently
across its overlap aperture [-L, L].  The conversion efficiency into mode
l is the aperture-averaged coherent pickup against the mode's full power,

    E_l = eta * |integral_{-L}^{L} u_l(0, y) dy|^2
          / (2 L * integral_{-inf}^{inf} u_l(0, y)^2 dy),

with the closed-form norm  integral u_l^2 = w0 sqrt(pi/2) 2^l l!  at the
waist.  Odd orders vanish by parity.  Restricting the aperture (apodizing)
to +-w0 cancels the l = 2 pickup almost perfectly, which is the knob the
layout module uses to clean up the spectrum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import beam as beam_mod

__all__ = [
    "QuadratureError",
    "TransducerSpec",
    "adaptive_simpson",
    "conversion_efficiency",
    "efficiency_ladder",
    "external_coupling_scale",
]

# Panels are accepted at 15*tol (classic Richardson factor) or at the
# float64 summation noise of the integrand, whichever is larger; a pure
# absolute tolerance below roundoff would recurse forever on high-order
# integrands whose magnitude reaches ~1e8.
_NOISE_FACTOR = 64.0 * np.finfo(float).eps


class QuadratureError(RuntimeError):
    """Adaptive refinement hit the depth limit before the tolerance."""


@dataclass(frozen=True)
class TransducerSpec:
    """Aperture half-length, overall efficiency scale, finger-pair count."""

    half_aperture: float
    eta: float = 1.0
    pairs: int = 1

    def __post_init__(self):
        if self.half_aperture <= 0:
            raise ValueError("half_aperture must be positive")
        if self.eta <= 0:
            raise ValueError("eta must be positive")
        if self.pairs < 1:
            raise ValueError("pairs must be at least 1")


def _simpson(fa, fm, fb, h):
    return h / 6.0 * (fa + 4.0 * fm + fb)


def _refine(fn, a, fa, m, fm, b, fb, whole, tol, noise, depth):
    lm = 0.5 * (a + m)
    rm = 0.5 * (m + b)
    flm = fn(lm)
    frm = fn(rm)
    left = _simpson(fa, flm, fm, m - a)
    right = _simpson(fm, frm, fb, b - m)
    delta = left + right - whole
    if abs(delta) <= 15.0 * max(tol, noise * (b - a)):
        return left + right + delta / 15.0
    if depth <= 0:
        raise QuadratureError(
            f"adaptive Simpson stalled at depth limit; achieved "
            f"|error| ~ {abs(delta) / 15.0:.3e} on [{a:.6g}, {b:.6g}]"
        )
    return (_refine(fn, a, fa, lm, flm, m, fm, left, 0.5 * tol, noise, depth - 1)
            + _refine(fn, m, fm, rm, frm, b, fb, right, 0.5 * tol, noise, depth - 1))


def adaptive_simpson(fn, a, b, atol=1e-12, max_depth=48):
    """Integrate fn over [a, b] by adaptive Simpson refinement.

    ``atol`` is an absolute tolerance, floored per panel at the float64
    noise level of the sampled integrand scale.  Raises
    :class:`QuadratureError` if the depth limit is hit first.
    """
    if not b > a:
        raise ValueError("need b > a")
    if atol <= 0:
        raise ValueError("atol must be positive")
    m = 0.5 * (a + b)
    fa, fm, fb = fn(a), fn(m), fn(b)
    scale = max(abs(fa), abs(fm), abs(fb), 1e-300)
    noise = _NOISE_FACTOR * scale
    whole = _simpson(fa, fm, fb, b - a)
    return _refine(fn, a, fa, m, fm, b, fb, whole, atol, noise, max_depth)


def _waist_profile(params, l):
    """Real transverse profile of u_l along the waist line x = 0."""
    w0 = params.waist
    root2 = math.sqrt(2.0)

    def fn(y):
        s = y / w0
        return float(beam_mod.hermite(l, root2 * s)) * math.exp(-s * s)

    return fn


def conversion_efficiency(params, l, half_aperture, eta=1.0, atol=1e-12):
    """Aperture-overlap conversion efficiency E_l for mode order l.

    Args:
        params: Beam geometry; only the waist matters here.
        l: Mode order, non-negative integer.
        half_aperture: L > 0, metres.
        eta: Dimensionless overall efficiency scale.
        atol: Quadrature tolerance passed to :func:`adaptive_simpson`.
    """
    if l < 0 or l != int(l):
        raise ValueError("mode order must be a non-negative integer")
    if half_aperture <= 0:
        raise ValueError("half_aperture must be positive")
    if eta <= 0:
        raise ValueError("eta must be positive")
    l = int(l)
    w0 = params.waist
    fn = _waist_profile(params, l)
    # Integrate in units of w0 so the tolerance means the same thing for
    # every waist; the w0 factor is restored analytically below.
    a = half_aperture / w0
    coherent = w0 * adaptive_simpson(lambda s: fn(s * w0), -a, a, atol=atol)
    norm = w0 * math.sqrt(math.pi / 2.0) * (2.0 ** l) * math.factorial(l)
    return eta * coherent ** 2 / (2.0 * half_aperture * norm)


def efficiency_ladder(params, l_max, half_aperture, eta=1.0):
    """E_l / E_0 for l = 0 .. l_max; odd entries are exactly zero."""
    if l_max < 0 or l_max != int(l_max):
        raise ValueError("l_max must be a non-negative integer")
    e0 = conversion_efficiency(params, 0, half_aperture, eta=eta)
    out = np.zeros(int(l_max) + 1)
    out[0] = 1.0
    for l in range(1, int(l_max) + 1):
        out[l] = conversion_efficiency(params, l, half_aperture, eta=eta) / e0
    return out


def external_coupling_scale(efficiency_ratio, base_q_ext):
    """Per-mode external Q: base Q_ext divided by the efficiency ratio.

    A zero ratio (uncoupled mode) maps to an infinite Q_ext sentinel.
    """
    if efficiency_ratio < 0:
        raise ValueError("efficiency ratio must be non-negative")
    if base_q_ext <= 0:
        raise ValueError("base_q_ext must be positive")
    if efficiency_ratio == 0:
        return math.inf
    return base_q_ext / efficiency_ratio
