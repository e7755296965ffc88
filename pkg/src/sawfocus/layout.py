"""Curved electrode layouts matched to the focused wavefronts.

Electrodes follow iso-phase parabolas x(y) = x0 - y^2 / (2 R_SAW(x0, theta))
so every finger rides a single wavefront of the focused beam.  Registration
against the standing wave puts IDT finger centres on antinodes (x = j
lambda/2) and mirror strip inner edges on nodes (odd multiples of
lambda/4).  Polygon edges are the governing curve offset by a constant
along x, which pins the on-axis electrode width and gap at exactly
lambda/4 and keeps every feature at or above the lithography floor.

Coordinates are metres, waist at the origin, propagation along x.  The
right IDT is port 2, the left IDT port 1; the whole set is mirror
symmetric about both axes.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import beam as beam_mod

__all__ = [
    "LayoutError",
    "KIND_IDT_PORT1",
    "KIND_IDT_PORT2",
    "KIND_MIRROR",
    "ElectrodePolygon",
    "ElectrodeSet",
    "isophase_curve",
    "generate_device",
    "export_svg",
    "electrode_set_to_json",
]

KIND_IDT_PORT1 = "idt_finger_port1"
KIND_IDT_PORT2 = "idt_finger_port2"
KIND_MIRROR = "mirror_strip"

_SVG_COLORS = {
    KIND_IDT_PORT1: "#1f77b4",
    KIND_IDT_PORT2: "#d62728",
    KIND_MIRROR: "#7f7f7f",
}


class LayoutError(RuntimeError):
    """Geometry cannot be generated: misregistration, overlap, or feature
    size below the lithography floor."""


@dataclass(frozen=True)
class ElectrodePolygon:
    """Closed polygon (implicitly closed; first vertex not repeated)."""

    kind: str
    vertices: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.vertices, dtype=float)
        if v.ndim != 2 or v.shape[1] != 2 or v.shape[0] < 3:
            raise ValueError("vertices must be an (N>=3, 2) array")
        object.__setattr__(self, "vertices", v)
        if self.signed_area() <= 0:
            raise ValueError("polygon must wind counter-clockwise with positive area")

    def signed_area(self):
        v = self.vertices
        x, y = v[:, 0], v[:, 1]
        return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))


@dataclass
class ElectrodeSet:
    """All polygons of a device plus the design numbers that produced them."""

    polygons: list
    metadata: dict = field(default_factory=dict)

    def bounds(self):
        """(xmin, ymin, xmax, ymax) over every vertex."""
        allv = np.vstack([p.vertices for p in self.polygons])
        return (float(allv[:, 0].min()), float(allv[:, 1].min()),
                float(allv[:, 0].max()), float(allv[:, 1].max()))

    def count(self, kind):
        return sum(1 for p in self.polygons if p.kind == kind)


def _symmetric_grid(half_span, samples):
    # Odd point count with an exact y -> -y mirror so the generated set is
    # bitwise symmetric about the x axis.
    n_half = max(int(samples) // 2 + 1, 2)
    ys = np.linspace(0.0, half_span, n_half)
    return np.concatenate([-ys[:0:-1], ys])


def isophase_curve(params, profile, x0, half_aperture, samples=65):
    """Sampled wavefront through (x0, 0): x(y) = x0 - y^2 / (2 R_SAW).

    Returns an (N, 2) polyline ordered by increasing y.  At x0 = 0 the
    wavefront is planar and the curve degenerates to a straight segment.
    """
    if half_aperture <= 0:
        raise ValueError("half_aperture must be positive")
    if samples < 3:
        raise ValueError("need at least 3 samples")
    y = _symmetric_grid(half_aperture, samples)
    if x0 == 0.0:
        x = np.zeros_like(y)
    else:
        r_saw = np.asarray(beam_mod.anisotropic_curvature(params, profile, x0, y))
        x = x0 - y ** 2 / (2.0 * r_saw)
    return np.column_stack([x, y])


@dataclass(frozen=True)
class _Plan:
    """One electrode before materialization: reference curve + x offsets."""

    kind: str
    x_ref: float
    off_in: float
    off_out: float
    half_aperture: float

    @property
    def interval(self):
        return (self.x_ref + self.off_in, self.x_ref + self.off_out)


def _plan_sag(plan, params, profile, y):
    if plan.x_ref == 0.0:
        return np.zeros_like(y)
    r_saw = np.asarray(beam_mod.anisotropic_curvature(params, profile, plan.x_ref, y))
    return y ** 2 / (2.0 * r_saw)


def _materialize(plan, params, profile, samples):
    y = _symmetric_grid(plan.half_aperture, samples)
    sag = _plan_sag(plan, params, profile, y)
    left = np.column_stack([plan.x_ref + plan.off_in - sag, y])
    right = np.column_stack([plan.x_ref + plan.off_out - sag, y])
    # Up the +x edge, back down the -x edge: counter-clockwise.
    vertices = np.vstack([right, left[::-1]])
    return ElectrodePolygon(plan.kind, vertices)


def _check_collisions(plans, params, profile, samples):
    ordered = sorted(plans, key=lambda p: p.interval[0])
    for a, b in zip(ordered, ordered[1:]):
        # On-axis interval test first; the sag test below covers the
        # curved tails, where neighbouring gaps only open further for
        # outward-decreasing curvature but a custom profile may not be
        # so kind.
        if b.interval[0] - a.interval[1] < -1e-12:
            raise LayoutError(
                f"electrodes overlap on axis: {a.kind} at x={a.x_ref:.6g} m "
                f"and {b.kind} at x={b.x_ref:.6g} m"
            )
        y_common = min(a.half_aperture, b.half_aperture)
        y = _symmetric_grid(y_common, samples)
        gap = ((b.x_ref + b.off_in - _plan_sag(b, params, profile, y))
               - (a.x_ref + a.off_out - _plan_sag(a, params, profile, y)))
        if np.min(gap) < -1e-12:
            raise LayoutError(
                f"curved edges intersect off axis: {a.kind} at "
                f"x={a.x_ref:.6g} m and {b.kind} at x={b.x_ref:.6g} m "
                f"(worst gap {np.min(gap):.3e} m)"
            )


def generate_device(spec, params, profile, physical_gap,
                    idt_mirror_gap_periods=1, edge_samples=64,
                    resolution=None, custom_aperture=None):
    """Build the full two-port electrode set for a focusing resonator.

    Args:
        spec: :class:`~sawfocus.resonator.ResonatorSpec`; ``spec.pitch``
            must equal lambda/2.
        params: Beam geometry (sets lambda, waist, apertures).
        profile: Velocity profile steering the anisotropic curvature.
        physical_gap: Mirror-inner-edge to mirror-inner-edge distance, m.
            Half of it must land on a node of the standing wave.
        idt_mirror_gap_periods: Idle periods between the outermost IDT
            finger and the mirror, >= 0.
        edge_samples: Samples per polygon edge (rounded up to odd).
        resolution: Lithography floor, m; defaults to lambda/4.
        custom_aperture: Callable x -> half-aperture, required when
            ``spec.aperture_rule == "custom"``.

    Raises:
        LayoutError: On misregistration, feature-size violation, or
            overlapping polygons of different kinds.
    """
    lam = params.wavelength
    width = lam / 4.0
    if resolution is None:
        resolution = lam / 4.0
    if abs(spec.pitch - lam / 2.0) > 1e-9 * lam:
        raise LayoutError(
            f"pitch {spec.pitch:.6g} m is not lambda/2 = {lam / 2.0:.6g} m"
        )
    if width < resolution * (1.0 - 1e-12):
        raise LayoutError(
            f"electrode width lambda/4 = {width:.6g} m is below the "
            f"lithography floor {resolution:.6g} m"
        )
    if physical_gap <= 0:
        raise LayoutError("physical_gap must be positive")
    if idt_mirror_gap_periods < 0:
        raise LayoutError("idt_mirror_gap_periods must be >= 0")
    if spec.aperture_rule == "custom" and custom_aperture is None:
        raise LayoutError("custom aperture rule needs a custom_aperture callable")

    x_mirror_inner = physical_gap / 2.0
    node_index = (x_mirror_inner - lam / 4.0) / (lam / 2.0)
    if abs(node_index - round(node_index)) > 1e-9:
        raise LayoutError(
            f"mirror inner edge x={x_mirror_inner:.6g} m does not sit on a "
            f"node of the lambda={lam:.6g} m standing wave"
        )

    def half_aperture(x_ref, is_idt):
        if spec.aperture_rule == "full_2w":
            a = 2.0 * float(beam_mod.beam_radius(params, x_ref))
        elif spec.aperture_rule == "apodized_const_w0":
            a = params.waist if is_idt else 2.0 * float(beam_mod.beam_radius(params, x_ref))
        else:
            a = float(custom_aperture(x_ref))
        if a <= 0:
            raise LayoutError(f"non-positive aperture at x={x_ref:.6g} m")
        return a

    plans = []
    n_fingers = 2 * spec.idt_pairs
    x_outer = x_mirror_inner - lam / 4.0 - idt_mirror_gap_periods * lam / 2.0
    for i in range(n_fingers):
        x_ref = x_outer - i * (lam / 2.0)
        plans.append(_Plan(KIND_IDT_PORT2, x_ref, -lam / 8.0, lam / 8.0,
                           half_aperture(x_ref, True)))
    for j in range(spec.mirror_fingers):
        x_ref = x_mirror_inner + j * (lam / 2.0)
        plans.append(_Plan(KIND_MIRROR, x_ref, 0.0, lam / 4.0,
                           half_aperture(x_ref, False)))
    # Left half: mirror image in x, with the IDT handed to port 1.
    mirrored = []
    for p in plans:
        kind = KIND_IDT_PORT1 if p.kind == KIND_IDT_PORT2 else p.kind
        mirrored.append(_Plan(kind, -p.x_ref, -p.off_out, -p.off_in,
                              p.half_aperture))
    plans.extend(mirrored)
    plans.sort(key=lambda p: p.interval[0])

    _check_collisions(plans, params, profile, edge_samples)
    polygons = [_materialize(p, params, profile, edge_samples) for p in plans]

    metadata = {
        "wavelength_m": lam,
        "waist_m": params.waist,
        "pitch_m": spec.pitch,
        "electrode_width_m": width,
        "aperture_rule": spec.aperture_rule,
        "idt_pairs": spec.idt_pairs,
        "mirror_fingers": spec.mirror_fingers,
        "physical_gap_m": physical_gap,
        "idt_mirror_gap_periods": idt_mirror_gap_periods,
        "resolution_m": resolution,
        "edge_samples": int(edge_samples),
        "counts": {
            KIND_IDT_PORT1: n_fingers,
            KIND_IDT_PORT2: n_fingers,
            KIND_MIRROR: 2 * spec.mirror_fingers,
        },
    }
    return ElectrodeSet(polygons, metadata)


def export_svg(electrode_set, scale=1e6):
    """Render the set as an SVG document string, ``scale`` pixels per metre.

    +y points up (mathematical orientation); one path per polygon, CSS
    class = electrode kind.  Output is deterministic for identical input.
    """
    if scale <= 0:
        raise ValueError("scale must be positive")
    xmin, ymin, xmax, ymax = electrode_set.bounds()
    margin = 0.02 * max(xmax - xmin, ymax - ymin, 1e-12)
    x0 = (xmin - margin) * scale
    y0 = -(ymax + margin) * scale
    w = (xmax - xmin + 2 * margin) * scale
    h = (ymax - ymin + 2 * margin) * scale
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" '
        f'viewBox="{x0:.4f} {y0:.4f} {w:.4f} {h:.4f}" '
        f'width="{w:.0f}" height="{h:.0f}" data-scale-px-per-m="{scale:g}">',
        "<style>",
    ]
    for kind, color in _SVG_COLORS.items():
        lines.append(f".{kind} {{ fill: {color}; stroke: none; }}")
    lines.append("</style>")
    for poly in electrode_set.polygons:
        pts = poly.vertices
        d = "M " + " L ".join(
            f"{x * scale:.4f},{-y * scale:.4f}" for x, y in pts
        ) + " Z"
        lines.append(f'<path class="{poly.kind}" d="{d}"/>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def electrode_set_to_json(electrode_set, path=None):
    """Serialize polygons and metadata; write to ``path`` when given."""
    doc = {
        "metadata": electrode_set.metadata,
        "polygons": [
            {"kind": p.kind, "vertices": p.vertices.tolist()}
            for p in electrode_set.polygons
        ],
    }
    if path is not None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(doc, fh, indent=2)
            fh.write("\n")
    return doc
