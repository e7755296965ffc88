"""Matplotlib figure rendering for the CLI reports."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np
from matplotlib.collections import PolyCollection

_DPI = 150

_KIND_COLORS = {
    "idt_finger_port1": "#1f77b4",
    "idt_finger_port2": "#d62728",
    "mirror_strip": "#7f7f7f",
}


def save_spectrum_plot(path, freqs, s21, resonances=None):
    """|S21| in dB versus frequency, with resonance markers."""
    fig, ax = plt.subplots(figsize=(8, 4.5))
    db = 20.0 * np.log10(np.maximum(np.abs(s21), 1e-300))
    ax.plot(freqs / 1e9, db, lw=0.8, color="C0")
    if resonances is not None:
        for res in resonances:
            ax.axvline(res.frequency / 1e9, color="0.8", lw=0.5, zorder=0)
            ax.annotate(f"({res.mode.n},{res.mode.l})",
                        (res.frequency / 1e9, db.max() + 2),
                        fontsize=7, ha="center")
    ax.set_xlabel("frequency (GHz)")
    ax.set_ylabel(r"$|S_{21}|$ (dB)")
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)


def save_sweep_plot(path, rows):
    """Transverse splitting versus waist, one curve per mode order."""
    rows = list(rows)
    orders = sorted({l for _, _, l in rows})
    fig, ax = plt.subplots(figsize=(6, 4.5))
    for l in orders:
        pts = [(w0, df) for w0, df, ll in rows if ll == l]
        pts.sort()
        w = np.array([p[0] for p in pts])
        df = np.array([p[1] for p in pts])
        ax.plot(w * 1e6, df / 1e6, marker="o", ms=3, label=f"l = {l}")
    ax.set_xlabel(r"waist $w_0$ ($\mu$m)")
    ax.set_ylabel(r"$\Delta f_{l0}$ (MHz)")
    ax.legend(fontsize=8)
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)


def save_layout_plot(path, electrode_set):
    """Filled electrode polygons in micrometres."""
    fig, ax = plt.subplots(figsize=(9, 5))
    for kind, color in _KIND_COLORS.items():
        polys = [p.vertices * 1e6 for p in electrode_set.polygons
                 if p.kind == kind]
        if polys:
            ax.add_collection(PolyCollection(polys, facecolors=color,
                                             edgecolors="none", label=kind))
    xmin, ymin, xmax, ymax = electrode_set.bounds()
    ax.set_xlim(xmin * 1e6 * 1.05, xmax * 1e6 * 1.05)
    ax.set_ylim(ymin * 1e6 * 1.1, ymax * 1e6 * 1.1)
    ax.set_aspect("equal")
    ax.set_xlabel(r"x ($\mu$m)")
    ax.set_ylabel(r"y ($\mu$m)")
    ax.legend(fontsize=8, loc="upper right")
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)


def save_field_plots(magnitude_path, phase_path, field_map):
    """Magnitude and phase rasters of a complex field map."""
    extent = [field_map.x_grid[0] * 1e6, field_map.x_grid[-1] * 1e6,
              field_map.y_grid[0] * 1e6, field_map.y_grid[-1] * 1e6]
    for path, data, cmap, label in (
        (magnitude_path, np.abs(field_map.values), "inferno", "|u|"),
        (phase_path, np.angle(field_map.values), "twilight", "arg u (rad)"),
    ):
        fig, ax = plt.subplots(figsize=(7, 4.5))
        im = ax.imshow(data, origin="lower", aspect="auto", extent=extent,
                       cmap=cmap, interpolation="nearest")
        fig.colorbar(im, ax=ax, label=label)
        ax.set_xlabel(r"x ($\mu$m)")
        ax.set_ylabel(r"y ($\mu$m)")
        fig.tight_layout()
        fig.savefig(path, dpi=_DPI)
        plt.close(fig)


def save_fit_plot(path, y, data, fit):
    """Amplitude slice with the fitted Gaussian overlaid."""
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(y * 1e6, data, ".", ms=4, color="C0", label="scan")
    dense = np.linspace(y[0], y[-1], 400)
    model = (fit.amplitude_scale
             * np.exp(-((dense - fit.center_y) / fit.w0_est) ** 2)
             + fit.offset)
    ax.plot(dense * 1e6, model, color="C3", lw=1.2,
            label=rf"fit: $w_0$ = {fit.w0_est * 1e6:.3f} $\mu$m")
    ax.set_xlabel(r"y ($\mu$m)")
    ax.set_ylabel("amplitude (arb.)")
    ax.legend(fontsize=8)
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)
