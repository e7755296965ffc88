"""Command-line entry points.

Five subcommands, all driven by the shared JSON device description:

* ``spectrum``  resonance table, synthesized |S21| trace, coupling ladder
* ``sweep``     transverse splitting versus waist
* ``layout``    curved electrode geometry as SVG + JSON
* ``field``     sampled mode displacement maps
* ``fit``       waist fit (and optional classification) of a scan file

Every command writes delimited data plus rendered PNG figures into the
output directory.  Exit codes: 0 success, 2 invalid configuration or
input, 3 numerical or generation failure.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from . import beam as beam_mod
from . import imaging, layout, plots, transducer
from . import resonator as resonator_mod
from .config import ConfigError, load_device_config
from .material import ProfileError

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3

_INPUT_ERRORS = (ConfigError, ProfileError, imaging.ScanFormatError,
                 FileNotFoundError, ValueError)
_NUMERICAL_ERRORS = (resonator_mod.SolverError, transducer.QuadratureError,
                     imaging.FitError, imaging.ClassificationError,
                     layout.LayoutError, ZeroDivisionError,
                     FloatingPointError)


def _write_csv(path, header, rows):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(header + "\n")
        for row in rows:
            fh.write(",".join(str(int(v)) if isinstance(v, (int, np.integer))
                              else repr(float(v)) for v in row) + "\n")
    print(path)


def _write_json(path, doc):
    import json
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")
    print(path)


def _outdir(cfg, args):
    out = args.out or cfg.out_dir
    os.makedirs(out, exist_ok=True)
    return out


def _parse_modes(text):
    try:
        modes = [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise ValueError(f"--modes expects comma-separated integers, got {text!r}")
    if any(l < 0 for l in modes):
        raise ValueError("--modes entries must be >= 0")
    return modes


def _aperture_rule(cfg, args):
    return "apodized_const_w0" if args.apodized else cfg.aperture_rule


def cmd_spectrum(args):
    cfg = load_device_config(args.config)
    out = _outdir(cfg, args)
    params = cfg.beam()
    vp = cfg.phase_velocity()
    rule = _aperture_rule(cfg, args)
    half_aperture = params.waist if rule == "apodized_const_w0" else 2.0 * params.waist
    transverse = _parse_modes(args.modes) if args.modes else cfg.transverse_indices
    if any(l < 1 for l in transverse):
        raise ValueError("transverse mode orders must be >= 1")
    spec = cfg.resonator_spec(rule)

    l_max = max(transverse, default=0)
    ladder = transducer.efficiency_ladder(params, l_max, half_aperture)
    _write_csv(os.path.join(out, "efficiency_ladder.csv"),
               "l,efficiency_normalized",
               [(l, ladder[l]) for l in range(l_max + 1)])

    entries = []
    mode_ids = [resonator_mod.ModeId(n, 0) for n in cfg.longitudinal_indices]
    if cfg.longitudinal_indices:
        n_ref = max(cfg.longitudinal_indices)
        mode_ids += [resonator_mod.ModeId(n_ref, l) for l in sorted(transverse)]
    for mode in mode_ids:
        f = resonator_mod.resonance_frequency(spec, params, vp, mode)
        ratio = ladder[mode.l] if mode.l <= l_max else 0.0
        q1 = transducer.external_coupling_scale(
            ratio * spec.port_coupling[0], cfg.q_external_base)
        q2 = transducer.external_coupling_scale(
            ratio * spec.port_coupling[1], cfg.q_external_base)
        entries.append(resonator_mod.Resonance(mode, f, cfg.q_internal, q1, q2))

    if entries:
        rset = resonator_mod.ResonanceSet(entries)
        _write_csv(os.path.join(out, "resonances.csv"),
                   "n,l,freq_hz,q_in,q_ext1,q_ext2",
                   [(r.mode.n, r.mode.l, r.frequency, r.q_internal,
                     r.q_external_port1, r.q_external_port2) for r in rset])
        freqs = cfg.frequency_grid()
        s21 = resonator_mod.synthesize_s21(rset, freqs)
        _write_csv(os.path.join(out, "s21.csv"),
                   "freq_hz,re_s21,im_s21,abs_s21_db",
                   [(f, v.real, v.imag, 20.0 * np.log10(abs(v)))
                    for f, v in zip(freqs, s21)])
        if not args.no_plot:
            plots.save_spectrum_plot(os.path.join(out, "spectrum.png"),
                                     freqs, s21, rset)
            print(os.path.join(out, "spectrum.png"))
    else:
        _write_csv(os.path.join(out, "resonances.csv"),
                   "n,l,freq_hz,q_in,q_ext1,q_ext2", [])
        _write_csv(os.path.join(out, "s21.csv"),
                   "freq_hz,re_s21,im_s21,abs_s21_db", [])
    return EXIT_OK


def cmd_sweep(args):
    cfg = load_device_config(args.config)
    out = _outdir(cfg, args)
    vp = args.vp if args.vp else cfg.phase_velocity()
    spec = cfg.resonator_spec()
    modes = _parse_modes(args.modes) if args.modes else cfg.transverse_indices
    n_steps = int(round((args.w0_stop - args.w0_start) / args.w0_step))
    waists = args.w0_start + args.w0_step * np.arange(n_steps + 1)
    rows = []
    for w0 in waists:
        params = beam_mod.BeamParams(cfg.wavelength_m, float(w0))
        for l in modes:
            df = resonator_mod.transverse_splitting(spec, params, vp, l)
            rows.append((float(w0), df, l))
    _write_csv(os.path.join(out, "splitting_sweep.csv"),
               "w0_m,delta_f_hz,l", rows)
    if not args.no_plot:
        plots.save_sweep_plot(os.path.join(out, "sweep.png"), rows)
        print(os.path.join(out, "sweep.png"))
    return EXIT_OK


def cmd_layout(args):
    cfg = load_device_config(args.config)
    if cfg.mirror_physical_gap_m is None:
        raise ConfigError("layout needs mirror_physical_gap_m in the config")
    out = _outdir(cfg, args)
    rule = _aperture_rule(cfg, args)
    eset = layout.generate_device(
        cfg.resonator_spec(rule), cfg.beam(), cfg.profile(),
        cfg.mirror_physical_gap_m,
        idt_mirror_gap_periods=cfg.idt_mirror_gap_periods,
        edge_samples=args.edge_samples,
    )
    svg_path = os.path.join(out, "device.svg")
    with open(svg_path, "w", encoding="utf-8") as fh:
        fh.write(layout.export_svg(eset, scale=args.svg_scale))
    print(svg_path)
    _write_json(os.path.join(out, "device.json"),
                layout.electrode_set_to_json(eset))
    if not args.no_plot:
        plots.save_layout_plot(os.path.join(out, "layout.png"), eset)
        print(os.path.join(out, "layout.png"))
    return EXIT_OK


def cmd_field(args):
    cfg = load_device_config(args.config)
    out = _outdir(cfg, args)
    params = cfg.beam()
    x_span = args.x_span if args.x_span else cfg.effective_length_m
    y_span = args.y_span if args.y_span else 8.0 * params.waist
    x_grid = np.linspace(-0.5 * x_span, 0.5 * x_span, args.nx)
    y_grid = np.linspace(-0.5 * y_span, 0.5 * y_span, args.ny)
    fmap = beam_mod.render_field(params, cfg.profile(), args.mode,
                                 x_grid, y_grid, normalize=not args.raw)
    csv_path = os.path.join(out, "field.csv")
    fmap.to_csv(csv_path)
    print(csv_path)
    json_path = os.path.join(out, "field.json")
    fmap.to_json(json_path)
    print(json_path)
    if not args.no_plot:
        mag = os.path.join(out, "field_magnitude.png")
        ph = os.path.join(out, "field_phase.png")
        plots.save_field_plots(mag, ph, fmap)
        print(mag)
        print(ph)
    return EXIT_OK


def cmd_fit(args):
    cfg = load_device_config(args.config)
    out = _outdir(cfg, args)
    scan = imaging.load_scan(args.scan)
    fit = imaging.fit_waist(scan, x_slice=args.x_slice)
    report = {
        "scan_file": os.path.abspath(args.scan),
        "x_slice_m": args.x_slice,
        "fit": fit.to_dict(),
        "config_echo": {
            "config_file": cfg.path,
            "wavelength_m": cfg.wavelength_m,
            "waist_m": cfg.waist_m,
            "material_csv": cfg.material_csv,
        },
    }
    if args.classify:
        cls = imaging.classify_mode(scan, cfg.beam(), cfg.profile(),
                                    l_max=args.l_max)
        report["classification"] = {
            "l_best": cls.l_best,
            "projections": cls.projections.tolist(),
            "dominance": cls.dominance,
            "spurious": cls.spurious,
        }
    _write_json(os.path.join(out, "fit_report.json"), report)
    if not args.no_plot:
        ix = int(np.argmin(np.abs(scan.x_grid - args.x_slice)))
        plots.save_fit_plot(os.path.join(out, "fit.png"),
                            scan.y_grid, scan.amplitude[:, ix], fit)
        print(os.path.join(out, "fit.png"))
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="sawfocus",
        description="Design and analysis of focusing SAW resonators.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", required=True, help="device JSON file")
        p.add_argument("--out", default=None, help="output directory")
        p.add_argument("--no-plot", action="store_true",
                       help="skip PNG rendering")

    p = sub.add_parser("spectrum", help="resonance table and |S21| trace")
    common(p)
    p.add_argument("--apodized", action="store_true",
                   help="use the apodized (+-w0) IDT aperture")
    p.add_argument("--modes", default=None,
                   help="comma-separated transverse orders override")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("sweep", help="transverse splitting vs waist")
    common(p)
    p.add_argument("--w0-start", type=float, default=2.0e-6)
    p.add_argument("--w0-stop", type=float, default=10.0e-6)
    p.add_argument("--w0-step", type=float, default=0.5e-6)
    p.add_argument("--modes", default=None,
                   help="comma-separated transverse orders")
    p.add_argument("--vp", type=float, default=None,
                   help="phase velocity override, m/s")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("layout", help="curved electrode geometry")
    common(p)
    p.add_argument("--apodized", action="store_true",
                   help="use the apodized (+-w0) IDT aperture")
    p.add_argument("--edge-samples", type=int, default=64)
    p.add_argument("--svg-scale", type=float, default=1e6,
                   help="SVG pixels per metre")
    p.set_defaults(func=cmd_layout)

    p = sub.add_parser("field", help="sampled mode displacement map")
    common(p)
    p.add_argument("--mode", type=int, default=0, help="transverse order l")
    p.add_argument("--x-span", type=float, default=None)
    p.add_argument("--y-span", type=float, default=None)
    p.add_argument("--nx", type=int, default=201)
    p.add_argument("--ny", type=int, default=161)
    p.add_argument("--raw", action="store_true",
                   help="skip peak normalization")
    p.set_defaults(func=cmd_field)

    p = sub.add_parser("fit", help="waist fit of a scan file")
    common(p)
    p.add_argument("--scan", required=True, help="scan CSV file")
    p.add_argument("--x-slice", type=float, default=0.0)
    p.add_argument("--classify", action="store_true",
                   help="also classify the mode order")
    p.add_argument("--l-max", type=int, default=12)
    p.set_defaults(func=cmd_fit)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _NUMERICAL_ERRORS as exc:
        print(f"sawfocus {args.command}: numerical failure: {exc}",
              file=sys.stderr)
        return EXIT_NUMERICAL
    except _INPUT_ERRORS as exc:
        print(f"sawfocus {args.command}: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
