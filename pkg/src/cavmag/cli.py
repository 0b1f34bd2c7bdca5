"""Command-line interface tying the simulation and analysis pipelines.

Subcommands: simulate-map, simulate-pulse, msm-table, identify,
fit-params, rescale, render.  Exit codes: 0 success, 2 usage error,
3 configuration/validation error, 4 compute error.  Failures print a
single ``error: ...`` line on stderr.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

import numpy as np

from . import dataio, dispersion, modeid, presets, timedomain, transmission
from .config import ConfigError, RunConfig, load_config
from .params import MsmIndex

log = logging.getLogger("cavmag")

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_CONFIG = 3
EXIT_COMPUTE = 4


def _load(args) -> RunConfig:
    return load_config(args.config)


def _emit(args, summary: dict) -> None:
    if args.json:
        print(json.dumps(summary, sort_keys=True))
    else:
        for key, value in summary.items():
            log.info("%s: %s", key, value)


def _cmd_simulate_map(args) -> int:
    config = _load(args)
    out = args.output or config.output.map_csv or "map.csv"
    spectral_map = transmission.build_map(
        config.cavity, config.material, config.mode_set(),
        config.field_sweep.axis(), config.freq_sweep.axis(),
        noise_level=config.noise.level,
        seed=args.seed if args.seed is not None else config.noise.seed)
    dataio.write_map_csv(spectral_map, out)
    summary = {"map_csv": out,
               "fields": int(spectral_map.field_axis.size),
               "freqs": int(spectral_map.freq_axis.size)}
    render = args.render or config.output.heatmap
    if render:
        dataio.render_heatmap(spectral_map, config.output.palette, render)
        summary["heatmap"] = render
    _emit(args, summary)
    return EXIT_OK


def _cmd_simulate_pulse(args) -> int:
    config = _load(args)
    if args.map:
        out = args.output or config.output.raster_csv or "pulse_map.csv"
        raster = timedomain.time_field_map(
            config.cavity, config.material, config.mode_set(),
            config.field_sweep.axis(), config.pulse)
        dataio.write_map_csv(raster, out)
        _emit(args, {"raster_csv": out,
                     "fields": int(raster.field_axis.size),
                     "samples": int(raster.freq_axis.size)})
        return EXIT_OK
    field = args.field
    if field is None:
        field = dispersion.kittel_field(config.cavity.fc, config.material)
    entries = [
        transmission.MagnonModeEntry(
            idx, dispersion.mode_frequency(idx, field, config.material),
            gam, g)
        for idx, g, gam in config.mode_set()
    ]
    trace = timedomain.simulate_pulse(config.cavity, entries, config.pulse)
    out = args.output or config.output.trace_csv or "pulse_trace.csv"
    dataio.write_trace_csv(trace.time_us, trace.envelope, out)
    _emit(args, {"trace_csv": out, "field_T": field,
                 "samples": int(trace.time_us.size)})
    return EXIT_OK


def _cmd_msm_table(args) -> int:
    config = _load(args)
    families = tuple(int(x) for x in args.families.split(","))
    table = dispersion.msm_table(args.f, config.material, args.mmax, families)
    if args.output:
        dataio.write_msm_table_csv(table, args.output)
        _emit(args, {"table_csv": args.output, "rows": len(table)})
    else:
        dataio.write_msm_table_csv(table, sys.stdout)
    return EXIT_OK


def _cmd_identify(args) -> int:
    config = _load(args)
    spectral_map = dataio.load_map_csv(args.input)
    probe = args.probe_f if args.probe_f is not None else config.cavity.fc
    trace = transmission.fixed_frequency_trace(spectral_map, probe)
    fields = transmission.find_anticrossings(
        trace, config.detect.dip_prominence_dB)
    if fields.size == 0:
        raise modeid.IdentificationError(
            f"no anticrossing dips in the trace at {probe} GHz")
    result = modeid.identify_fields(fields, probe,
                                    tolerance=config.detect.assign_tolerance)
    out = args.output or config.output.assignments_csv or "assignments.csv"
    ordered = sorted(result.assignments, key=lambda a: a.field_T)
    dataio.write_assignments_csv(ordered, out)
    fit_path = args.fit_json or config.output.fit_json or "fit.json"
    dataio.write_fit_json(result.fit, fit_path)
    _emit(args, {
        "assignments_csv": out,
        "fit_json": fit_path,
        "anticrossings": int(fields.size),
        "assigned": len(result.assignments),
        "unassigned": len(result.unassigned),
        "gamma_gyro_GHzperT": result.fit.gamma_gyro,
        "Ms_T": result.fit.Ms,
    })
    return EXIT_OK


def _cmd_fit_params(args) -> int:
    points = dataio.load_fit_points_csv(args.input)
    fit = modeid.fit_material_params(points, args.fc)
    payload = {
        "gamma_gyro_GHzperT": fit.gamma_gyro,
        "Ms_T": fit.Ms,
        "rms_residual_T": fit.rms_residual_T,
    }
    if args.output:
        dataio.write_fit_json(fit, args.output)
        _emit(args, {"fit_json": args.output, **payload})
    else:
        print(json.dumps(payload, sort_keys=True))
    return EXIT_OK


def _cmd_rescale(args) -> int:
    config = _load(args)
    spectral_map = dataio.load_map_csv(args.input)
    rescaled = modeid.build_rescaled_map(
        spectral_map, config.cavity.fc, config.material.gamma_gyro,
        config.material.Ms, args.family)
    uniform = modeid.resample_uniform(rescaled)
    out = args.output or "rescaled.csv"
    dataio.write_map_csv(uniform, out)
    _emit(args, {"rescaled_csv": out, "family": args.family,
                 "coord_min": float(uniform.field_axis[0]),
                 "coord_max": float(uniform.field_axis[-1])})
    return EXIT_OK


def _cmd_render(args) -> int:
    spectral_map = dataio.load_map_csv(args.input)
    dataio.render_heatmap(spectral_map, args.palette, args.output)
    _emit(args, {"heatmap": args.output, "palette": args.palette})
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cavmag",
        description="Magnon-photon strong coupling simulation and analysis")
    parser.add_argument("--quiet", action="store_true",
                        help="log warnings and errors only")
    parser.add_argument("--json", action="store_true",
                        help="print the run summary as one JSON line")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_config(p):
        p.add_argument("-c", "--config", default="te101_table1.json",
                       help="config file path or bundled preset name")

    p = sub.add_parser("simulate-map", help="synthesize a field-frequency map")
    add_config(p)
    p.add_argument("-o", "--output", help="map CSV path")
    p.add_argument("--render", help="also render a heatmap to this path")
    p.add_argument("--seed", type=int, help="override the noise seed")
    p.set_defaults(func=_cmd_simulate_map)

    p = sub.add_parser("simulate-pulse", help="integrate the pulsed response")
    add_config(p)
    p.add_argument("-o", "--output", help="trace or raster CSV path")
    p.add_argument("--field", type=float,
                   help="bias field in T (default: uniform-mode resonance)")
    p.add_argument("--map", action="store_true",
                   help="sweep the config field grid into a time raster")
    p.set_defaults(func=_cmd_simulate_pulse)

    p = sub.add_parser("msm-table", help="closed-form mode resonance table")
    add_config(p)
    p.add_argument("--f", type=float, default=presets.TABLE1_PROBE_GHZ,
                   help="probe frequency in GHz")
    p.add_argument("--mmax", type=int, default=9)
    p.add_argument("--families", default="0",
                   help="comma-separated families from {0,1}")
    p.add_argument("-o", "--output", help="CSV path (default: stdout)")
    p.set_defaults(func=_cmd_msm_table)

    p = sub.add_parser("identify",
                       help="detect anticrossings in a map and label modes")
    add_config(p)
    p.add_argument("-i", "--input", required=True, help="map CSV path")
    p.add_argument("-o", "--output", help="assignments CSV path")
    p.add_argument("--fit-json", help="fit JSON path")
    p.add_argument("--probe-f", type=float,
                   help="trace frequency in GHz (default: cavity fc)")
    p.set_defaults(func=_cmd_identify)

    p = sub.add_parser("fit-params",
                       help="least-squares material parameters from labeled fields")
    p.add_argument("-i", "--input", required=True,
                   help="CSV with columns m,family,H_T")
    p.add_argument("--fc", type=float, required=True,
                   help="probe frequency in GHz")
    p.add_argument("-o", "--output", help="fit JSON path (default: stdout)")
    p.set_defaults(func=_cmd_fit_params)

    p = sub.add_parser("rescale",
                       help="re-index a map on the mode-index coordinate")
    add_config(p)
    p.add_argument("-i", "--input", required=True, help="map CSV path")
    p.add_argument("-o", "--output", help="rescaled CSV path")
    p.add_argument("--family", choices=list(modeid.FAMILIES), default="mm")
    p.set_defaults(func=_cmd_rescale)

    p = sub.add_parser("render", help="render a map CSV to a P6 heatmap")
    p.add_argument("-i", "--input", required=True, help="map CSV path")
    p.add_argument("-o", "--output", required=True, help="pixmap path")
    p.add_argument("--palette", default="thermal",
                   choices=sorted(dataio.PALETTES))
    p.set_defaults(func=_cmd_render)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_USAGE

    logging.basicConfig(
        level=logging.WARNING if args.quiet else logging.INFO,
        format="%(levelname)s %(message)s", stream=sys.stderr)

    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ValueError, RuntimeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_COMPUTE


if __name__ == "__main__":
    sys.exit(main())
