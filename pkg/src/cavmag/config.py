"""Run configuration: JSON loading, strict validation, defaults.

A run configuration bundles material, cavity, mode set, sweep grids,
pulse settings, detector thresholds, noise and output paths.  Loading
is strict: unknown keys are rejected and every validation error names
the offending dotted key.  An empty JSON object loads the full default
scenario (TE101 cavity with the bundled anticrossing mode table).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from . import presets
from .params import CavityModeParams, MaterialParams, SphereGeometry
from .timedomain import PulseSpec

__all__ = [
    "ConfigError",
    "SweepGrid",
    "FreqGrid",
    "ModeSpec",
    "DetectorSettings",
    "NoiseSettings",
    "OutputPaths",
    "RunConfig",
    "load_config",
    "loads_config",
    "dump_config",
    "bundled_config_path",
]


class ConfigError(ValueError):
    """Malformed or invalid run configuration; the message names the key."""


@dataclass(frozen=True)
class SweepGrid:
    """Uniform bias-field grid, tesla."""

    start_T: float
    stop_T: float
    step_T: float

    def axis(self) -> np.ndarray:
        n = int(round((self.stop_T - self.start_T) / self.step_T))
        return self.start_T + self.step_T * np.arange(n + 1)


@dataclass(frozen=True)
class FreqGrid:
    """Uniform probe-frequency grid around a center, GHz."""

    center_GHz: float
    span_MHz: float = presets.FREQ_SPAN_MHZ
    points: int = presets.FREQ_POINTS

    def axis(self) -> np.ndarray:
        half = 0.5 * self.span_MHz * 1e-3
        return np.linspace(self.center_GHz - half, self.center_GHz + half,
                           self.points)


@dataclass(frozen=True)
class ModeSpec:
    """One magnon mode entry of the simulated set."""

    n: int
    m: int
    g_MHz: float
    gamma_MHz: float


@dataclass(frozen=True)
class DetectorSettings:
    peak_prominence_dB: float = 3.0
    dip_prominence_dB: float = 1.0
    assign_tolerance: float = 0.3


@dataclass(frozen=True)
class NoiseSettings:
    level: float = 0.0
    seed: int = 0


@dataclass(frozen=True)
class OutputPaths:
    map_csv: str | None = None
    heatmap: str | None = None
    trace_csv: str | None = None
    raster_csv: str | None = None
    assignments_csv: str | None = None
    fit_json: str | None = None
    palette: str = "thermal"


@dataclass(frozen=True)
class RunConfig:
    material: MaterialParams
    sphere: SphereGeometry
    cavity: CavityModeParams
    modes: tuple[ModeSpec, ...]
    field_sweep: SweepGrid
    freq_sweep: FreqGrid
    pulse: PulseSpec
    detect: DetectorSettings = field(default_factory=DetectorSettings)
    noise: NoiseSettings = field(default_factory=NoiseSettings)
    output: OutputPaths = field(default_factory=OutputPaths)

    def mode_set(self):
        """Mode set in the (index, g, gamma) form the simulators take."""
        from .params import MsmIndex

        return [(MsmIndex(ms.n, ms.m), ms.g_MHz, ms.gamma_MHz)
                for ms in self.modes]


def _table1_modes() -> tuple[ModeSpec, ...]:
    return tuple(
        ModeSpec(r.index.n, r.index.m, r.g_MHz, r.gamma_MHz)
        for r in presets.TABLE1_RECORDS)


def _reject_unknown(section, allowed, where: str) -> None:
    if not isinstance(section, dict):
        raise ConfigError(f"{where} must be an object")
    unknown = set(section) - set(allowed)
    if unknown:
        raise ConfigError(f"unknown key {where}.{sorted(unknown)[0]}")


def _get_number(section: dict, key: str, where: str, default=None,
                positive: bool = False, negative: bool = False):
    if key not in section:
        if default is None:
            raise ConfigError(f"missing key {where}.{key}")
        return default
    value = section[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{where}.{key} must be a number")
    if positive and not value > 0:
        raise ConfigError(f"{where}.{key} must be strictly positive")
    if negative and not value < 0:
        raise ConfigError(f"{where}.{key} must be negative")
    return float(value)


def _parse_material(section) -> MaterialParams:
    if not isinstance(section, dict):
        raise ConfigError("material must be an object")
    if "preset" in section:
        _reject_unknown(section, {"preset"}, "material")
        name = section["preset"]
        if name not in presets.MATERIAL_PRESETS:
            raise ConfigError(
                f"material.preset {name!r} unknown; choose from "
                f"{sorted(presets.MATERIAL_PRESETS)}")
        return presets.MATERIAL_PRESETS[name]
    allowed = {"Ms", "gamma_gyro", "spin_density", "exchange_const",
               "default_linewidth"}
    _reject_unknown(section, allowed, "material")
    base = presets.YIG_TE101_FIT
    return MaterialParams(
        Ms=_get_number(section, "Ms", "material", base.Ms, positive=True),
        gamma_gyro=_get_number(section, "gamma_gyro", "material",
                               base.gamma_gyro, positive=True),
        spin_density=_get_number(section, "spin_density", "material",
                                 base.spin_density, positive=True),
        exchange_const=_get_number(section, "exchange_const", "material",
                                   base.exchange_const),
        default_linewidth=_get_number(section, "default_linewidth", "material",
                                      base.default_linewidth, positive=True),
    )


def _parse_cavity(section) -> CavityModeParams:
    if not isinstance(section, dict):
        raise ConfigError("cavity must be an object")
    if "preset" in section:
        _reject_unknown(section, {"preset"}, "cavity")
        name = section["preset"]
        if name not in presets.CAVITY_PRESETS:
            raise ConfigError(
                f"cavity.preset {name!r} unknown; choose from "
                f"{sorted(presets.CAVITY_PRESETS)}")
        return presets.CAVITY_PRESETS[name]
    _reject_unknown(section, {"fc", "Q_loaded", "insertion_loss_dB"}, "cavity")
    return CavityModeParams.from_loaded_q(
        _get_number(section, "fc", "cavity", positive=True),
        _get_number(section, "Q_loaded", "cavity", positive=True),
        _get_number(section, "insertion_loss_dB", "cavity", negative=True),
    )


def _parse_modes(section, mat: MaterialParams) -> tuple[ModeSpec, ...]:
    if isinstance(section, dict) and "preset" in section:
        _reject_unknown(section, {"preset"}, "modes")
        if section["preset"] != "table1":
            raise ConfigError(f"modes.preset {section['preset']!r} unknown")
        return _table1_modes()
    if isinstance(section, dict) and "auto" in section:
        _reject_unknown(section, {"auto"}, "modes")
        auto = section["auto"]
        _reject_unknown(auto, {"m_max", "families", "g_MHz", "gamma_MHz"},
                        "modes.auto")
        m_max = auto.get("m_max", 9)
        if not isinstance(m_max, int) or m_max < 1:
            raise ConfigError("modes.auto.m_max must be a positive integer")
        families = auto.get("families", [0])
        if not set(families) <= {0, 1}:
            raise ConfigError("modes.auto.families must be a subset of [0, 1]")
        g = _get_number(auto, "g_MHz", "modes.auto", 10.0, positive=True)
        gam = _get_number(auto, "gamma_MHz", "modes.auto",
                          mat.default_linewidth, positive=True)
        return tuple(
            ModeSpec(m + fam, m, g, gam)
            for fam in sorted(set(families)) for m in range(1, m_max + 1))
    if not isinstance(section, list):
        raise ConfigError("modes must be a list, a preset, or an auto block")
    out = []
    for i, entry in enumerate(section):
        where = f"modes[{i}]"
        if not isinstance(entry, dict):
            raise ConfigError(f"{where} must be an object")
        _reject_unknown(entry, {"n", "m", "g_MHz", "gamma_MHz"}, where)
        n, m = entry.get("n"), entry.get("m")
        if not isinstance(n, int) or not isinstance(m, int):
            raise ConfigError(f"{where}.n and {where}.m must be integers")
        out.append(ModeSpec(
            n, m,
            _get_number(entry, "g_MHz", where, positive=True),
            _get_number(entry, "gamma_MHz", where, mat.default_linewidth,
                        positive=True),
        ))
    return tuple(out)


def _parse_config(raw: dict) -> RunConfig:
    if not isinstance(raw, dict):
        raise ConfigError("configuration root must be a JSON object")
    allowed = {"material", "sphere", "cavity", "modes", "field_sweep",
               "freq_sweep", "pulse", "detect", "noise", "output"}
    _reject_unknown(raw, allowed, "config")

    material = _parse_material(raw.get("material", {}))

    sphere_sec = raw.get("sphere", {})
    _reject_unknown(sphere_sec, {"diameter"}, "sphere")
    sphere = SphereGeometry(
        _get_number(sphere_sec, "diameter", "sphere", 1e-3, positive=True))

    cavity = _parse_cavity(raw.get("cavity", {"preset": "TE101"}))
    modes = _parse_modes(raw.get("modes", {"preset": "table1"}), material)

    sweep_sec = raw.get("field_sweep", {})
    _reject_unknown(sweep_sec, {"start_T", "stop_T", "step_T"}, "field_sweep")
    lo, hi = (presets.FIELD_SWEEP_TE102_T if cavity.fc > 9.0
              else presets.FIELD_SWEEP_TE101_T)
    sweep = SweepGrid(
        _get_number(sweep_sec, "start_T", "field_sweep", lo, positive=True),
        _get_number(sweep_sec, "stop_T", "field_sweep", hi, positive=True),
        _get_number(sweep_sec, "step_T", "field_sweep", presets.FIELD_STEP_T,
                    positive=True),
    )
    if sweep.stop_T <= sweep.start_T:
        raise ConfigError("field_sweep.stop_T must exceed field_sweep.start_T")

    freq_sec = raw.get("freq_sweep", {})
    _reject_unknown(freq_sec, {"center_GHz", "span_MHz", "points"},
                    "freq_sweep")
    points = freq_sec.get("points", presets.FREQ_POINTS)
    if not isinstance(points, int) or points < 3:
        raise ConfigError("freq_sweep.points must be an integer >= 3")
    freq = FreqGrid(
        _get_number(freq_sec, "center_GHz", "freq_sweep", cavity.fc,
                    positive=True),
        _get_number(freq_sec, "span_MHz", "freq_sweep", presets.FREQ_SPAN_MHZ,
                    positive=True),
        points,
    )

    pulse_sec = raw.get("pulse", {})
    _reject_unknown(pulse_sec, {"duration_us", "drive_GHz", "amplitude",
                                "record_us", "sample_ps"}, "pulse")
    try:
        pulse = PulseSpec(
            _get_number(pulse_sec, "duration_us", "pulse", 3.0, positive=True),
            _get_number(pulse_sec, "drive_GHz", "pulse", cavity.fc,
                        positive=True),
            _get_number(pulse_sec, "amplitude", "pulse", 1.0, positive=True),
            _get_number(pulse_sec, "record_us", "pulse", 6.0, positive=True),
            _get_number(pulse_sec, "sample_ps", "pulse", 125.0, positive=True),
        )
    except ValueError as exc:
        raise ConfigError(f"pulse: {exc}") from exc

    detect_sec = raw.get("detect", {})
    _reject_unknown(detect_sec, {"peak_prominence_dB", "dip_prominence_dB",
                                 "assign_tolerance"}, "detect")
    tol = _get_number(detect_sec, "assign_tolerance", "detect", 0.3,
                      positive=True)
    if not tol < 0.5:
        raise ConfigError("detect.assign_tolerance must be below 0.5")
    detect = DetectorSettings(
        _get_number(detect_sec, "peak_prominence_dB", "detect", 3.0,
                    positive=True),
        _get_number(detect_sec, "dip_prominence_dB", "detect", 1.0,
                    positive=True),
        tol,
    )

    noise_sec = raw.get("noise", {})
    _reject_unknown(noise_sec, {"level", "seed"}, "noise")
    level = _get_number(noise_sec, "level", "noise", 0.0)
    if level < 0:
        raise ConfigError("noise.level must be non-negative")
    seed = noise_sec.get("seed", 0)
    if not isinstance(seed, int):
        raise ConfigError("noise.seed must be an integer")
    noise = NoiseSettings(level, seed)

    out_sec = raw.get("output", {})
    allowed_out = {"map_csv", "heatmap", "trace_csv", "raster_csv",
                   "assignments_csv", "fit_json", "palette"}
    _reject_unknown(out_sec, allowed_out, "output")
    for key in allowed_out:
        if key in out_sec and not isinstance(out_sec[key], str):
            raise ConfigError(f"output.{key} must be a string")
    output = OutputPaths(**{k: out_sec[k] for k in out_sec})

    return RunConfig(material, sphere, cavity, modes, sweep, freq, pulse,
                     detect, noise, output)


def loads_config(text: str) -> RunConfig:
    """Parse a configuration from a JSON string."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON: {exc}") from exc
    return _parse_config(raw)


def load_config(path) -> RunConfig:
    """Load and validate a configuration file.

    `path` may be a filesystem path or the bare name of a bundled
    preset configuration (e.g. ``te101_table1.json``).
    """
    p = Path(path)
    if not p.exists():
        bundled = bundled_config_path(p.name)
        if bundled is None:
            raise ConfigError(f"config file not found: {path}")
        p = bundled
    return loads_config(p.read_text(encoding="utf-8"))


def bundled_config_path(name: str) -> Path | None:
    """Path of a bundled preset configuration, or None."""
    ref = resources.files("cavmag").joinpath("presets", name)
    with resources.as_file(ref) as p:
        return p if p.is_file() else None


def dump_config(config: RunConfig) -> dict:
    """Plain-dict form of a configuration; loads back to an equal one."""
    return {
        "material": {
            "Ms": config.material.Ms,
            "gamma_gyro": config.material.gamma_gyro,
            "spin_density": config.material.spin_density,
            "exchange_const": config.material.exchange_const,
            "default_linewidth": config.material.default_linewidth,
        },
        "sphere": {"diameter": config.sphere.diameter},
        "cavity": {
            "fc": config.cavity.fc,
            "Q_loaded": config.cavity.Q_loaded,
            "insertion_loss_dB": config.cavity.insertion_loss_dB,
        },
        "modes": [
            {"n": ms.n, "m": ms.m, "g_MHz": ms.g_MHz, "gamma_MHz": ms.gamma_MHz}
            for ms in config.modes
        ],
        "field_sweep": {
            "start_T": config.field_sweep.start_T,
            "stop_T": config.field_sweep.stop_T,
            "step_T": config.field_sweep.step_T,
        },
        "freq_sweep": {
            "center_GHz": config.freq_sweep.center_GHz,
            "span_MHz": config.freq_sweep.span_MHz,
            "points": config.freq_sweep.points,
        },
        "pulse": {
            "duration_us": config.pulse.duration_us,
            "drive_GHz": config.pulse.drive_GHz,
            "amplitude": config.pulse.amplitude,
            "record_us": config.pulse.record_us,
            "sample_ps": config.pulse.sample_ps,
        },
        "detect": {
            "peak_prominence_dB": config.detect.peak_prominence_dB,
            "dip_prominence_dB": config.detect.dip_prominence_dB,
            "assign_tolerance": config.detect.assign_tolerance,
        },
        "noise": {"level": config.noise.level, "seed": config.noise.seed},
        "output": {
            k: v for k, v in vars(config.output).items() if v is not None
        },
    }
