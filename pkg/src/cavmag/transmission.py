"""Multi-mode input-output transmission model and spectral-map tooling.

The cavity couples to any number of magnon modes; the transmitted
amplitude at angular probe frequency w is

    T(w) = kappa_c / ( j(w - w_c) - (2 kappa_c + kappa_int)/2
                       + sum_i |g_i|^2 / (-gamma_i/2 + j(w - w_i)) )

with all rates angular inside the implementation and /2pi MHz at the
interface.  On top of the pointwise model this module builds 2D
field-frequency maps, extracts fixed-frequency traces, and detects
peaks, splittings and anticrossing fields.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.signal import find_peaks as _scipy_find_peaks

from .dispersion import mode_frequency
from .params import CavityModeParams, MaterialParams, MsmIndex

__all__ = [
    "PeakCountError",
    "OutOfAxisError",
    "MagnonModeEntry",
    "SpectralMap",
    "Peak",
    "PeakSet",
    "SplittingResult",
    "FieldTrace",
    "transmission_at",
    "amplitude_db",
    "build_map",
    "fixed_frequency_trace",
    "model_trace",
    "find_peaks",
    "splitting_to_g",
    "find_anticrossings",
]

TWO_PI = 2.0 * math.pi

# Linear amplitudes below this floor are clamped before taking dB.
_DB_FLOOR = 1e-30


class PeakCountError(ValueError):
    """Operation requires a specific number of peaks."""


class OutOfAxisError(ValueError):
    """Requested coordinate lies outside a map axis."""


@dataclass(frozen=True)
class MagnonModeEntry:
    """One magnon mode as seen by the transmission model at a fixed field."""

    index: MsmIndex
    f_GHz: float
    gamma_MHz: float
    g_MHz: float

    def __post_init__(self) -> None:
        if not self.gamma_MHz > 0:
            raise ValueError("gamma_MHz must be strictly positive")
        if self.g_MHz < 0:
            raise ValueError("g_MHz must be non-negative")


@dataclass(frozen=True, eq=False)
class SpectralMap:
    """Rectangular amplitude grid over (row axis x column axis).

    The canonical use is bias field (rows, tesla) by probe frequency
    (columns, GHz) with amplitude in dB, but the same container carries
    time rasters (columns in us) and rescaled index-coordinate maps;
    the axis names record which.  Rows are the outer dimension.
    """

    field_axis: np.ndarray
    freq_axis: np.ndarray
    amplitude: np.ndarray
    row_name: str = "H_T"
    col_name: str = "f_GHz"
    value_name: str = "amp_dB"

    def __post_init__(self) -> None:
        fa = np.asarray(self.field_axis, dtype=float)
        qa = np.asarray(self.freq_axis, dtype=float)
        amp = np.asarray(self.amplitude, dtype=float)
        if fa.ndim != 1 or qa.ndim != 1:
            raise ValueError("axes must be one-dimensional")
        if np.any(np.diff(fa) <= 0) or np.any(np.diff(qa) <= 0):
            raise ValueError("axes must be strictly increasing")
        if amp.shape != (fa.size, qa.size):
            raise ValueError(
                f"amplitude shape {amp.shape} does not match axes "
                f"({fa.size}, {qa.size})")
        object.__setattr__(self, "field_axis", fa)
        object.__setattr__(self, "freq_axis", qa)
        object.__setattr__(self, "amplitude", amp)


@dataclass(frozen=True)
class Peak:
    """A strict local maximum of a spectrum, vertex-refined."""

    frequency_GHz: float
    amplitude_dB: float


@dataclass(frozen=True)
class PeakSet:
    """Peaks of one spectrum, sorted by frequency."""

    peaks: tuple[Peak, ...]

    def __len__(self) -> int:
        return len(self.peaks)

    def __iter__(self):
        return iter(self.peaks)


@dataclass(frozen=True)
class SplittingResult:
    """Peak separation of a hybridized doublet.

    `separation_MHz` is the raw frequency mismatch between the two
    peaks; `g_MHz` stores half of it, the convention under which the
    hybrid branches sit at f_c +/- g.  Both are kept so either
    convention stays auditable downstream.
    """

    separation_MHz: float
    g_MHz: float


@dataclass(frozen=True, eq=False)
class FieldTrace:
    """Amplitude versus bias field at one fixed probe frequency."""

    field_T: np.ndarray
    amp_dB: np.ndarray
    f_GHz: float


def transmission_at(f, cavity: CavityModeParams, magnons) -> complex | np.ndarray:
    """Complex transmission amplitude at probe frequency f (GHz).

    Accepts a scalar or an array of frequencies.  The denominator
    cannot vanish for positive dampings, so the model is total; the
    on-resonance bare-cavity magnitude is 2*kappa_c/kappa, i.e. the
    insertion loss.
    """
    f_arr = np.asarray(f, dtype=float)
    w = TWO_PI * f_arr * 1e3  # angular MHz
    wc = TWO_PI * cavity.fc * 1e3
    kc = TWO_PI * cavity.kappa_c
    kint = TWO_PI * cavity.kappa_int
    den = 1j * (w - wc) - 0.5 * (2.0 * kc + kint)
    for mode in magnons:
        wi = TWO_PI * mode.f_GHz * 1e3
        g = TWO_PI * mode.g_MHz
        gam = TWO_PI * mode.gamma_MHz
        den = den + g * g / (-0.5 * gam + 1j * (w - wi))
    t = kc / den
    return t if f_arr.ndim else complex(t)


def amplitude_db(t) -> np.ndarray:
    """20*log10|T| with a tiny floor so silent cells stay finite."""
    return 20.0 * np.log10(np.maximum(np.abs(t), _DB_FLOOR))


def build_map(cavity: CavityModeParams, mat: MaterialParams, mode_set,
              field_grid, freq_grid, noise_level: float = 0.0,
              seed: int = 0) -> SpectralMap:
    """Synthesize the field-frequency transmission map in dB.

    `mode_set` is an iterable of (MsmIndex, g_MHz, gamma_MHz); each
    mode's frequency is recomputed at every field point from the
    closed-form dispersion, so the map shows one avoided crossing per
    mode wherever its branch meets the cavity.

    Optional zero-mean Gaussian noise (`noise_level`, linear amplitude
    units) is added before conversion to dB; it is seeded and off by
    default, existing purely to exercise detector robustness.  Rows are
    independent, evaluated in deterministic order.
    """
    field_grid = np.asarray(field_grid, dtype=float)
    freq_grid = np.asarray(freq_grid, dtype=float)
    mode_set = [(idx, float(g), float(gam)) for idx, g, gam in mode_set]
    rng = np.random.default_rng(seed) if noise_level > 0.0 else None

    amp = np.empty((field_grid.size, freq_grid.size))
    ceiling = 2.0 * cavity.kappa_c / cavity.kappa if cavity.kappa > 0 else 1.0
    for i, h in enumerate(field_grid):
        entries = [
            MagnonModeEntry(idx, mode_frequency(idx, float(h), mat), gam, g)
            for idx, g, gam in mode_set
        ]
        lin = np.abs(transmission_at(freq_grid, cavity, entries))
        if rng is None and np.max(lin, initial=0.0) > ceiling * (1.0 + 1e-9):
            raise RuntimeError("passivity bound violated in generated map")
        if rng is not None:
            lin = lin + rng.normal(0.0, noise_level, size=lin.shape)
        amp[i] = amplitude_db(lin)
    return SpectralMap(field_grid, freq_grid, amp)


def fixed_frequency_trace(spectral_map: SpectralMap, f0: float) -> FieldTrace:
    """Trace of the map along its nearest frequency column to f0."""
    qa = spectral_map.freq_axis
    if not qa[0] <= f0 <= qa[-1]:
        raise OutOfAxisError(
            f"f0 = {f0} outside the map frequency axis "
            f"[{qa[0]:.6g}, {qa[-1]:.6g}]")
    j = int(np.argmin(np.abs(qa - f0)))
    return FieldTrace(spectral_map.field_axis, spectral_map.amplitude[:, j],
                      float(qa[j]))


def model_trace(cavity: CavityModeParams, mat: MaterialParams, mode_set,
                field_grid, f0: float) -> FieldTrace:
    """Direct model evaluation of the fixed-frequency trace at f0."""
    field_grid = np.asarray(field_grid, dtype=float)
    amp = np.empty(field_grid.size)
    for i, h in enumerate(field_grid):
        entries = [
            MagnonModeEntry(idx, mode_frequency(idx, float(h), mat), float(gam),
                            float(g))
            for idx, g, gam in mode_set
        ]
        amp[i] = amplitude_db(transmission_at(f0, cavity, entries))
    return FieldTrace(field_grid, amp, f0)


def _parabolic_vertex(x0, x1, x2, y0, y1, y2) -> tuple[float, float]:
    """Vertex of the quadratic through three points; falls back to x1."""
    denom = (x0 - x1) * (x0 - x2) * (x1 - x2)
    if denom == 0.0:
        return x1, y1
    a = (x2 * (y1 - y0) + x1 * (y0 - y2) + x0 * (y2 - y1)) / denom
    b = (x2 * x2 * (y0 - y1) + x1 * x1 * (y2 - y0) + x0 * x0 * (y1 - y2)) / denom
    if a == 0.0:
        return x1, y1
    xv = -b / (2.0 * a)
    c = y1 - a * x1 * x1 - b * x1
    return xv, a * xv * xv + b * xv + c


def find_peaks(freq_axis, amp_db, prominence_dB: float = 3.0) -> PeakSet:
    """Strict local maxima with at least the given topographic prominence.

    Peak frequencies are refined by the vertex of the parabola through
    the maximum sample and its two neighbors, which places clean peaks
    well inside one grid step.
    """
    x = np.asarray(freq_axis, dtype=float)
    y = np.asarray(amp_db, dtype=float)
    if x.size == 0:
        raise ValueError("empty spectrum")
    idx, _ = _scipy_find_peaks(y, prominence=prominence_dB)
    peaks = []
    for i in idx:
        xv, yv = _parabolic_vertex(x[i - 1], x[i], x[i + 1],
                                   y[i - 1], y[i], y[i + 1])
        peaks.append(Peak(float(xv), float(yv)))
    peaks.sort(key=lambda p: p.frequency_GHz)
    return PeakSet(tuple(peaks))


def splitting_to_g(peaks: PeakSet) -> SplittingResult:
    """Coupling estimate from a two-peak hybridized spectrum.

    Requires exactly two peaks; returns the raw separation in MHz and
    its half as g/2pi.
    """
    if len(peaks) != 2:
        raise PeakCountError(f"need exactly 2 peaks, got {len(peaks)}")
    lo, hi = peaks.peaks
    separation = (hi.frequency_GHz - lo.frequency_GHz) * 1e3
    return SplittingResult(separation, 0.5 * separation)


def find_anticrossings(trace: FieldTrace, prominence_dB: float = 1.0) -> np.ndarray:
    """Anticrossing fields: vertex-refined local minima of a field trace.

    Returns the fields sorted ascending.  Modes closer than the field
    resolution merge into a single minimum and are counted once.
    """
    y = trace.amp_dB
    idx, _ = _scipy_find_peaks(-y, prominence=prominence_dB)
    fields = []
    for i in idx:
        xv, _ = _parabolic_vertex(trace.field_T[i - 1], trace.field_T[i],
                                  trace.field_T[i + 1],
                                  y[i - 1], y[i], y[i + 1])
        fields.append(xv)
    return np.array(sorted(fields))
