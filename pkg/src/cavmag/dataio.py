"""CSV and image I/O with deterministic, locale-free formatting.

All CSV emitters write a header line, '.' decimal separator and '\\n'
newlines; floats are serialized with repr so values round-trip
bit-exactly.  Heatmaps are binary P6 pixmaps, one pixel per grid cell,
with axis metadata in a sidecar text file.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .coupling import FieldSampleGrid
from .modeid import FitResult, ModeAssignment
from .transmission import SpectralMap

__all__ = [
    "MapFormatError",
    "write_map_csv",
    "load_map_csv",
    "write_trace_csv",
    "write_msm_table_csv",
    "write_assignments_csv",
    "write_fit_json",
    "load_fit_points_csv",
    "write_field_grid_csv",
    "load_field_grid_csv",
    "render_heatmap",
    "PALETTES",
]


class MapFormatError(ValueError):
    """Map CSV is ragged, incomplete, or not numeric."""


def _fmt(x: float) -> str:
    return repr(float(x))


def write_map_csv(spectral_map: SpectralMap, path) -> None:
    """Long-format map CSV, row-major with the row axis outer."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"{spectral_map.row_name},{spectral_map.col_name},"
                 f"{spectral_map.value_name}\n")
        for i, r in enumerate(spectral_map.field_axis):
            row = spectral_map.amplitude[i]
            for c, v in zip(spectral_map.freq_axis, row):
                fh.write(f"{_fmt(r)},{_fmt(c)},{_fmt(v)}\n")


def load_map_csv(path) -> SpectralMap:
    """Rebuild a map from long-format CSV.

    Rows may arrive in any order; the axes are reconstructed from the
    unique sorted values.  A missing or duplicated cell raises
    ``MapFormatError`` naming the hole.
    """
    rows = []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or len(header) != 3:
            raise MapFormatError("expected a 3-column header line")
        for lineno, rec in enumerate(reader, start=2):
            if not rec:
                continue
            if len(rec) != 3:
                raise MapFormatError(f"line {lineno}: expected 3 columns")
            try:
                rows.append((float(rec[0]), float(rec[1]), float(rec[2])))
            except ValueError as exc:
                raise MapFormatError(f"line {lineno}: non-numeric value") from exc
    if not rows:
        raise MapFormatError("no data rows")

    r_axis = np.unique([r for r, _, _ in rows])
    c_axis = np.unique([c for _, c, _ in rows])
    if len(rows) != r_axis.size * c_axis.size:
        raise MapFormatError(
            f"{len(rows)} cells cannot fill a {r_axis.size} x {c_axis.size} grid")
    amp = np.full((r_axis.size, c_axis.size), np.nan)
    r_pos = {v: i for i, v in enumerate(r_axis)}
    c_pos = {v: j for j, v in enumerate(c_axis)}
    for r, c, v in rows:
        i, j = r_pos[r], c_pos[c]
        if not np.isnan(amp[i, j]):
            raise MapFormatError(f"duplicate cell at ({r!r}, {c!r})")
        amp[i, j] = v
    holes = np.argwhere(np.isnan(amp))
    if holes.size:
        i, j = holes[0]
        raise MapFormatError(
            f"missing cell at ({r_axis[i]!r}, {c_axis[j]!r})")
    return SpectralMap(r_axis, c_axis, amp,
                       row_name=header[0], col_name=header[1],
                       value_name=header[2])


def write_trace_csv(time_us, envelope, path) -> None:
    """Pulse trace CSV with header t_us,env."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("t_us,env\n")
        for t, e in zip(time_us, envelope):
            fh.write(f"{_fmt(t)},{_fmt(e)}\n")


def write_msm_table_csv(resonances, path_or_file) -> None:
    """Mode table CSV with header family,n,m,H0_T,f_GHz."""
    def _emit(fh):
        fh.write("family,n,m,H0_T,f_GHz\n")
        for res in resonances:
            fh.write(f"{res.index.family()},{res.index.n},{res.index.m},"
                     f"{_fmt(res.field_T)},{_fmt(res.freq_GHz)}\n")

    if hasattr(path_or_file, "write"):
        _emit(path_or_file)
    else:
        with open(path_or_file, "w", encoding="utf-8", newline="\n") as fh:
            _emit(fh)


def write_assignments_csv(assignments, path) -> None:
    """Assignments CSV with header H_T,family,m,coordinate,residual."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("H_T,family,m,coordinate,residual\n")
        for a in assignments:
            fh.write(f"{_fmt(a.field_T)},{a.family},{a.m},"
                     f"{_fmt(a.coordinate)},{_fmt(a.residual)}\n")


def write_fit_json(fit: FitResult, path) -> None:
    """Fit result JSON with the three canonical keys."""
    payload = {
        "gamma_gyro_GHzperT": fit.gamma_gyro,
        "Ms_T": fit.Ms,
        "rms_residual_T": fit.rms_residual_T,
    }
    Path(path).write_text(json.dumps(payload, indent=2) + "\n",
                          encoding="utf-8")


def load_fit_points_csv(path) -> list[tuple[int, str, float]]:
    """Labeled fields CSV (header m,family,H_T) for the parameter fit."""
    points = []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        needed = {"m", "family", "H_T"}
        if reader.fieldnames is None or not needed <= set(reader.fieldnames):
            raise MapFormatError("expected header with columns m,family,H_T")
        for rec in reader:
            points.append((int(rec["m"]), rec["family"], float(rec["H_T"])))
    return points


def write_field_grid_csv(grid: FieldSampleGrid, path) -> None:
    """Coupling field-grid CSV (one sample per row)."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("x_m,y_m,z_m,dV_m3,Hx,Hy,Hz,Mx,My,Mz\n")
        for p, w, h, m in zip(grid.positions, grid.weights, grid.h_field,
                              grid.magnetization):
            vals = [*p, w, *h, *m]
            fh.write(",".join(_fmt(v) for v in vals) + "\n")


def load_field_grid_csv(path) -> FieldSampleGrid:
    """Read an externally produced field-sample grid."""
    data = []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or len(header) != 10:
            raise MapFormatError("expected the 10-column field grid header")
        for lineno, rec in enumerate(reader, start=2):
            if not rec:
                continue
            if len(rec) != 10:
                raise MapFormatError(f"line {lineno}: expected 10 columns")
            try:
                data.append([float(v) for v in rec])
            except ValueError as exc:
                raise MapFormatError(f"line {lineno}: non-numeric value") from exc
    arr = np.array(data, dtype=float).reshape(-1, 10)
    return FieldSampleGrid(arr[:, 0:3], arr[:, 3], arr[:, 4:7], arr[:, 7:10])


def _ramp(anchors):
    anchors = np.asarray(anchors, dtype=float)

    def palette(x: np.ndarray) -> np.ndarray:
        pos = np.clip(x, 0.0, 1.0) * (len(anchors) - 1)
        i = np.minimum(pos.astype(int), len(anchors) - 2)
        frac = (pos - i)[..., None]
        rgb = anchors[i] * (1.0 - frac) + anchors[i + 1] * frac
        return np.clip(np.rint(rgb), 0, 255).astype(np.uint8)

    return palette


PALETTES = {
    "gray": _ramp([(0, 0, 0), (255, 255, 255)]),
    "thermal": _ramp([(0, 0, 0), (128, 0, 64), (255, 64, 0), (255, 200, 0),
                      (255, 255, 255)]),
    "ice": _ramp([(8, 16, 64), (32, 96, 192), (160, 224, 255),
                  (255, 255, 255)]),
}


def render_heatmap(spectral_map: SpectralMap, palette: str, out_path) -> None:
    """Render a map to a binary P6 pixmap plus a metadata sidecar.

    One pixel per cell, row axis along x, column axis along y with the
    highest column value at the top; amplitude maps linearly between
    the map minimum and maximum.  Same map and palette give
    byte-identical files.
    """
    if palette not in PALETTES:
        raise ValueError(f"unknown palette {palette!r}; choose from "
                         f"{sorted(PALETTES)}")
    amp = spectral_map.amplitude
    lo, hi = float(np.min(amp)), float(np.max(amp))
    norm = (amp - lo) / (hi - lo) if hi > lo else np.zeros_like(amp)
    rgb = PALETTES[palette](norm)            # (rows=x, cols=y, 3)
    img = rgb.transpose(1, 0, 2)[::-1]       # (y, x, 3), top = last column
    w, h = amp.shape[0], amp.shape[1]
    with open(out_path, "wb") as fh:
        fh.write(f"P6\n{w} {h}\n255\n".encode("ascii"))
        fh.write(img.tobytes())
    meta = Path(str(out_path) + ".meta")
    meta.write_text(
        f"x: {spectral_map.row_name} {_fmt(spectral_map.field_axis[0])} .. "
        f"{_fmt(spectral_map.field_axis[-1])} ({w} px)\n"
        f"y: {spectral_map.col_name} {_fmt(spectral_map.freq_axis[0])} .. "
        f"{_fmt(spectral_map.freq_axis[-1])} ({h} px, top = max)\n"
        f"value: {spectral_map.value_name} min {_fmt(lo)} max {_fmt(hi)}\n"
        f"palette: {palette}\n",
        encoding="utf-8")
