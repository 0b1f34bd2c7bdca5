"""Mode identification through the reciprocal-field index coordinate.

Both non-dispersive mode families accumulate at the field
acc = fc/Gamma - Ms/6.  The reciprocal distance u = 1/(H - acc) is
therefore equally spaced over each family: u = (4m+2)/Ms for the (m, m)
modes and u = (4m+6)/(3Ms) for the (m+1, m) ones.  Affinely rescaling u
turns the field axis into an index coordinate that is exactly the
integer m at every closed-form resonance field:

    (m, m):    c = -1/2 + (Ms/4) * u
    (m+1, m):  c = -3/2 + (3Ms/4) * u

Note the two coordinates obey c_m1m = 3 * c_mm identically, so the
(m+1, m) lattice is three times denser: a field whose (m, m) coordinate
misses its integer by more than 1/4 always lands closer to some
(m+1, m) integer.  Assignment quality therefore hinges on how well the
parameters center the (m, m) residuals, which is what the
coordinate-space refinement below is for.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import least_squares

from .transmission import SpectralMap

__all__ = [
    "RescaleSingularityError",
    "DegenerateFitError",
    "IdentificationError",
    "FAMILIES",
    "RescaledMap",
    "ModeAssignment",
    "FitResult",
    "IdentificationResult",
    "accumulation_field",
    "rescale_u",
    "index_coordinate",
    "build_rescaled_map",
    "resample_uniform",
    "assign_modes",
    "fit_material_params",
    "refine_fit_coordinates",
    "identify_fields",
]

FAMILIES = ("mm", "m1m")


class RescaleSingularityError(ValueError):
    """Field coincides with (or range straddles) the accumulation field."""


class DegenerateFitError(ValueError):
    """Fit inputs do not determine both parameters."""


class IdentificationError(RuntimeError):
    """Bootstrap identification could not get off the ground."""


@dataclass(frozen=True, eq=False)
class RescaledMap:
    """A spectral map re-indexed on the index coordinate of one family.

    `coords` holds the exact coordinate of every original field sample,
    sorted ascending; `amplitude` rows are the original rows in that
    order.  This is a pure re-indexing: the amplitude values are the
    same multiset as in the source map.  Use :func:`resample_uniform`
    to force a uniform axis for rendering or CSV export.
    """

    coords: np.ndarray
    col_axis: np.ndarray
    amplitude: np.ndarray
    family: str
    fc_GHz: float
    gamma_gyro: float
    Ms: float
    col_name: str = "f_GHz"
    value_name: str = "amp_dB"


@dataclass(frozen=True)
class ModeAssignment:
    """One detected field labeled with a (family, m) mode index."""

    field_T: float
    coordinate: float
    m: int
    family: str
    residual: float

    @property
    def n(self) -> int:
        return self.m if self.family == "mm" else self.m + 1


@dataclass(frozen=True)
class FitResult:
    """Material parameters extracted from labeled resonance fields."""

    gamma_gyro: float
    Ms: float
    rms_residual_T: float
    residuals_T: tuple[float, ...]


@dataclass(frozen=True)
class IdentificationResult:
    """Outcome of the bootstrap identification pipeline."""

    assignments: tuple[ModeAssignment, ...]
    unassigned: tuple[float, ...]
    fit: FitResult
    gamma_gyro: float
    Ms: float


def accumulation_field(fc: float, gamma_gyro: float, Ms: float) -> float:
    """Field fc/Gamma - Ms/6 toward which both families converge, in T."""
    return fc / gamma_gyro - Ms / 6.0


def rescale_u(H, fc: float, gamma_gyro: float, Ms: float):
    """Reciprocal distance u = 1/(H - (fc/Gamma - Ms/6)) in 1/T.

    At the exact (m, m) resonance fields u equals (4m+2)/Ms, so
    consecutive modes are spaced by exactly 4/Ms; over the (m+1, m)
    family the spacing is 4/(3Ms).  Scalar or array H.
    """
    d = np.asarray(H, dtype=float) - accumulation_field(fc, gamma_gyro, Ms)
    if np.any(d == 0.0):
        raise RescaleSingularityError(
            "field coincides with the accumulation field "
            f"{accumulation_field(fc, gamma_gyro, Ms):.6g} T")
    u = 1.0 / d
    return u if u.ndim else float(u)


def index_coordinate(H, fc: float, gamma_gyro: float, Ms: float,
                     family: str = "mm"):
    """Index coordinate of a field: exactly m at closed-form resonances.

    family "mm" maps the (m, m) fields to integers through
    -1/2 + (Ms/4)*u; family "m1m" maps the (m+1, m) fields through
    -3/2 + (3Ms/4)*u.  Scalar or array H.
    """
    u = rescale_u(H, fc, gamma_gyro, Ms)
    if family == "mm":
        c = -0.5 + 0.25 * Ms * np.asarray(u)
    elif family == "m1m":
        c = -1.5 + 0.75 * Ms * np.asarray(u)
    else:
        raise ValueError(f"unknown family {family!r}, expected one of {FAMILIES}")
    return c if c.ndim else float(c)


def build_rescaled_map(spectral_map: SpectralMap, fc: float, gamma_gyro: float,
                       Ms: float, family: str = "mm") -> RescaledMap:
    """Re-index a map's row axis onto the index coordinate.

    Works equally for frequency maps and time rasters, since only the
    row (field) axis is transformed.  The field range must not straddle
    the accumulation field, where the mapping has its pole.
    """
    fields = spectral_map.field_axis
    acc = accumulation_field(fc, gamma_gyro, Ms)
    if fields[0] <= acc <= fields[-1]:
        raise RescaleSingularityError(
            f"accumulation field {acc:.6g} T lies inside the map range "
            f"[{fields[0]:.6g}, {fields[-1]:.6g}] T")
    coords = np.asarray(index_coordinate(fields, fc, gamma_gyro, Ms, family))
    order = np.argsort(coords)
    return RescaledMap(coords[order], spectral_map.freq_axis,
                       spectral_map.amplitude[order], family, fc, gamma_gyro,
                       Ms, spectral_map.col_name, spectral_map.value_name)


def resample_uniform(rescaled: RescaledMap, points: int | None = None) -> SpectralMap:
    """Uniform-axis view of a rescaled map by nearest-sample assignment.

    Each uniform coordinate takes the amplitude row of the nearest
    original sample; no amplitudes are interpolated.  Defaults to as
    many points as the source has rows.
    """
    n = int(points) if points is not None else rescaled.coords.size
    if n < 2:
        raise ValueError("need at least two resample points")
    axis = np.linspace(rescaled.coords[0], rescaled.coords[-1], n)
    pick = np.abs(axis[:, None] - rescaled.coords[None, :]).argmin(axis=1)
    return SpectralMap(axis, rescaled.col_axis, rescaled.amplitude[pick],
                       row_name="coord", col_name=rescaled.col_name,
                       value_name=rescaled.value_name)


def assign_modes(fields, fc: float, gamma_gyro: float, Ms: float,
                 tolerance: float = 0.3,
                 families=FAMILIES) -> tuple[list[ModeAssignment], list[float]]:
    """Label detected fields with the nearest-integer (family, m).

    For each field the coordinate is computed in every candidate
    family; the label whose coordinate sits nearest an integer m >= 1
    within `tolerance` wins, with exact ties resolved toward the (m, m)
    family (the exactly degenerate (3k+1, 3k) / (k, k) pairs make the
    tie rule load-bearing).  Fields with no candidate are returned
    separately, unlabeled.
    """
    if not 0.0 < tolerance < 0.5:
        raise ValueError("tolerance must lie in (0, 0.5)")
    assigned: list[ModeAssignment] = []
    unassigned: list[float] = []
    for h in np.asarray(fields, dtype=float):
        h = float(h)
        best: tuple[float, int, int, str, float] | None = None
        for rank, family in enumerate(f for f in FAMILIES if f in families):
            c = index_coordinate(h, fc, gamma_gyro, Ms, family)
            m = round(c)
            if m < 1 or abs(c - m) > tolerance:
                continue
            cand = (abs(c - m), rank, m, family, c)
            if best is None or cand[:2] < best[:2]:
                best = cand
        if best is None:
            unassigned.append(h)
        else:
            res, _, m, family, c = best
            assigned.append(ModeAssignment(h, c, m, family, res))
    return assigned, unassigned


def _field_model_coeff(m: int, family: str) -> float:
    # H = fc/Gamma + coeff*Ms at the closed-form resonance
    if family == "mm":
        return (1.0 - m) / (3.0 * (2.0 * m + 1.0))
    if family == "m1m":
        return (3.0 - m) / (3.0 * (2.0 * m + 3.0))
    raise ValueError(f"unknown family {family!r}")


def fit_material_params(points, fc: float) -> FitResult:
    """Least-squares (Gamma, Ms) from labeled resonance fields.

    `points` is an iterable of (m, family, H_T) with family "mm" or
    "m1m".  The closed-form field is linear in (1/Gamma, Ms) once the
    labels are fixed, so the minimizer of the squared field residuals
    is a plain linear solve: exact, no iteration, no starting guess.
    """
    pts = [(int(m), str(fam), float(h)) for m, fam, h in points]
    if len(pts) < 2:
        raise DegenerateFitError("need at least two labeled fields")
    a = np.array([[fc, _field_model_coeff(m, fam)] for m, fam, _ in pts])
    b = np.array([h for _, _, h in pts])
    if np.linalg.matrix_rank(a) < 2:
        raise DegenerateFitError(
            "labels do not span two distinct mode coefficients")
    sol, *_ = np.linalg.lstsq(a, b, rcond=None)
    inv_gamma, ms = (float(sol[0]), float(sol[1]))
    if inv_gamma <= 0 or ms <= 0:
        raise DegenerateFitError(
            f"fit left the physical region (1/Gamma = {inv_gamma:.4g}, "
            f"Ms = {ms:.4g})")
    res = b - a @ sol
    return FitResult(1.0 / inv_gamma, ms,
                     float(np.sqrt(np.mean(res * res))),
                     tuple(float(r) for r in res))


def refine_fit_coordinates(points, fc: float, gamma_gyro: float,
                           Ms: float) -> tuple[float, float]:
    """Refine (Gamma, Ms) by least squares on index-coordinate residuals.

    The field-space fit weights every mode equally, but the coordinate
    is ~(4m)^2 times more sensitive to field errors at large m, so
    labeled data that is not exactly closed-form-consistent can end up
    with late-family coordinates far off their integers.  Minimizing
    the coordinate residuals instead centers every mode on its index,
    which is the right norm for assignment.  Returns refined
    (gamma_gyro, Ms), starting from the provided values.
    """
    pts = [(int(m), str(fam), float(h)) for m, fam, h in points]
    if len(pts) < 2:
        raise DegenerateFitError("need at least two labeled fields")

    def residuals(p):
        g, ms = p
        return np.array([
            index_coordinate(h, fc, g, ms, fam) - m for m, fam, h in pts
        ])

    sol = least_squares(residuals, [gamma_gyro, Ms], method="lm")
    g, ms = float(sol.x[0]), float(sol.x[1])
    if g <= 0 or ms <= 0:
        raise DegenerateFitError("coordinate refinement left the physical region")
    return g, ms


def identify_fields(fields, fc: float, Ms0: float = 0.178,
                    tolerance: float = 0.3,
                    max_iter: int = 5) -> IdentificationResult:
    """Bootstrap identification of detected anticrossing fields.

    Starts from Gamma0 = fc/H_max (the highest-field anticrossing taken
    as the uniform mode) and a literature Ms, then iterates
    assign -> fit -> re-assign to a fixed point, at most `max_iter`
    rounds per stage.  The first stage labels the (m, m) backbone only;
    the denser (m+1, m) lattice joins in the second stage once the
    parameters are centered, which keeps spurious dense-family matches
    from poisoning the fit.  Each fit is the linear field-space solve
    followed by the coordinate-space refinement.
    """
    fields = [float(h) for h in np.asarray(fields, dtype=float)]
    if not fields:
        raise IdentificationError("no fields to identify")
    gamma, ms = fc / max(fields), Ms0

    assigned: list[ModeAssignment] = []
    unassigned: list[float] = list(fields)
    for stage_families in (("mm",), FAMILIES):
        prev = None
        for _ in range(max_iter):
            assigned, unassigned = assign_modes(fields, fc, gamma, ms,
                                                tolerance, stage_families)
            key = tuple(sorted((a.family, a.m, a.field_T) for a in assigned))
            if key == prev:
                break
            prev = key
            pts = [(a.m, a.family, a.field_T) for a in assigned]
            if len({(m, f) for m, f, _ in pts}) < 2:
                continue  # not enough structure yet; keep current params
            lin = fit_material_params(pts, fc)
            gamma, ms = refine_fit_coordinates(pts, fc, lin.gamma_gyro, lin.Ms)

    if not assigned:
        raise IdentificationError(
            "no field could be labeled; check fc, the field list, or Ms0")
    fit = fit_material_params([(a.m, a.family, a.field_T) for a in assigned], fc)
    return IdentificationResult(tuple(assigned), tuple(unassigned), fit,
                                gamma, ms)
