"""Magnetostatic-mode (Walker-mode) resonances of a saturated sphere.

Implements the closed-form resonance conditions of the two
non-dispersive mode families (n = m and n = m + 1), the frequency band
where the mode potential is oscillatory inside the sample, and a
general root finder for the characteristic equation in associated
Legendre functions (Walker 1957; Fletcher & Bell 1959; Roeschmann &
Doetsch 1977).

With Gamma the linear gyromagnetic ratio (GHz/T), Ms = mu0*M_S (T) and
H_i = H_0 - Ms/3 the internal field of the sphere, the closed forms in
the package convention read::

    n = m:      H(0,mm)     = f/Gamma + Ms*(1/3 - m/(2m+1))
    n = m + 1:  H(0,m(m+1)) = f/Gamma + Ms*(1/3 - m/(2m+3))

Both families accumulate at f/Gamma - Ms/6 as m grows.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass

import numpy as np

from .params import MaterialParams, MsmIndex, internal_field

__all__ = [
    "OutOfBandError",
    "ConvergenceError",
    "WalkerBand",
    "MsmResonance",
    "kittel_field",
    "field_for_mode_mm",
    "field_for_mode_m1m",
    "mode_frequency",
    "walker_band",
    "msm_band_top",
    "xi0",
    "legendre_pnm",
    "solve_characteristic",
    "msm_table",
]

# Fields closer than this (in tesla) count as degenerate in msm_table.
DEGENERACY_TOL_T = 1e-4


class OutOfBandError(ValueError):
    """Frequency outside the band where the mode parameter is defined."""


class ConvergenceError(RuntimeError):
    """Root bisection failed to converge within the iteration budget."""


@dataclass(frozen=True)
class WalkerBand:
    """Band (f_low, f_high) in GHz where xi0 is real in (0, 1).

    f_low = Gamma*H_i is the low edge shared by all magnetostatic
    modes; f_high = Gamma*sqrt(H_i*(H_i + Ms)) bounds the bulk-type
    (oscillatory-potential) region.  Surface-localized modes of a
    sphere extend above f_high, up to Gamma*(H_i + Ms/2).
    """

    f_low: float
    f_high: float


@dataclass(frozen=True)
class MsmResonance:
    """A magnetostatic-mode resonance point (H, f) for one (n, m) label."""

    index: MsmIndex
    field_T: float
    freq_GHz: float
    degenerate: bool = False


def kittel_field(f: float, mat: MaterialParams) -> float:
    """Resonance field of the uniform-precession (Kittel) mode, in T.

    For a sphere the uniform mode satisfies f = Gamma*H_0 (Kittel
    1948), so the resonant bias field at a probe frequency f is simply
    f/Gamma.  Coincides with ``field_for_mode_mm(1, f, mat)``.
    """
    if f < 0:
        raise ValueError("frequency must be non-negative")
    return f / mat.gamma_gyro


def field_for_mode_mm(m: int, f: float, mat: MaterialParams) -> float:
    """Resonance field of the (m, m) mode at probe frequency f, in T.

    Strictly decreasing in m; the m = 1 case reduces exactly to the
    Kittel condition, and m -> inf accumulates at f/Gamma - Ms/6.
    """
    if m < 1:
        raise ValueError("m must be a positive integer")
    return f / mat.gamma_gyro + mat.Ms * (1.0 / 3.0 - m / (2.0 * m + 1.0))


def field_for_mode_m1m(m: int, f: float, mat: MaterialParams) -> float:
    """Resonance field of the (m+1, m) mode at probe frequency f, in T.

    Shares the m -> inf accumulation point f/Gamma - Ms/6 with the
    (m, m) family.
    """
    if m < 1:
        raise ValueError("m must be a positive integer")
    return f / mat.gamma_gyro + mat.Ms * (1.0 / 3.0 - m / (2.0 * m + 3.0))


def mode_frequency(index: MsmIndex, H0: float, mat: MaterialParams) -> float:
    """Resonance frequency in GHz of a family-0 or family-1 mode at H0.

    Inverse of the closed forms above.  Only the non-dispersive
    families n - |m| in {0, 1} admit a closed form; other indices raise
    ``ValueError`` (use :func:`solve_characteristic` for those).
    """
    m = abs(index.m)
    fam = index.family()
    if m < 1:
        raise ValueError("mode_frequency needs |m| >= 1")
    if fam == 0:
        frac = m / (2.0 * m + 1.0)
    elif fam == 1:
        frac = m / (2.0 * m + 3.0)
    else:
        raise ValueError(
            f"no closed form for family n-|m| = {fam}; solve the "
            "characteristic equation instead")
    return mat.gamma_gyro * (H0 + mat.Ms * (frac - 1.0 / 3.0))


def walker_band(H0: float, mat: MaterialParams) -> WalkerBand:
    """Band of real xi0 in (0, 1) at bias field H0.

    Raises ``UnsaturatedError`` below saturation.
    """
    hi = internal_field(H0, mat)
    g = mat.gamma_gyro
    return WalkerBand(g * hi, g * math.sqrt(hi * (hi + mat.Ms)))


def msm_band_top(H0: float, mat: MaterialParams) -> float:
    """Upper frequency limit Gamma*(H_i + Ms/2) of sphere modes, GHz.

    Both closed-form families accumulate just below this edge; no
    magnetostatic resonance of the sphere lies above it.
    """
    return mat.gamma_gyro * (internal_field(H0, mat) + 0.5 * mat.Ms)


def _xi0_squared(f: float, H0: float, mat: MaterialParams) -> float:
    hi = internal_field(H0, mat)
    g = mat.gamma_gyro
    return 1.0 + hi / mat.Ms - f * f / (g * g * mat.Ms * hi)


def xi0(f: float, H0: float, mat: MaterialParams) -> float:
    """Mode parameter xi0 = sqrt(1 + H_i/Ms - f^2/(Gamma^2 Ms H_i)).

    Real in [0, 1] exactly for f in the band of :func:`walker_band`;
    equal to 1 at the low edge and 0 at the high edge, monotone
    decreasing in between.

    Raises
    ------
    OutOfBandError
        If the radicand falls outside [0, 1].
    """
    t = _xi0_squared(f, H0, mat)
    if t < 0.0 or t > 1.0:
        band = walker_band(H0, mat)
        raise OutOfBandError(
            f"f = {f} GHz outside ({band.f_low:.6g}, {band.f_high:.6g}) GHz "
            f"(xi0^2 = {t:.6g})")
    return math.sqrt(t)


def legendre_pnm(n: int, m: int, x: float) -> tuple[float, float]:
    """Associated Legendre function P_n^m(x) and dP_n^m/dx on the cut.

    Standard first-kind function with the Condon-Shortley phase,
    computed by the stable upward recurrence in degree starting from
    P_m^m.  Restricted to integer 0 <= m <= n and x in the open
    interval (0, 1).
    """
    if not (isinstance(n, (int, np.integer)) and isinstance(m, (int, np.integer))):
        raise ValueError("n and m must be integers")
    if not 0 <= m <= n:
        raise ValueError("need 0 <= m <= n")
    if not 0.0 < x < 1.0:
        raise ValueError("x must lie in the open interval (0, 1)")

    somx2 = math.sqrt((1.0 - x) * (1.0 + x))
    pmm = 1.0
    fact = 1.0
    for _ in range(m):
        pmm *= -fact * somx2
        fact += 2.0

    p_prev = 0.0  # P_{m-1}^m vanishes
    p = pmm
    if n > m:
        p_prev, p = pmm, x * (2.0 * m + 1.0) * pmm
        for k in range(m + 2, n + 1):
            p, p_prev = ((2.0 * k - 1.0) * x * p
                         - (k + m - 1.0) * p_prev) / (k - m), p

    deriv = ((n + m) * p_prev - n * x * p) / ((1.0 - x) * (1.0 + x))
    return p, deriv


def _xi_log_derivative(n: int, m: int, t: float) -> float:
    """xi0 * (dP_n^m/dxi0) / P_n^m evaluated at xi0 = sqrt(t).

    The combination is a rational function of t = xi0^2, hence real for
    any real t < 1 even though xi0 itself turns imaginary for t < 0
    (the regime of surface-localized modes).  Evaluated with complex
    arithmetic; the imaginary rounding residue is discarded.  The pair
    recurrence is rescaled against overflow so large (n, m) are safe,
    which also means only the ratio is meaningful here.
    """
    xi = np.sqrt(complex(t))
    somx2 = math.sqrt(1.0 - t)

    pmm = 1.0 + 0.0j
    fact = 1.0
    for _ in range(m):
        pmm *= -fact * somx2
        fact += 2.0
        if abs(pmm) > 1e150:
            pmm /= 1e150

    p_prev = 0.0 + 0.0j
    p = pmm
    if n > m:
        p_prev, p = pmm, xi * (2.0 * m + 1.0) * pmm
        for k in range(m + 2, n + 1):
            p, p_prev = ((2.0 * k - 1.0) * xi * p
                         - (k + m - 1.0) * p_prev) / (k - m), p
            if abs(p) > 1e150:
                p /= 1e150
                p_prev /= 1e150
    if p == 0:
        return math.inf
    dp = ((n + m) * p_prev - n * xi * p) / (1.0 - t)
    return (xi * dp / p).real


def _characteristic_lhs(n: int, m: int, f: float, H0: float,
                        mat: MaterialParams, sign_branch: int) -> float:
    """Left-hand side of the sphere characteristic equation at f (GHz)."""
    hi = H0 - mat.Ms / 3.0
    g = mat.gamma_gyro
    t = 1.0 + hi / mat.Ms - f * f / (g * g * mat.Ms * hi)
    w = _xi_log_derivative(n, abs(m), t)
    coupling = sign_branch * m * (g * f * mat.Ms) / (g * g * hi * hi - f * f)
    return (n + 1.0) + w + coupling


def solve_characteristic(index: MsmIndex, H0: float, mat: MaterialParams,
                         sign_branch: int = 1, subdivisions: int = 2000,
                         freq_tol: float = 1e-9,
                         max_iter: int = 200) -> list[float]:
    """All resonance frequencies (GHz) of mode (n, m) at bias field H0.

    Scans the full magnetostatic-mode interval
    (Gamma*H_i, Gamma*(H_i + Ms/2)) with a fixed subdivision and
    bisects every sign change of the characteristic function to
    `freq_tol` GHz.  The pole of the field-coupling term sits at the
    low band edge and is excluded by construction; the poles of P'/P
    picked up by sign scanning are rejected afterwards by a residual
    check, since bisection parks them at points where the equation is
    violently violated.

    The default ``sign_branch=+1`` is the branch on which the equation
    reduces exactly to the closed forms of the two non-dispersive
    families (checked in the test suite through the m = 1 uniform-mode
    identity).  An empty result is valid: not every (n, m) supports a
    root at every field.

    Parameters are plain values; the function is pure and reentrant.
    """
    n, m = index.n, index.m
    if n < 1:
        raise ValueError("characteristic equation needs n >= 1")
    if sign_branch not in (1, -1):
        raise ValueError("sign_branch must be +1 or -1")
    hi = internal_field(H0, mat)
    f_lo = mat.gamma_gyro * hi
    f_hi = mat.gamma_gyro * (hi + 0.5 * mat.Ms)
    margin = (f_hi - f_lo) * 1e-7
    grid = np.linspace(f_lo + margin, f_hi - margin, subdivisions + 1)
    vals = np.array([_characteristic_lhs(n, m, float(f), H0, mat, sign_branch)
                     for f in grid])

    roots: list[float] = []
    for a, b, va, vb in zip(grid[:-1], grid[1:], vals[:-1], vals[1:]):
        if not (np.isfinite(va) and np.isfinite(vb)) or va * vb >= 0.0:
            continue
        lo, hi_f, flo = float(a), float(b), float(va)
        for _ in range(max_iter):
            mid = 0.5 * (lo + hi_f)
            fmid = _characteristic_lhs(n, m, mid, H0, mat, sign_branch)
            if flo * fmid <= 0.0:
                hi_f = mid
            else:
                lo, flo = mid, fmid
            if hi_f - lo < freq_tol:
                break
        else:
            raise ConvergenceError(
                f"bisection for mode ({n}, {m}) at H0 = {H0} T did not "
                f"reach {freq_tol} GHz in {max_iter} iterations")
        mid = 0.5 * (lo + hi_f)
        if abs(_characteristic_lhs(n, m, mid, H0, mat, sign_branch)) < 1e-2:
            roots.append(mid)
    return roots


def msm_table(f: float, mat: MaterialParams, m_max: int,
              families=(0,)) -> list[MsmResonance]:
    """Closed-form resonance fields of both non-dispersive families.

    Returns one entry per (family, m) with m = 1..m_max, sorted by
    ascending field, so the uniform mode (highest field) comes last.
    Entries whose fields coincide within 0.1 mT are flagged degenerate;
    the (3k+1, 3k) modes fall exactly onto the (k, k) ones, which is
    why a merged two-family table contains exact ties.
    """
    if m_max < 1:
        raise ValueError("m_max must be >= 1")
    bad = set(families) - {0, 1}
    if bad:
        raise ValueError(f"unsupported families: {sorted(bad)}")

    entries: list[MsmResonance] = []
    for fam in sorted(set(families)):
        for m in range(1, m_max + 1):
            if fam == 0:
                h = field_for_mode_mm(m, f, mat)
            else:
                h = field_for_mode_m1m(m, f, mat)
            entries.append(MsmResonance(MsmIndex(m + fam, m), h, f))

    entries.sort(key=lambda r: (r.field_T, r.index.family(), r.index.m))
    flagged = []
    for i, res in enumerate(entries):
        degen = (
            (i > 0 and abs(res.field_T - entries[i - 1].field_T) < DEGENERACY_TOL_T)
            or (i + 1 < len(entries)
                and abs(res.field_T - entries[i + 1].field_T) < DEGENERACY_TOL_T))
        flagged.append(dataclasses.replace(res, degenerate=degen) if degen else res)
    return flagged
