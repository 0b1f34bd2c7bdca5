"""Magnon-photon coupling strength: single spin, ensemble, and overlap.

The single-spin rate follows from the vacuum field amplitude of the
cavity mode, enhanced by sqrt(N) for an ensemble of N net spins; the
dimensionless overlap eta accounts for the spatial mismatch between the
microwave magnetic field and the mode magnetization pattern over the
sphere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .params import MaterialParams, PhysicalConstants

__all__ = [
    "DegenerateGridError",
    "ModalVolume",
    "FieldSampleGrid",
    "single_spin_coupling",
    "ensemble_coupling",
    "overlap_eta",
]


class DegenerateGridError(ValueError):
    """Field sample grid is empty or carries no field amplitude."""


@dataclass(frozen=True)
class ModalVolume:
    """Cavity modal volume in m^3 with a provenance tag.

    The magnetic modal volume of a real cavity mode is smaller than the
    geometric volume and requires a field simulation to pin down; the
    tag records whether this value is the honest geometric default or a
    user-supplied number.
    """

    volume: float
    definition_tag: str = "full-cavity"

    def __post_init__(self) -> None:
        if not self.volume > 0:
            raise ValueError("volume must be strictly positive")
        if self.definition_tag not in ("full-cavity", "user-supplied"):
            raise ValueError("definition_tag must be 'full-cavity' or 'user-supplied'")


@dataclass(frozen=True, eq=False)
class FieldSampleGrid:
    """Discrete samples of drive field H and mode magnetization M.

    Attributes
    ----------
    positions : (N, 3) array, m
    weights : (N,) array, m^3
        Volume element of each sample; positive, summing to the sample
        volume.
    h_field : (N, 3) array
        Microwave magnetic field vectors (arbitrary common unit).
    magnetization : (N, 3) array
        Mode magnetization vectors (arbitrary common unit).
    """

    positions: np.ndarray
    weights: np.ndarray
    h_field: np.ndarray
    magnetization: np.ndarray

    def __post_init__(self) -> None:
        pos = np.asarray(self.positions, dtype=float)
        w = np.asarray(self.weights, dtype=float)
        h = np.asarray(self.h_field, dtype=float)
        mag = np.asarray(self.magnetization, dtype=float)
        if pos.ndim != 2 or pos.shape[1] != 3:
            raise ValueError("positions must have shape (N, 3)")
        n = pos.shape[0]
        if w.shape != (n,) or h.shape != (n, 3) or mag.shape != (n, 3):
            raise ValueError("weights, h_field and magnetization must match positions")
        if n and not np.all(w > 0):
            raise ValueError("weights must be strictly positive")
        object.__setattr__(self, "positions", pos)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "h_field", h)
        object.__setattr__(self, "magnetization", mag)

    @property
    def volume(self) -> float:
        """Total sampled volume, m^3."""
        return float(np.sum(self.weights))

    @property
    def h_max(self) -> float:
        """Largest |H| over the grid."""
        return float(np.max(np.linalg.norm(self.h_field, axis=1))) if len(self.weights) else 0.0

    @property
    def m_max(self) -> float:
        """Largest |M| over the grid."""
        return float(np.max(np.linalg.norm(self.magnetization, axis=1))) if len(self.weights) else 0.0


def single_spin_coupling(fc: float, modal_volume: ModalVolume, eta: float,
                         consts: PhysicalConstants,
                         mat: MaterialParams) -> float:
    """Single-spin coupling rate g_0/2pi in Hz.

    g_0 = eta * Gamma_angular * sqrt(mu0 * hbar * omega_c / V_c), with
    Gamma_angular the angular gyromagnetic ratio of the material.  The
    material's measured linear ratio (GHz/T) is used rather than the
    bare g*muB/hbar of `consts`, so a fitted effective g-factor carries
    through consistently; for lande_g = 2 the two differ by under 3%.
    """
    if not fc > 0:
        raise ValueError("fc must be strictly positive")
    if not 0.0 <= eta <= 1.0:
        raise ValueError("eta must lie in [0, 1]")
    gamma_angular = mat.gamma_gyro * 2.0 * math.pi * 1e9  # rad/(s T)
    omega_c = 2.0 * math.pi * fc * 1e9
    g0_angular = eta * gamma_angular * math.sqrt(
        consts.mu0 * consts.hbar * omega_c / modal_volume.volume)
    return g0_angular / (2.0 * math.pi)


def ensemble_coupling(g0_hz: float, n_spins: float) -> float:
    """Collective coupling g/2pi = g_0 * sqrt(N), returned in MHz."""
    if n_spins < 0:
        raise ValueError("spin count must be non-negative")
    return g0_hz * math.sqrt(n_spins) / 1e6


def overlap_eta(grid: FieldSampleGrid) -> float:
    """Spatial overlap eta of drive field and mode magnetization.

    Discrete form of the normalized volume integral of H.M over the
    sample: sum_i w_i H_i.M_i / (H_max * M_max * V).  Equal to 1 for
    uniform collinear fields and bounded by |eta| <= 1 for any grid.
    """
    if len(grid.weights) == 0:
        raise DegenerateGridError("empty field sample grid")
    norm = grid.h_max * grid.m_max
    if norm == 0.0:
        raise DegenerateGridError("H_max * M_max vanishes on the grid")
    dots = np.einsum("ij,ij->i", grid.h_field, grid.magnetization)
    return float(np.sum(grid.weights * dots) / (norm * grid.volume))
