"""Parameter types and scalar relations for a magnon-photon cavity system.

Unit conventions, used consistently across the whole package:

* static bias fields are mu0*H values, in tesla (T),
* frequencies are linear (cycles, not angular), in GHz,
* damping and coupling rates are the /2pi values, in MHz,
* the gyromagnetic ratio is linear, in GHz/T.

Angular quantities appear only inside implementations; every public
value crosses a function boundary in the convention above.  All types
are immutable values after construction and safe to share between
threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "UnsaturatedError",
    "PhysicalConstants",
    "MaterialParams",
    "SphereGeometry",
    "CavityModeParams",
    "MsmIndex",
    "AnticrossingRecord",
    "CooperativityCheck",
    "internal_field",
    "intrinsic_q",
    "kappa_total",
    "decompose_damping",
    "cooperativity",
    "spin_count",
    "audit_cooperativity",
]


class UnsaturatedError(ValueError):
    """Bias field too low to saturate the sample (mu0*H0 <= Ms/3)."""


@dataclass(frozen=True)
class PhysicalConstants:
    """Electromagnetic constants (CODATA 2018 values by default).

    Attributes
    ----------
    mu0 : float
        Vacuum permeability (T m / A).
    hbar : float
        Reduced Planck constant (J s).
    muB : float
        Bohr magneton (J / T).
    lande_g : float
        Dimensionless Lande g-factor of the precessing spins.
    """

    mu0: float = 1.25663706212e-06
    hbar: float = 1.054571817e-34
    muB: float = 9.2740100783e-24
    lande_g: float = 2.0

    def __post_init__(self) -> None:
        for name in ("mu0", "hbar", "muB", "lande_g"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be strictly positive")

    def gamma_angular(self) -> float:
        """Gyromagnetic ratio g*muB/hbar in rad/(s T)."""
        return self.lande_g * self.muB / self.hbar

    def gamma_linear(self) -> float:
        """Gyromagnetic ratio in GHz/T (linear-frequency convention)."""
        return self.gamma_angular() / (2.0 * math.pi * 1e9)


@dataclass(frozen=True)
class MaterialParams:
    """Magnetic material parameters of the ferrimagnetic sample.

    Attributes
    ----------
    Ms : float
        Saturation magnetization expressed as mu0*M_S, in tesla.
    gamma_gyro : float
        Linear gyromagnetic ratio, GHz/T.
    spin_density : float
        Net spin density, m^-3.
    exchange_const : float
        Exchange constant, cm^2.  Carried as metadata only: the
        magnetostatic approximation used throughout never consumes it.
    default_linewidth : float
        Default magnon linewidth gamma/2pi, MHz, used when a mode does
        not specify its own.
    """

    Ms: float
    gamma_gyro: float
    spin_density: float
    exchange_const: float = 3e-12
    default_linewidth: float = 2.5

    def __post_init__(self) -> None:
        if not self.Ms > 0:
            raise ValueError("Ms must be strictly positive")
        if not self.gamma_gyro > 0:
            raise ValueError("gamma_gyro must be strictly positive")
        if not self.spin_density > 0:
            raise ValueError("spin_density must be strictly positive")


@dataclass(frozen=True)
class SphereGeometry:
    """Sphere sample geometry.  `diameter` in meters."""

    diameter: float

    def __post_init__(self) -> None:
        if not self.diameter > 0:
            raise ValueError("diameter must be strictly positive")

    @property
    def volume(self) -> float:
        """Sphere volume pi*d^3/6 in m^3."""
        return math.pi * self.diameter**3 / 6.0


@dataclass(frozen=True)
class CavityModeParams:
    """One microwave cavity mode with its damping decomposition.

    Attributes
    ----------
    fc : float
        Resonance frequency, GHz.
    Q_loaded : float
        Loaded quality factor (dimensionless).
    insertion_loss_dB : float
        On-resonance transmission in dB (negative).
    kappa_c : float
        Per-port coupling rate kappa_c/2pi, MHz.
    kappa_int : float
        Internal damping rate kappa_int/2pi, MHz.

    The total damping is ``kappa = 2*kappa_c + kappa_int``.  Use
    :meth:`from_loaded_q` to derive the decomposition from (Q_L, IL),
    or :meth:`from_rates` when the rates themselves are the data.
    """

    fc: float
    Q_loaded: float
    insertion_loss_dB: float
    kappa_c: float
    kappa_int: float

    def __post_init__(self) -> None:
        if not self.fc > 0:
            raise ValueError("fc must be strictly positive")
        if not self.Q_loaded > 0:
            raise ValueError("Q_loaded must be strictly positive")
        if not self.insertion_loss_dB < 0:
            raise ValueError("insertion_loss_dB must be negative")
        if self.kappa_c < 0 or self.kappa_int < 0:
            raise ValueError("damping rates must be non-negative")

    @property
    def kappa(self) -> float:
        """Total photonic damping kappa/2pi = 2*kappa_c + kappa_int, MHz."""
        return 2.0 * self.kappa_c + self.kappa_int

    @classmethod
    def from_loaded_q(cls, fc: float, Q_loaded: float,
                      insertion_loss_dB: float) -> "CavityModeParams":
        """Build from (fc, Q_L, IL), decomposing kappa via the peak height."""
        kc, kint = decompose_damping(fc, Q_loaded, insertion_loss_dB)
        return cls(fc, Q_loaded, insertion_loss_dB, kc, kint)

    @classmethod
    def from_rates(cls, fc: float, kappa_c: float,
                   kappa_int: float) -> "CavityModeParams":
        """Build from explicit rates; Q_L and IL are derived."""
        kappa = 2.0 * kappa_c + kappa_int
        if not kappa > 0:
            raise ValueError("total damping must be strictly positive")
        q = 1e3 * fc / kappa
        il = 20.0 * math.log10(2.0 * kappa_c / kappa) if kappa_c > 0 else -math.inf
        return cls(fc, q, il, kappa_c, kappa_int)


@dataclass(frozen=True)
class MsmIndex:
    """Magnetostatic-mode label (n, m) with |m| <= n.

    The index n labels the surface localization of the precession
    pattern, m its angular momentum; modes group into families by the
    value n - |m|.
    """

    n: int
    m: int

    def __post_init__(self) -> None:
        if self.n < 0:
            raise ValueError("n must be a non-negative integer")
        if abs(self.m) > self.n:
            raise ValueError("|m| must not exceed n")

    def family(self) -> int:
        """Family number n - |m| (0 for the non-dispersive n = m modes)."""
        return self.n - abs(self.m)


@dataclass(frozen=True)
class AnticrossingRecord:
    """One anticrossing working point extracted from a spectral map."""

    field_T: float
    index: MsmIndex
    gamma_MHz: float
    kappa_MHz: float
    g_MHz: float
    cooperativity: float


@dataclass(frozen=True)
class CooperativityCheck:
    """Audit result comparing a quoted cooperativity against g^2/(gamma*kappa)."""

    record: AnticrossingRecord
    recomputed: float
    deviation: float
    flagged: bool


def internal_field(H0: float, mat: MaterialParams) -> float:
    """Internal field mu0*H_i = mu0*H_0 - Ms/3 of a saturated sphere, in T.

    Raises
    ------
    UnsaturatedError
        If H0 <= Ms/3, where the sphere is not saturated and the
        magnetostatic-mode treatment does not apply.
    """
    if H0 <= mat.Ms / 3.0:
        raise UnsaturatedError(
            f"bias field {H0} T does not saturate the sample "
            f"(needs > Ms/3 = {mat.Ms / 3.0:.6g} T)")
    return H0 - mat.Ms / 3.0


def intrinsic_q(Q_loaded: float, insertion_loss_dB: float) -> float:
    """Intrinsic quality factor Q_i = Q_L / (1 - 10^(IL/20)).

    Always exceeds Q_L and tends to it in the weak-transmission limit
    IL -> -inf.
    """
    if not Q_loaded > 0:
        raise ValueError("Q_loaded must be strictly positive")
    if not insertion_loss_dB < 0:
        raise ValueError("insertion_loss_dB must be negative")
    return Q_loaded / (1.0 - 10.0 ** (insertion_loss_dB / 20.0))


def kappa_total(fc: float, Q_loaded: float) -> float:
    """Total photonic damping kappa/2pi = fc/Q_L, returned in MHz."""
    if not (fc > 0 and Q_loaded > 0):
        raise ValueError("fc and Q_loaded must be strictly positive")
    return 1e3 * fc / Q_loaded


def decompose_damping(fc: float, Q_loaded: float,
                      insertion_loss_dB: float) -> tuple[float, float]:
    """Split kappa into (kappa_c, kappa_int), both /2pi in MHz.

    The bare-cavity on-resonance transmission amplitude of the
    input-output model is 2*kappa_c/kappa; equating it to 10^(IL/20)
    fixes the per-port rate, and kappa_int absorbs the rest.  Note this
    decomposition rule is a modeling choice: Q_L and IL alone do not
    identify the split uniquely without a second port measurement.
    """
    if not (fc > 0 and Q_loaded > 0):
        raise ValueError("fc and Q_loaded must be strictly positive")
    if insertion_loss_dB > 0:
        raise ValueError("insertion_loss_dB must not be positive")
    kappa = kappa_total(fc, Q_loaded)
    kappa_c = 0.5 * kappa * 10.0 ** (insertion_loss_dB / 20.0)
    return kappa_c, kappa - 2.0 * kappa_c


def cooperativity(g: float, gamma: float, kappa: float) -> float:
    """Two-level cooperativity C = g^2 / (gamma * kappa), dimensionless.

    All three rates are /2pi values in the same unit (MHz).
    """
    if not (g > 0 and gamma > 0 and kappa > 0):
        raise ValueError("g, gamma and kappa must be strictly positive")
    return g * g / (gamma * kappa)


def spin_count(mat: MaterialParams, geom: SphereGeometry) -> float:
    """Number of net spins N = spin_density * sphere volume."""
    return mat.spin_density * geom.volume


def audit_cooperativity(records, atol: float = 0.15) -> list[CooperativityCheck]:
    """Recompute C = g^2/(gamma*kappa) for each record and flag mismatches.

    A record is flagged when the recomputed cooperativity deviates from
    the quoted one by more than `atol`.  Flagged rows are reported, not
    corrected: a reproducible discrepancy in published values is data.
    """
    checks = []
    for rec in records:
        c = cooperativity(rec.g_MHz, rec.gamma_MHz, rec.kappa_MHz)
        dev = abs(c - rec.cooperativity)
        checks.append(CooperativityCheck(rec, c, dev, dev > atol))
    return checks
