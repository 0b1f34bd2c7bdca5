"""Bundled reference values for a 1 mm YIG sphere in a rectangular cavity.

Every measured constant of the reference experiment lives here, once:
material parameter sets, the two cavity modes, the sweep windows, and
the table of anticrossing working points used by the synthetic-map and
identification pipelines.
"""

from __future__ import annotations

from .params import (AnticrossingRecord, CavityModeParams, MaterialParams,
                     MsmIndex, SphereGeometry)

__all__ = [
    "CAVITY_INNER_DIMS_M",
    "cavity_volume_m3",
    "SPHERE_1MM",
    "YIG_LITERATURE",
    "YIG_TE101_FIT",
    "YIG_TIME_RESOLVED",
    "TE101",
    "TE102",
    "TABLE1_PROBE_GHZ",
    "TABLE1_RECORDS",
    "FIELD_SWEEP_TE101_T",
    "FIELD_SWEEP_TE102_T",
    "FIELD_STEP_T",
    "FREQ_SPAN_MHZ",
    "FREQ_POINTS",
    "MATERIAL_PRESETS",
    "CAVITY_PRESETS",
]

# Inner dimensions of the aluminum cavity, meters (44 x 22 x 9 mm).
CAVITY_INNER_DIMS_M = (0.044, 0.022, 0.009)


def cavity_volume_m3() -> float:
    """Full geometric cavity volume, the honest default modal volume."""
    a, b, c = CAVITY_INNER_DIMS_M
    return a * b * c


# Single-crystal YIG sphere, 1 mm diameter.
SPHERE_1MM = SphereGeometry(diameter=1e-3)

# Textbook YIG values: mu0*Ms = 0.178 T, spin density 4.22e27 m^-3,
# exchange constant 3e-12 cm^2, gyromagnetic ratio 28 GHz/T.
YIG_LITERATURE = MaterialParams(
    Ms=0.178,
    gamma_gyro=28.0,
    spin_density=4.22e27,
    exchange_const=3e-12,
    default_linewidth=2.5,
)

# Values extracted from the TE101 anticrossing series of the reference
# experiment: Gamma = 28.76 GHz/T, mu0*Ms = 0.176 T.
YIG_TE101_FIT = MaterialParams(
    Ms=0.176,
    gamma_gyro=28.76,
    spin_density=4.22e27,
    exchange_const=3e-12,
    default_linewidth=2.5,
)

# Values extracted from the time-resolved data set of the same sample:
# Gamma = 29.24 GHz/T, mu0*Ms = 149.49 mT.
YIG_TIME_RESOLVED = MaterialParams(
    Ms=0.14949,
    gamma_gyro=29.24,
    spin_density=4.22e27,
    exchange_const=3e-12,
    default_linewidth=2.5,
)

# Fundamental mode of the YIG-loaded cavity: 8.401 GHz, loaded Q 4000,
# insertion loss -33.1 dB.
TE101 = CavityModeParams.from_loaded_q(8.401, 4000.0, -33.1)

# Second mode: 10.361 GHz, loaded Q 4300, insertion loss -30.16 dB.
TE102 = CavityModeParams.from_loaded_q(10.361, 4300.0, -30.16)

# Probe frequency at which the TE101 anticrossing fields were read off
# (a few MHz above the bare mode, which shifts under strong coupling).
TABLE1_PROBE_GHZ = 8.405

# Anticrossing working points at TE101: field, mode, gamma/2pi,
# kappa/2pi, g/2pi (MHz each) and quoted cooperativity.  The quoted C
# of the uniform-mode row reproduces only with twice its quoted g; the
# audit keeps that discrepancy visible instead of silently fixing it.
TABLE1_RECORDS = (
    AnticrossingRecord(0.2718, MsmIndex(9, 9), 3.9, 4.0, 4.1, 1.1),
    AnticrossingRecord(0.2722, MsmIndex(8, 8), 2.9, 4.2, 4.7, 1.8),
    AnticrossingRecord(0.2728, MsmIndex(7, 7), 3.1, 3.3, 5.8, 3.3),
    AnticrossingRecord(0.2734, MsmIndex(6, 6), 3.1, 3.1, 7.1, 5.2),
    AnticrossingRecord(0.2746, MsmIndex(5, 5), 3.0, 3.1, 8.7, 8.1),
    AnticrossingRecord(0.2760, MsmIndex(4, 4), 3.1, 2.8, 10.9, 13.6),
    AnticrossingRecord(0.2780, MsmIndex(3, 3), 2.5, 2.5, 14.4, 33.2),
    AnticrossingRecord(0.2826, MsmIndex(2, 2), 1.6, 2.3, 25.1, 171.2),
    AnticrossingRecord(0.2882, MsmIndex(5, 4), 2.0, 4.0, 8.0, 8.0),
    AnticrossingRecord(0.2941, MsmIndex(1, 1), 2.5, 3.2, 53.5, 1431.1),
)

# Field sweep windows (start, stop) in tesla and the common step.
FIELD_SWEEP_TE101_T = (0.250, 0.330)
FIELD_SWEEP_TE102_T = (0.360, 0.440)
FIELD_STEP_T = 0.0002

# Frequency sweep around the probed cavity mode.
FREQ_SPAN_MHZ = 320.0
FREQ_POINTS = 1601

MATERIAL_PRESETS = {
    "yig-literature": YIG_LITERATURE,
    "yig-te101-fit": YIG_TE101_FIT,
    "yig-time-resolved": YIG_TIME_RESOLVED,
}

CAVITY_PRESETS = {
    "TE101": TE101,
    "TE102": TE102,
}
