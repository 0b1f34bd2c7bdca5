"""Magnon-photon strong coupling toolkit.

Simulates and analyzes a ferrimagnetic sphere coupled to a microwave
cavity: magnetostatic-mode dispersion, input-output transmission maps,
anticrossing detection, mode identification through the reciprocal-field
index coordinate, material-parameter fits, and pulsed Rabi dynamics.
"""

from .params import (AnticrossingRecord, CavityModeParams, MaterialParams,
                     MsmIndex, PhysicalConstants, SphereGeometry,
                     UnsaturatedError, audit_cooperativity, cooperativity,
                     decompose_damping, internal_field, intrinsic_q,
                     kappa_total, spin_count)
from .dispersion import (MsmResonance, WalkerBand, field_for_mode_m1m,
                         field_for_mode_mm, kittel_field, legendre_pnm,
                         mode_frequency, msm_table, solve_characteristic,
                         walker_band, xi0)
from .coupling import (FieldSampleGrid, ModalVolume, ensemble_coupling,
                       overlap_eta, single_spin_coupling)
from .transmission import (FieldTrace, MagnonModeEntry, Peak, PeakSet,
                           SpectralMap, SplittingResult, build_map,
                           find_anticrossings, find_peaks,
                           fixed_frequency_trace, model_trace,
                           splitting_to_g, transmission_at)
from .modeid import (FitResult, IdentificationResult, ModeAssignment,
                     RescaledMap, assign_modes, build_rescaled_map,
                     fit_material_params, identify_fields, index_coordinate,
                     refine_fit_coordinates, resample_uniform, rescale_u)
from .timedomain import (EnvelopeTrace, PulseSpec, RabiEstimate, rabi_period,
                         ringdown_rate, simulate_pulse, time_field_map)
from .config import RunConfig, dump_config, load_config, loads_config

__version__ = "0.1.0"
