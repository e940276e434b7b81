"""Temporal functions of scattering, instantaneous-jump photon transport and
energy-time uncertainty relations for transfer, decay and transmutation."""

from .errors import ValidationError
from .medium_transit import (
    MediumSpec,
    TransitPrediction,
    free_path,
    parse_medium,
    resonance_condition,
    resonant_cross_section,
    transit_prediction,
    tunneling_condition,
    wavelength_condition,
)
from .mc_transport import TransportResult, WalkConfig, simulate, sweep
from .particles import (
    MassHierarchy,
    TauKind,
    TransmutationRecord,
    allowed_transmutations,
    bundled_table,
    dump_particle_table,
    lifetime_bound,
    load_particle_table,
    neutrino_mass_estimate,
    uncertainty_product,
)
from .temporal_core import (
    MassiveState,
    SpectralResponse,
    TemporalPair,
    formation_path,
    massive_formation_leading,
    massive_temporal,
    mixed_formation_time,
    photon_propagator_times,
    renormalized_formation_time,
    temporal_pair,
)
from .uncertainty import (
    ProcessKind,
    WavepacketGrid,
    locate_transition_maxima,
    minimal_time,
    mt_projector_bound,
    rs_bound,
    transition_probability,
    wigner_spreads,
)

__version__ = "0.1.0"
