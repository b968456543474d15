"""Local Born-rule simulation: scattering, stripping and measurement cascades."""

from ._core import (
    AtomPhotonProcess,
    BornsimError,
    CompletenessReport,
    FockState,
    OutcomeStatistics,
    PhotonSharing,
    PhotonState,
    ProjectorSet,
    QubitState,
    ScatteringProcess,
    analytic_weights,
    born_probabilities,
    build_atom_photon,
    builtin_process,
    cascade_distribution,
    certify_born_equivalence,
    dominant_eigenprojection,
    load_process_table,
    local_outcome,
    rayleigh_oracle,
    run_history_experiment,
    run_trials,
    sample_photon,
    stripped_weights,
    validate,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
