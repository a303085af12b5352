"""Two-photon Jaynes-Cummings simulation of ladder-operator photon
addition and subtraction on a truncated Fock space."""

from .errors import (
    AllMassRemoved,
    ConfigInvalid,
    DiagonalizationFailure,
    DimensionMismatch,
    IoFailure,
    TpjcError,
    TruncationTooSmall,
    ZeroMeanPhoton,
)
from .fock import (
    DEFAULT_TOL,
    LOW_MASS_TOL,
    DensityMatrix,
    FockVector,
    QubitFieldState,
    Tolerances,
    WarningLog,
    apply_annihilation,
    apply_lower,
    apply_lower_dm,
    apply_number,
    apply_parity,
    apply_raise,
    default_dim,
    fidelity,
    fock_distribution,
    make_coherent,
    make_fock,
    mean_photon,
    photon_moment2,
    pure_density,
)
from .sg import (
    EigenResidual,
    Mode,
    SgStateSpec,
    add_photons_ideal,
    apply_A,
    eigen_residual,
    ideal_state,
    low_component_mass,
    mandel_q,
    mandel_q_coherent_predict,
    mandel_q_shift_predict,
    subtract_photons_ideal,
    subtracted_mean_predict,
)
from .dynamics import (
    ProtocolResult,
    RabiFrequency,
    TpjcParams,
    approx_error,
    build_hamiltonian,
    evolve_closed_form,
    evolve_oracle,
    pass_add,
    pass_subtract,
    run_protocol,
)
from .experiment import (
    ExperimentConfig,
    OracleReport,
    approx_error_table,
    emit_distribution_csv,
    emit_fidelity_csv,
    emit_json,
    load_config,
    load_result,
    oracle_check,
    run,
    run_experiment,
)

__version__ = "0.1.0"
