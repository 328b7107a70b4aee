"""Two-path interferometry on truncated two-mode Fock space: state
families, counting likelihoods, classical and quantum Fisher information,
Cramer-Rao bounds, and seeded maximum-likelihood phase estimation."""

__version__ = "0.1.0"

from .catalog import (
    InvalidNError,
    Moment,
    PhotonDistribution,
    PoleProximityError,
    TailTooHeavyError,
    distribution_from_state,
    dual_fock,
    dual_fock_after_bs_closed_form,
    noon,
    tmsv,
    tmsv_cutoff_for,
    tmsv_noon,
    zeta,
    zeta_dual_fock,
    zeta_noon,
    zeta_noon_doubled,
)
from .curves import SpecError, crossing_mean, fig3a_point, fig3b_point
from .estimation import (
    ConvergenceRow,
    DegenerateLikelihoodError,
    EstimationRun,
    crb_convergence_study,
    default_window,
    likelihood_period,
    mle_phase,
    run_estimation,
    sample_outcomes,
)
from .fisher import (
    CountingPOVM,
    FisherReport,
    NonpositiveQFIError,
    ZenoTime,
    classical_fi,
    fi_observable,
    fi_scan,
    j3_measurement_fi,
    likelihood,
    likelihood_with_derivative,
    max_qfi_bound,
    qfi_pure,
    sector_fi_decomposition,
    zeno_time,
)
from .fock import (
    CutoffViolationError,
    EmptyStateError,
    SectorComponent,
    TwoModeState,
    apply_beamsplitter,
    apply_phase,
    beamsplitter_matrix,
    expect,
    load_state,
    make_state,
    save_state,
    schwinger_matrices,
    sector_decompose,
    state_from_json_dict,
    state_to_json_dict,
    vacuum,
)

__all__ = [name for name in dir() if not name.startswith("_")]
