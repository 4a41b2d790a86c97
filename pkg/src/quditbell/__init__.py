"""quditbell: qudit Bell-inequality analysis and entanglement-based
key-distribution simulation with multiport beam splitter measurements."""

from .algebra import (
    DegenerateStateError,
    DensityState,
    DimensionMismatchError,
    EntangledState,
    InvalidDimensionError,
    REFERENCE_STATES,
    fourier_matrix,
    make_state,
    maximally_entangled,
    omega,
    psi3,
    psi4,
    psi5,
    roots_of_unity,
    tensor,
)
from .ditter import (
    DitterObservable,
    ExponentConstraintError,
    InvalidPhaseError,
    JointDistribution,
    LabelConvention,
    PhaseVector,
    ditter_observable,
    geometric_phases,
    outcome_distribution,
    power_observable,
    product_observable,
    product_phases,
)
from .bell import (
    BasisAssignment,
    BellMonomial,
    BellOperator,
    builtin_operator,
    canonical_basis,
    correlation,
    exponent_basis,
    lhv_max,
    optimize_basis,
    protocol_basis,
    theta_scan,
    violation,
)
from .protocol import (
    InsufficientDataError,
    ProtocolConfig,
    RoundRecord,
    TranscriptSummary,
    correlation_spectrum,
    estimate_violation,
    run_protocol,
    sift,
    write_transcript_csv,
)
from .security import (
    CLONER_FIDELITY,
    NDEB_VIOLATIONS,
    NoViolationError,
    SecurityReport,
    apply_isotropic_noise,
    channel_fidelity,
    comparison_report,
    criterion_table,
    noise_threshold,
    secure_channel_condition,
    security_criterion,
)

__version__ = "0.1.0"
