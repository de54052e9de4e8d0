"""Diagonal quantum discord: measures, channel classification, experiments."""

from .errors import (
    ConvergenceFailure,
    DegenerateMarginal,
    DegenerateOutput,
    DiagDiscordError,
    DimensionMismatch,
    InvalidBasis,
    InvalidChannel,
    InvalidDistribution,
    InvalidP,
    InvalidRank,
    NotDensityMatrix,
    NotHermitian,
    NotPositiveSemidefinite,
    OutOfDomain,
    OutOfRange,
    ParseError,
    SupportViolation,
)
from .linalg import (
    SpectralDecomposition,
    binary_entropy,
    hermitian_eig,
    kron,
    relative_entropy,
    schatten_norm,
    trace_norm,
    von_neumann_entropy,
)
from .states import (
    SU4_GENERATORS,
    BipartiteState,
    MultipartiteState,
    XStateParams,
    bloch_vector,
    classical_quantum_state,
    load_state,
    partial_trace_a,
    partial_trace_b,
    sample_random_bipartite,
    sample_x_params,
    sample_x_state,
    save_state,
    x_state_from_params,
)
from .channels import (
    ChannelReport,
    IsotropicChannel,
    KrausChannel,
    MixedUnitaryChannel,
    QuantumChannel,
    SemiclassicalChannel,
    amplitude_damping,
    commutes_with_pi,
    is_discord_nongenerating,
    load_channel,
    probabilistic_hadamard,
    qubit_mu_commuting_condition,
    save_channel,
)
from .discord import (
    OptimizedDiscordResult,
    PiResult,
    RelativeEntropy,
    SchattenNorm,
    continuity_bound,
    diagonal_discord,
    diagonal_discord_via_mi,
    generalized_discord,
    mutual_information,
    optimized_discord_2q,
    pi_a,
    pi_multi,
    schatten_continuity_bound,
)
from .experiments import (
    ExperimentRecord,
    run_channel_classification,
    run_continuity_check,
    run_monotonicity,
    run_xstate_comparison,
)

__version__ = "0.1.0"
