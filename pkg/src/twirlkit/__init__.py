"""Two-qubit toolkit: twirling, geometric discord, and key distribution.

The package provides validated two-qubit density matrices with cached
Pauli decompositions, constructors for the standard state families, the
U x U* twirling channel (exact and Monte Carlo), joint measurement
statistics and a seeded simulator of the entanglement-based key
distribution scheme, plus geometric discord, concurrence and their
relations to the achievable key error rate.
"""

from .errors import (
    BranchConditionError,
    ConditionsNotMetError,
    EmptySiftedSetError,
    InvalidSpecError,
    InvalidXParamsError,
    NonHermitianError,
    NotADistributionError,
    NotPositiveError,
    OutOfRangeError,
    SchemaError,
    TraceNotOneError,
    TwirlkitError,
)
from .measures import (
    DiscordResult,
    KPair,
    TwirlComparison,
    binary_entropy,
    concurrence,
    cq_state,
    delta_min_from_discord,
    discord_error_rate_bound,
    discord_eigen,
    discord_grid_oracle,
    discord_x_closed_form,
    entanglement_of_formation,
    k_values,
    twirl_discord_comparison,
)
from .protocol import (
    SETTING_X,
    SETTING_Y,
    MeasurementSetting,
    MinErrorRate,
    OptimalPartner,
    OutcomeDistribution,
    ProtocolRun,
    correlation,
    error_rate,
    min_error_rate,
    optimal_partner,
    outcome_probs,
    random_key_bias,
    simulate_protocol,
)
from .qubit_algebra import (
    ID2,
    ID4,
    PAULIS,
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    PauliDecomposition,
    TwoQubitState,
    hermitian_eigenvalues,
    hs_norm_sq,
    pauli_compose,
    pauli_decompose,
    pauli_sigma,
    tensor,
    validate_density,
)
from .states import (
    BELL_KINDS,
    XStateParams,
    bell,
    depolarized_pure,
    fidelity_phi_plus,
    load_state_file,
    pure_state,
    random_state,
    state_from_dict,
    werner,
    x_state,
)
from .twirl import (
    TwirlReport,
    conjugate_pair_apply,
    haar_su2,
    trace_distance,
    twirl_analytic,
    twirl_monte_carlo,
)

__version__ = "0.1.0"

__all__ = [
    "BELL_KINDS",
    "BranchConditionError",
    "ConditionsNotMetError",
    "DiscordResult",
    "EmptySiftedSetError",
    "ID2",
    "ID4",
    "InvalidSpecError",
    "InvalidXParamsError",
    "KPair",
    "MeasurementSetting",
    "MinErrorRate",
    "NonHermitianError",
    "NotADistributionError",
    "NotPositiveError",
    "OptimalPartner",
    "OutOfRangeError",
    "OutcomeDistribution",
    "PauliDecomposition",
    "PAULIS",
    "ProtocolRun",
    "SETTING_X",
    "SETTING_Y",
    "SIGMA_X",
    "SIGMA_Y",
    "SIGMA_Z",
    "SchemaError",
    "TraceNotOneError",
    "TwirlComparison",
    "TwirlReport",
    "TwirlkitError",
    "TwoQubitState",
    "XStateParams",
    "bell",
    "binary_entropy",
    "concurrence",
    "conjugate_pair_apply",
    "correlation",
    "cq_state",
    "delta_min_from_discord",
    "depolarized_pure",
    "discord_eigen",
    "discord_error_rate_bound",
    "discord_grid_oracle",
    "discord_x_closed_form",
    "entanglement_of_formation",
    "error_rate",
    "fidelity_phi_plus",
    "haar_su2",
    "hermitian_eigenvalues",
    "hs_norm_sq",
    "k_values",
    "load_state_file",
    "min_error_rate",
    "optimal_partner",
    "outcome_probs",
    "pauli_compose",
    "pauli_decompose",
    "pauli_sigma",
    "pure_state",
    "random_key_bias",
    "random_state",
    "simulate_protocol",
    "state_from_dict",
    "tensor",
    "trace_distance",
    "twirl_analytic",
    "twirl_discord_comparison",
    "twirl_monte_carlo",
    "validate_density",
    "werner",
    "x_state",
]
