"""Channel-level lower bound on the quantum Fisher information.

The core quantity is F_down = (rho'|rho') - |(rho|rho')|^2 / (rho|rho),
a QFI lower bound computable directly from the state and its parameter
derivative in Liouville space, plus the machinery to maximize it over
initial states of N-fold product channels and the estimation-scenario
analytics built on top (optimal interrogation times, precision scaling,
lossy interferometry, entangled coherent states).
"""
from __future__ import annotations

from . import errors
from .bound import (
    BoundResult,
    OptimalStateResult,
    analytic_max_phase_covariant,
    associated_qfi,
    bures_distance_liouville,
    ghz_state,
    lower_bound_from_channel,
    lower_bound_from_state,
    max_bound_over_states,
)
from .channels import (
    AMPLITUDE_DAMPING,
    DEPHASING,
    DEPOLARIZING,
    EXPONENTIAL_FORM,
    TRUNCATED_FORM,
    EcsSpec,
    InterferometerSpec,
    NoiseParams,
    ShortTimeModel,
    correlated_dephasing_diag,
    correlated_dephasing_family,
    ecs_state,
    ecs_vector,
    interferometer_family,
    loss_kraus,
    named_noise,
    params_at,
    phase_covariant_family,
    rotation_family,
)
from .liouville import (
    ChannelFamily,
    GramTriple,
    LiouvilleVector,
    Superoperator,
    devectorize,
    gram_tensor_power,
    gram_triple,
    liouville_inner,
    product_family,
    superop_from_kraus,
    tensor_power,
    tensor_power_derivative,
    vectorize,
)
from .metrology import (
    EcsBreakdown,
    PrecisionConfig,
    ScalingResult,
    correlated_gram_max,
    ecs_lower_bound_closed,
    ecs_lower_bound_numeric,
    ecs_lower_bound_practical,
    ecs_practical_forms,
    interferometer_gram_diag,
    interferometer_optimal_m,
    precision_scaling,
    t_opt_numeric,
    t_opt_paper,
    tau_solve,
)
from .qfi_oracle import (
    Povm,
    SldResult,
    bures_distance_exact,
    classical_bound,
    classical_fisher,
    exact_qfi,
    optimal_povm_from_rho_prime,
    pure_state_qfi,
)
from .sampling import (
    random_cptp_params,
    random_hermitian,
    random_kraus_set,
    random_mixed_state,
    random_noisy_family,
    random_pure_state,
    random_short_time_model,
    random_unitary,
    random_unitary_family,
)
from .verify import DEFAULT_SEED, VERIFY_REPORT_SCHEMA, corrupt_family, run_verification

__version__ = "0.1.0"

__all__ = [
    "AMPLITUDE_DAMPING",
    "BoundResult",
    "ChannelFamily",
    "DEFAULT_SEED",
    "DEPHASING",
    "DEPOLARIZING",
    "EXPONENTIAL_FORM",
    "EcsBreakdown",
    "EcsSpec",
    "GramTriple",
    "InterferometerSpec",
    "LiouvilleVector",
    "NoiseParams",
    "OptimalStateResult",
    "Povm",
    "PrecisionConfig",
    "ScalingResult",
    "ShortTimeModel",
    "SldResult",
    "Superoperator",
    "TRUNCATED_FORM",
    "VERIFY_REPORT_SCHEMA",
    "analytic_max_phase_covariant",
    "associated_qfi",
    "bures_distance_exact",
    "bures_distance_liouville",
    "classical_bound",
    "classical_fisher",
    "correlated_dephasing_diag",
    "correlated_dephasing_family",
    "correlated_gram_max",
    "corrupt_family",
    "devectorize",
    "ecs_lower_bound_closed",
    "ecs_lower_bound_numeric",
    "ecs_lower_bound_practical",
    "ecs_practical_forms",
    "ecs_state",
    "ecs_vector",
    "errors",
    "exact_qfi",
    "ghz_state",
    "gram_tensor_power",
    "gram_triple",
    "interferometer_family",
    "interferometer_gram_diag",
    "interferometer_optimal_m",
    "liouville_inner",
    "loss_kraus",
    "lower_bound_from_channel",
    "lower_bound_from_state",
    "max_bound_over_states",
    "named_noise",
    "optimal_povm_from_rho_prime",
    "params_at",
    "phase_covariant_family",
    "precision_scaling",
    "product_family",
    "pure_state_qfi",
    "random_cptp_params",
    "random_hermitian",
    "random_kraus_set",
    "random_mixed_state",
    "random_noisy_family",
    "random_pure_state",
    "random_short_time_model",
    "random_unitary",
    "random_unitary_family",
    "rotation_family",
    "run_verification",
    "superop_from_kraus",
    "t_opt_numeric",
    "t_opt_paper",
    "tau_solve",
    "tensor_power",
    "tensor_power_derivative",
    "vectorize",
]
