"""Optimal and sub-optimal discrimination of finite-dimensional quantum states and channels."""
from .channels import (
    KrausChannel,
    ProbeResult,
    SearchConfig,
    apply,
    apply_extended,
    best_entangled_probe,
    best_unentangled_probe,
    depolarizing_channel,
    discriminate_with_probe,
    identity_channel,
)
from .errors import DiscrimError, DomainError, ResourceError, ValidationError
from .helstrom import (
    BinaryEnsemble,
    DiscriminationResult,
    Povm,
    UnambiguousResult,
    average_cost,
    helstrom_matrix,
    optimal_discrimination,
    pure_state_error,
    unambiguous_discrimination,
)
from .multicopy import (
    BoundReport,
    bhattacharya_bounds,
    bound_report,
    chernoff_q,
    classical_chernoff_exponent,
    exact_mcopy_error,
    fidelity_bounds,
    pure_mcopy_error,
    qcb_bound,
    quantum_chernoff,
)
from .operators import (
    SpectralDecomposition,
    fidelity,
    fractional_power,
    partial_trace,
    spectral_decompose,
    tensor_power,
    trace_norm,
)
from .strategies import (
    SimulationConfig,
    SimulationReport,
    StrategySpec,
    adaptive_local_error,
    fixed_individual_error,
    simulate,
)

__version__ = "0.1.0"
