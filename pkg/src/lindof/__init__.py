"""Zero-forcing scheduling and erasure Monte Carlo experiments for linear
interference networks."""

__version__ = "0.1.0"

from .assignment import (
    MessageAssignment,
    RuleOverlapWarning,
    assignment_label,
    build_assignment,
    format_assignment,
    helper_fraction,
    random_assignment,
    remove_transmitter,
    restrict_to_cluster,
)
from .montecarlo import (
    AssignmentSpec,
    SweepConfig,
    SweepRow,
    TableRow,
    best_assignment_table,
    estimate_pudof,
    read_sweep_csv,
    sweep,
    write_sweep_csv,
)
from .network import (
    Cluster,
    NetworkRealization,
    attach_generic_coefficients,
    derive_seed,
    parse_realization,
    partition_into_clusters,
    realization_to_string,
    sample_realization,
)
from .oracle import (
    CarrierConfig,
    EXACT_ORACLE_K_LIMIT,
    EXACT_SCHEDULER_K_LIMIT,
    ORACLE_K_LIMIT,
    exact_expected_dof,
    feasible,
    optimal_zero_forcing_dof,
)
from .scheduler import (
    BeamformingPlan,
    Schedule,
    ZeroForcingReport,
    build_transmit_signals,
    dof,
    schedule_cluster,
    schedule_network,
    verify_zero_forcing,
)

__all__ = [name for name in dir() if not name.startswith("_")]
