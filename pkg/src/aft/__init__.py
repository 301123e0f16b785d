"""Abstract flows over time with exact arithmetic.

Builds the temporally repeated maximum flow and a matching minimum cut over
time from one static weighted abstract flow LP, and checks both against
brute-force optima on the time expansion.
"""

from .dynamic import (
    Certificate,
    CutSchedule,
    TemporallyRepeatedFlow,
    build_cut_schedule,
    build_temporally_repeated,
    certify,
    verify_cut_covers_strict,
    verify_cut_covers_waiting,
)
from .errors import (
    AftError,
    CutInconsistencyError,
    DomainError,
    FalsificationError,
    GenerationError,
    InstanceError,
    PreconditionError,
    ScaleError,
    StructuralInconsistencyError,
    SwitchingViolationError,
    TDIViolationError,
)
from .expansion import (
    CutOverTime,
    FlowOverTime,
    TemporalPath,
    WaitingSchedule,
    check_expansion_switching,
    check_weak_duality,
    entry_time,
    expand,
    temporal_path,
    waiting_path,
    waiting_schedules,
)
from .network import (
    AbstractNetwork,
    Element,
    SwitchWitness,
    canonical_switch,
    check_no_inclusion,
    check_order_preservation,
    closed_prefix,
    closed_suffix,
    element,
    open_prefix,
    open_suffix,
    reduce_assumption2,
    validate_switching,
)
from .oracle import OracleResult, classical_max_flow_over_time, oracle_strict, oracle_waiting
from .static import (
    StaticSolution,
    build_horizon_weights,
    check_supermodular,
    integral_duals,
    solve_weighted_abstract_flow,
)

__version__ = "0.1.0"
