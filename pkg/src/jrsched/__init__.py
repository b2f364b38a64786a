"""Joint replenishment combined with single machine scheduling, objective
max flow time plus replenishment cost: online simulation engine and trigger
policy, exact offline solvers, analytic bounds, adaptive lower-bound games,
seeded generators, and a CSV experiment harness.
"""

from .adversary import GameReport, three_job_game, three_job_opt_menu, two_job_game, two_job_opt_menu
from .generators import (
    GenKind,
    GenSpec,
    SplitMix64,
    derive_seed,
    gen_geometric,
    gen_pbounded_uniform,
    gen_pregular,
    gen_sparse,
    generate,
    is_pbounded,
    is_pregular,
    is_sparse,
)
from .model import (
    CostBreakdown,
    GeneralInstance,
    Instance,
    InstanceError,
    Solution,
    SolutionError,
    asap_schedule,
    bracket_inputs,
    evaluate,
    to_general,
    to_unit,
    validate_instance,
)
from .offline import (
    OptResult,
    PRegularBounds,
    SolverCapError,
    block_partition_greedy,
    brute_force_opt,
    pregular_bounds,
    pregular_cost_with_q,
    pregular_opt,
    pregular_witness,
    threshold_dp_opt,
)
from .online import (
    Algorithm1Policy,
    DivergenceError,
    PolicyAction,
    PolicyObservation,
    Trace,
    algorithm1_policy,
    algorithm1_trace_violations,
    make_policy,
    pending_fmax,
    simulate,
)
from .experiment import ExperimentConfig, ExperimentRecord, run_experiment

__version__ = "0.1.0"
