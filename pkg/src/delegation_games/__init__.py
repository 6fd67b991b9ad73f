"""Control and cooperation measures for multi-principal multi-agent delegation games.

A delegation game pairs the strategic-form game played by n machine agents
with the payoffs of the n humans they act for.  This package computes the
four measures that determine how the principals fare (individual/collective
alignment and capabilities), enumerates pure (eps-)Nash equilibria, evaluates
the welfare-regret bounds those measures induce, generates random games with
prescribed measure values, and estimates the measures from observed play.
"""

from .bounds import (
    BoundReport,
    alignment_regret_bound,
    bound_report,
    capabilities_regret_bound,
    exact_remainder,
    ideal_gap_bound,
    principal_optimum,
    remainder_bound,
    robustness_gap_bound,
)
from .equilibria import (
    EquilibriumSet,
    admissible_outcomes,
    epsilon_tensor,
    equilibrium_welfares,
    pure_best_responses,
    pure_eps_nash,
)
from .errors import (
    DegenerateGameError,
    DelegationError,
    DelegationWarning,
    GenerationFailureError,
    InsufficientDataError,
    InvalidArgumentError,
    NoEquilibriumError,
    PreconditionViolationError,
    SimulationError,
    UnsupportedNormError,
)
from .game import (
    DelegationGame,
    WelfareLandmarks,
    all_profiles,
    outcome_index,
    payoff,
    validate_game,
    welfare,
    welfare_landmarks,
)
from .generator import (
    GeneratorSpec,
    adjust_collective_alignment,
    direction_at_distance,
    make_fragile_game,
    make_prisoners_dilemma,
    make_travellers_dilemma,
    make_worked_example,
    random_delegation_game,
    sample_direction,
)
from .inference import (
    AlignmentEstimate,
    IcEstimate,
    MaeRow,
    Observation,
    ObservationDataset,
    dataset_from_jsonl,
    dataset_to_jsonl,
    estimate_alignment,
    estimate_cc_upper,
    estimate_ic_upper,
    mae_curve,
    simulate_play,
    validate_dataset,
)
from .measures import (
    MeasureReport,
    calibration_ratios,
    collective_alignment,
    collective_capability,
    full_report,
    individual_alignment,
    individual_capability,
    profile_epsilons,
    welfare_proxy,
)
from .normalization import (
    DEFAULT_CONFIG,
    WORKED_EXAMPLE_CONFIG,
    NormalizationConfig,
    NormalizedUtility,
    equivalence_constant,
    norm_distance,
    norm_value,
    normalize,
    shift,
    uniform_weights,
)
from .sweep import SweepConfig, SweepRow, rows_from_csv, rows_to_csv, sweep

__version__ = "0.1.0"
