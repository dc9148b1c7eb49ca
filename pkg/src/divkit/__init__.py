"""divkit: solution-divergence metrics, divergence-fused rewards, and the Maze task."""

from .analysis import (
    DifficultyBuckets,
    ModelRow,
    RegressionFit,
    TrialMatrix,
    bucket_by_difficulty,
    divergence_performance_table,
    fit_line,
    pass_at_k,
)
from .curation import (
    CandidatePool,
    GreedyDecision,
    SelectionResult,
    build_sft_splits,
    greedy_update,
    select_extremal_subsets,
)
from .divergence import (
    Convention,
    DivergenceReport,
    ModelDivergence,
    RelationGraph,
    Solution,
    SolutionSet,
    divergence_global,
    divergence_local,
    divergence_matrix,
    divergence_report,
    laplacian_matrix,
    laplacian_spectrum,
    levenshtein,
    model_divergence,
    normalized_divergence,
    oversample,
    relation_graph,
    zeta_global_spectral,
    zeta_local_spectral,
)
from .errors import DivkitError, DomainError, EnumerationLimitError, SchemaError
from .maze import (
    FailureReason,
    MazePath,
    MazeSpec,
    MazeVerdict,
    count_paths,
    enumerate_paths,
    generate_maze,
    parse_path,
    render_path,
    sample_paths,
    verify_path,
)
from .reward import (
    BaselineMode,
    GroupScore,
    ObjectiveConfig,
    RewardConfig,
    TokenBatch,
    advantages,
    binary_group_rewards,
    binary_reward,
    closed_form_group_total,
    group_rewards,
    solution_reward,
    token_objective,
)

__version__ = "0.1.0"
