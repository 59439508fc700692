"""Group decision engine with SDM-anchored consensus.

Each decision maker scores alternatives against weighted criteria; the
per-alternative distance to the reputation-elected Supra Decision Maker
gates consensus, deviant opinions are exponentially down-weighted, and the
weighted aggregation yields the group ranking. An iterative revision
protocol drives dissenting members toward the consensus level.
"""

from .core import (
    aggregate,
    assess,
    evaluate,
    excess_distance,
    majority_reached,
    majority_threshold,
    max_distance_from_level,
    per_alternative_distance,
    rank,
    rms_distance,
    social_weight,
    validate_profile,
)
from .errors import (
    ConflictError,
    ConsensusError,
    ForbiddenError,
    ImmutableSessionError,
    IncompleteProfileError,
    IncompleteRoundError,
    MaxRoundsError,
    NotFoundError,
    ParseError,
    PrematureFinalizeError,
    SchemaVersionError,
    UnknownAlternativeError,
    UnknownParticipantError,
    UnknownSessionError,
    ValidationError,
    WeightSumWarning,
)
from .kernels import BACKEND
from .model import (
    AggregationResult,
    Alternative,
    AlternativeAssessment,
    ConsensusAssessment,
    ConsensusConfig,
    Criterion,
    DecisionMaker,
    EvaluationVector,
    PreferenceProfile,
    Role,
    ScoreScale,
    SocialWeightMode,
)
from .session import (
    AuditAction,
    AuditEntry,
    RoundReport,
    SessionState,
    SessionStatus,
    compute_round,
    create_session,
    elect_sdm,
    finalize,
    load_session,
    read_session_file,
    replay_audit,
    revise_preferences,
    save_session,
    session_from_document,
    session_to_document,
    submit_preferences,
    write_session_file,
)

__version__ = "0.1.0"
