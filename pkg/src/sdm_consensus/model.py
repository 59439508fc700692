"""Domain types: participants, preference profiles, configuration, results."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Mapping

from .errors import ValidationError

#: Default four-level scale offered to decision makers when scoring an
#: alternative against a criterion. Scores are continuous in [0, 1] inside
#: the engine; the scale is an input convention, and it is configurable
#: per session.
DEFAULT_SCALE_LEVELS = (
    ("very high", 1.0),
    ("high", 0.7),
    ("moderate", 0.5),
    ("low", 0.3),
)


class Role(str, Enum):
    """Participant role. Exactly one SDM anchors each session."""

    SDM = "sdm"
    DM = "dm"


class SocialWeightMode(str, Enum):
    """How the social weight decays with the excess distance.

    WORKED:  weight = exp(-excess); the default, and what the bundled
             demo scenario's tables reproduce.
    LITERAL: weight = exp(-consensus_level * excess); the excess is scaled
             by the consensus level before the exponential decay.
    """

    WORKED = "worked"
    LITERAL = "literal"


@dataclass(frozen=True)
class Alternative:
    """One option under decision. List position defines its index for tie-breaks."""

    id: str
    name: str = ""

    def __post_init__(self):
        if not self.id:
            raise ValidationError("alternative id must be non-empty")


@dataclass(frozen=True)
class Criterion:
    id: str
    name: str = ""
    description: str = ""

    def __post_init__(self):
        if not self.id:
            raise ValidationError("criterion id must be non-empty")


@dataclass(frozen=True)
class DecisionMaker:
    id: str
    name: str = ""
    role: Role = Role.DM
    reputation: float = 0.0

    def __post_init__(self):
        if not self.id:
            raise ValidationError("decision maker id must be non-empty")
        if self.reputation < 0:
            raise ValidationError(
                f"reputation must be nonnegative, got {self.reputation}",
                detail=self.id,
            )


@dataclass(frozen=True)
class ScoreScale:
    """Ordered label/value pairs; values strictly decreasing within [0, 1]."""

    levels: tuple[tuple[str, float], ...] = DEFAULT_SCALE_LEVELS

    def __post_init__(self):
        if not self.levels:
            raise ValidationError("score scale must have at least one level")
        previous = None
        for label, value in self.levels:
            if not 0.0 <= value <= 1.0:
                raise ValidationError(
                    f"scale value {value!r} for {label!r} outside [0, 1]", detail=label
                )
            if previous is not None and value >= previous:
                raise ValidationError(
                    "scale values must be strictly decreasing", detail=label
                )
            previous = value

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(label for label, _ in self.levels)

    @property
    def values(self) -> tuple[float, ...]:
        return tuple(value for _, value in self.levels)


@dataclass(frozen=True)
class PreferenceProfile:
    """One decision maker's criterion weights and criterion-by-alternative scores.

    ``criterion_weights`` maps criterion id to a weight in [0, 1];
    ``scores`` maps criterion id, then alternative id, to a score in [0, 1].
    Weights are deliberately not normalized to sum to 1.
    """

    dm_id: str
    criterion_weights: Mapping[str, float]
    scores: Mapping[str, Mapping[str, float]]


@dataclass(frozen=True)
class EvaluationVector:
    """Weighted-sum evaluation per alternative for one decision maker."""

    dm_id: str
    values: Mapping[str, float]

    @property
    def alternative_ids(self) -> tuple[str, ...]:
        return tuple(self.values)


@dataclass(frozen=True)
class ConsensusConfig:
    """Session-wide consensus parameters agreed before the first round.

    ``consensus_level`` is the group's agreed level in [0, 1]; its
    complement ``max_distance`` is the largest per-alternative distance to
    the SDM that still counts as consensus. ``epsilon`` absorbs
    floating-point noise in the boundary comparison.
    """

    consensus_level: float
    social_mode: SocialWeightMode = SocialWeightMode.WORKED
    max_rounds: int = 10
    epsilon: float = 1e-9

    def __post_init__(self):
        if not 0.0 <= self.consensus_level <= 1.0:
            raise ValidationError(
                f"consensus level must be in [0, 1], got {self.consensus_level}"
            )
        if self.max_rounds < 1:
            raise ValidationError(f"max_rounds must be positive, got {self.max_rounds}")
        if self.epsilon < 0:
            raise ValidationError(f"epsilon must be nonnegative, got {self.epsilon}")

    @property
    def max_distance(self) -> float:
        return 1.0 - self.consensus_level


@dataclass(frozen=True)
class AlternativeAssessment:
    """Consensus check of one decision maker on one alternative.

    ``distance`` is the absolute difference to the SDM's evaluation,
    ``excess`` the amount above the tolerated maximum (0 when within it),
    and ``weight`` the social weight applied at aggregation (1 when in
    consensus).
    """

    distance: float
    excess: float
    in_consensus: bool
    weight: float


@dataclass(frozen=True)
class ConsensusAssessment:
    """Per-alternative consensus state of one decision maker against the SDM."""

    dm_id: str
    per_alternative: Mapping[str, AlternativeAssessment]
    consensus_count: int
    majority_reached: bool


@dataclass(frozen=True)
class AggregationResult:
    """Socially weighted group aggregation and the resulting ranking.

    ``contributions[dm][alt]`` is weight * evaluation; ``totals[alt]`` the
    column sum over all participants; ``ranking`` lists alternative ids
    best-first. ``forced`` marks a result produced at the round limit with
    unresolved dissent.
    """

    contributions: Mapping[str, Mapping[str, float]]
    totals: Mapping[str, float]
    ranking: tuple[str, ...]
    forced: bool = False
