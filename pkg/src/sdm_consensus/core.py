"""Core consensus mathematics.

Pure, deterministic functions: weighted-sum evaluation, distances to the
SDM, consensus gating, social weighting, weighted aggregation, and ranking.
Hot loops are delegated to the kernel backend (compiled or pure Python; see
:mod:`sdm_consensus.kernels`).

Consensus is gated per alternative on the absolute difference to the SDM's
evaluation; :func:`rms_distance` is a whole-profile diagnostic and plays no
part in the gate.
"""

from __future__ import annotations

import math
import warnings
from array import array
from typing import Iterable, Mapping, Sequence

from . import kernels
from .errors import (
    IncompleteProfileError,
    IncompleteRoundError,
    UnknownAlternativeError,
    ValidationError,
    WeightSumWarning,
)
from .model import (
    AggregationResult,
    Alternative,
    AlternativeAssessment,
    ConsensusAssessment,
    ConsensusConfig,
    Criterion,
    EvaluationVector,
    PreferenceProfile,
    SocialWeightMode,
)

__all__ = [
    "validate_profile",
    "evaluate",
    "per_alternative_distance",
    "rms_distance",
    "max_distance_from_level",
    "excess_distance",
    "social_weight",
    "assess",
    "majority_threshold",
    "majority_reached",
    "aggregate",
    "rank",
]


def validate_profile(
    profile: PreferenceProfile,
    criteria: Sequence[Criterion],
    alternatives: Sequence[Alternative],
) -> None:
    """Check completeness and [0, 1] ranges; warn when weights sum above 1.

    Raises :class:`IncompleteProfileError` naming the first missing key, or
    :class:`ValidationError` for out-of-range values and unknown ids.
    """
    criterion_ids = {c.id for c in criteria}
    alternative_ids = {a.id for a in alternatives}

    for key in profile.criterion_weights:
        if key not in criterion_ids:
            raise ValidationError(
                f"profile {profile.dm_id}: unknown criterion {key!r} in weights",
                detail=key,
            )
    for key in profile.scores:
        if key not in criterion_ids:
            raise ValidationError(
                f"profile {profile.dm_id}: unknown criterion {key!r} in scores",
                detail=key,
            )

    weight_sum = 0.0
    for criterion in criteria:
        if criterion.id not in profile.criterion_weights:
            raise IncompleteProfileError(
                f"profile {profile.dm_id}: missing weight for criterion {criterion.id!r}",
                detail=criterion.id,
            )
        weight = profile.criterion_weights[criterion.id]
        if not 0.0 <= weight <= 1.0:
            raise ValidationError(
                f"profile {profile.dm_id}: weight {weight!r} for {criterion.id!r} "
                "outside [0, 1]",
                detail=criterion.id,
            )
        weight_sum += weight
        row = profile.scores.get(criterion.id)
        if row is None:
            raise IncompleteProfileError(
                f"profile {profile.dm_id}: missing score row for criterion "
                f"{criterion.id!r}",
                detail=criterion.id,
            )
        for alternative in alternatives:
            if alternative.id not in row:
                raise IncompleteProfileError(
                    f"profile {profile.dm_id}: missing score for "
                    f"({criterion.id!r}, {alternative.id!r})",
                    detail=f"{criterion.id}/{alternative.id}",
                )
            score = row[alternative.id]
            if not 0.0 <= score <= 1.0:
                raise ValidationError(
                    f"profile {profile.dm_id}: score {score!r} for "
                    f"({criterion.id!r}, {alternative.id!r}) outside [0, 1]",
                    detail=f"{criterion.id}/{alternative.id}",
                )
        for key in row:
            if key not in alternative_ids:
                raise ValidationError(
                    f"profile {profile.dm_id}: unknown alternative {key!r} in scores",
                    detail=key,
                )

    # Tolerance keeps exact sums like 0.3+0.5+0.2 from tripping the warning.
    if weight_sum > 1.0 + 1e-12:
        warnings.warn(
            f"profile {profile.dm_id}: criterion weights sum to {weight_sum:.6g} > 1; "
            "evaluations and distances may exceed 1",
            WeightSumWarning,
            stacklevel=2,
        )


def evaluate(
    profile: PreferenceProfile,
    criteria: Sequence[Criterion],
    alternatives: Sequence[Alternative],
) -> EvaluationVector:
    """Weighted-sum evaluation of every alternative for one decision maker."""
    validate_profile(profile, criteria, alternatives)
    weights = array("d", (profile.criterion_weights[c.id] for c in criteria))
    scores = array(
        "d", (profile.scores[c.id][a.id] for c in criteria for a in alternatives)
    )
    values = kernels.evaluate_matrix(weights, scores, len(alternatives))
    return EvaluationVector(
        dm_id=profile.dm_id,
        values={a.id: v for a, v in zip(alternatives, values)},
    )


def _aligned_values(
    f_i: EvaluationVector, f_j: EvaluationVector
) -> tuple[tuple[str, ...], array, array]:
    ids = f_i.alternative_ids
    if not ids:
        raise ValidationError("evaluation vectors must be nonempty")
    if set(ids) != set(f_j.alternative_ids):
        raise ValidationError(
            f"evaluation vectors cover different alternatives: "
            f"{sorted(f_i.values)} vs {sorted(f_j.values)}"
        )
    left = array("d", (f_i.values[a] for a in ids))
    right = array("d", (f_j.values[a] for a in ids))
    return ids, left, right


def per_alternative_distance(
    f_i: EvaluationVector, f_sdm: EvaluationVector, alternative_id: str
) -> float:
    """Absolute difference of the two evaluations on one alternative."""
    for vector in (f_i, f_sdm):
        if alternative_id not in vector.values:
            raise UnknownAlternativeError(
                f"alternative {alternative_id!r} absent from evaluation of "
                f"{vector.dm_id!r}",
                detail=alternative_id,
            )
    return abs(f_i.values[alternative_id] - f_sdm.values[alternative_id])


def rms_distance(f_i: EvaluationVector, f_j: EvaluationVector) -> float:
    """Root-mean-square distance across all alternatives (diagnostic)."""
    _, left, right = _aligned_values(f_i, f_j)
    return kernels.rms_distance(left, right)


def max_distance_from_level(consensus_level: float) -> float:
    """Largest tolerated distance to the SDM: 1 - consensus_level."""
    if not 0.0 <= consensus_level <= 1.0:
        raise ValidationError(
            f"consensus level must be in [0, 1], got {consensus_level}"
        )
    return 1.0 - consensus_level


def excess_distance(distance: float, max_distance: float) -> float:
    """Amount by which a distance exceeds the tolerated maximum (never negative)."""
    return max(0.0, distance - max_distance)


def social_weight(distance: float, config: ConsensusConfig) -> float:
    """Aggregation weight for one distance: 1 in consensus, else exponential decay."""
    if distance < 0:
        raise ValidationError(f"distance must be nonnegative, got {distance}")
    return kernels.social_weights(
        array("d", (distance,)),
        config.max_distance,
        config.consensus_level,
        config.social_mode is SocialWeightMode.LITERAL,
        config.epsilon,
    )[0]


def assess(
    f_i: EvaluationVector, f_sdm: EvaluationVector, config: ConsensusConfig
) -> ConsensusAssessment:
    """Per-alternative consensus check of one decision maker against the SDM."""
    ids, left, right = _aligned_values(f_i, f_sdm)
    distances = kernels.abs_differences(left, right)
    weights = kernels.social_weights(
        array("d", distances),
        config.max_distance,
        config.consensus_level,
        config.social_mode is SocialWeightMode.LITERAL,
        config.epsilon,
    )
    threshold = config.max_distance + config.epsilon
    per_alternative = {}
    consensus_count = 0
    for alt_id, distance, weight in zip(ids, distances, weights):
        in_consensus = distance <= threshold
        if in_consensus:
            consensus_count += 1
        per_alternative[alt_id] = AlternativeAssessment(
            distance=distance,
            excess=excess_distance(distance, config.max_distance),
            in_consensus=in_consensus,
            weight=weight,
        )
    return ConsensusAssessment(
        dm_id=f_i.dm_id,
        per_alternative=per_alternative,
        consensus_count=consensus_count,
        majority_reached=majority_reached(consensus_count, len(ids)),
    )


def majority_threshold(alternative_count: int) -> int:
    """Alternatives a decision maker must hold in consensus: ceil(count / 2)."""
    if alternative_count < 1:
        raise ValidationError(
            f"alternative count must be positive, got {alternative_count}"
        )
    return math.ceil(alternative_count / 2)


def majority_reached(consensus_count: int, alternative_count: int) -> bool:
    """Whether a decision maker's in-consensus count meets the majority rule."""
    threshold = majority_threshold(alternative_count)
    if not 0 <= consensus_count <= alternative_count:
        raise ValidationError(
            f"consensus count {consensus_count} outside [0, {alternative_count}]"
        )
    return consensus_count >= threshold


def aggregate(
    evaluations: Sequence[EvaluationVector],
    assessments: Iterable[ConsensusAssessment],
    sdm_id: str,
) -> AggregationResult:
    """Socially weighted aggregation over all participants, SDM weight fixed at 1.

    One evaluation per participant and one assessment per non-SDM
    participant are required; a missing assessment raises
    :class:`IncompleteRoundError`.
    """
    if not evaluations:
        raise ValidationError("at least one evaluation is required")
    by_dm = {v.dm_id: v for v in evaluations}
    if len(by_dm) != len(evaluations):
        raise ValidationError("duplicate evaluation vectors for a decision maker")
    if sdm_id not in by_dm:
        raise IncompleteRoundError(f"missing evaluation for SDM {sdm_id!r}")

    assessment_by_dm = {a.dm_id: a for a in assessments}
    alternative_ids = by_dm[sdm_id].alternative_ids

    n_alts = len(alternative_ids)
    values = array("d")
    weights = array("d")
    for vector in evaluations:
        if set(vector.alternative_ids) != set(alternative_ids):
            raise ValidationError(
                f"evaluation of {vector.dm_id!r} covers different alternatives"
            )
        if vector.dm_id == sdm_id:
            row_weights = [1.0] * n_alts
        else:
            assessment = assessment_by_dm.get(vector.dm_id)
            if assessment is None:
                raise IncompleteRoundError(
                    f"missing assessment for decision maker {vector.dm_id!r}",
                    detail=vector.dm_id,
                )
            row_weights = [
                assessment.per_alternative[a].weight for a in alternative_ids
            ]
        values.extend(vector.values[a] for a in alternative_ids)
        weights.extend(row_weights)

    totals_list = kernels.weighted_totals(values, weights, len(evaluations), n_alts)
    totals = dict(zip(alternative_ids, totals_list))

    contributions = {}
    for row, vector in enumerate(evaluations):
        base = row * n_alts
        contributions[vector.dm_id] = {
            a: values[base + i] * weights[base + i]
            for i, a in enumerate(alternative_ids)
        }

    return AggregationResult(
        contributions=contributions,
        totals=totals,
        ranking=rank(totals),
    )


def rank(totals: Mapping[str, float]) -> tuple[str, ...]:
    """Alternative ids sorted by total descending; ties go to the earlier index.

    The iteration order of ``totals`` defines each alternative's index.
    """
    if not totals:
        raise ValidationError("cannot rank an empty set of totals")
    indexed = list(totals.items())
    order = sorted(range(len(indexed)), key=lambda i: (-indexed[i][1], i))
    return tuple(indexed[i][0] for i in order)
