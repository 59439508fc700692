"""Round-based consensus session protocol.

A session collects one preference profile per participant, assesses every
decision maker against the reputation-elected SDM each round, asks dissenting
members to revise, and finally aggregates with each member's latest social
weights. Every mutation appends to an audit log whose SUBMIT/REVISE entries
carry the full payload, so a session is replayable from its log.

Sessions persist as versioned JSON documents; ``save``/``load`` round-trip to
structural equality.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from dataclasses import dataclass, field, replace
from datetime import datetime, timezone
from enum import Enum
from pathlib import Path
from typing import Callable, Mapping, Sequence

from . import core
from .errors import (
    ConflictError,
    ForbiddenError,
    ImmutableSessionError,
    IncompleteRoundError,
    MaxRoundsError,
    ParseError,
    PrematureFinalizeError,
    SchemaVersionError,
    UnknownParticipantError,
    ValidationError,
)
from .model import (
    AggregationResult,
    Alternative,
    AlternativeAssessment,
    ConsensusAssessment,
    ConsensusConfig,
    Criterion,
    DecisionMaker,
    PreferenceProfile,
    Role,
    ScoreScale,
    SocialWeightMode,
)

SCHEMA_VERSION = 1

SYSTEM_ACTOR = "system"


class SessionStatus(str, Enum):
    COLLECTING = "collecting"
    ASSESSED = "assessed"
    FINALIZED = "finalized"


class AuditAction(str, Enum):
    CREATE = "create"
    SUBMIT = "submit"
    ASSESS = "assess"
    REVISE = "revise"
    FINALIZE = "finalize"


def _utc_now() -> str:
    return datetime.now(timezone.utc).isoformat()


def _digest(payload) -> str:
    canonical = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


@dataclass(frozen=True)
class AuditEntry:
    """Append-only record of one session event.

    ``seq`` is the monotonic order key; ``timestamp`` is wall-clock and
    informational. SUBMIT/REVISE entries carry the submitted profile as
    ``payload`` so the log alone can reproduce the session.
    """

    seq: int
    timestamp: str
    actor: str
    action: AuditAction
    digest: str
    payload: Mapping | None = None


@dataclass(frozen=True)
class RoundReport:
    """Outcome of one assessment round."""

    round: int
    assessments: Mapping[str, ConsensusAssessment]
    must_revise: tuple[str, ...]
    all_majority: bool


@dataclass
class SessionState:
    """Mutable record of one consensus session; ``round == len(history)`` always."""

    session_id: str
    config: ConsensusConfig
    criteria: tuple[Criterion, ...]
    alternatives: tuple[Alternative, ...]
    participants: tuple[DecisionMaker, ...]
    sdm_id: str
    scale: ScoreScale = field(default_factory=ScoreScale)
    round: int = 0
    profiles: dict[str, PreferenceProfile] = field(default_factory=dict)
    history: list[RoundReport] = field(default_factory=list)
    audit: list[AuditEntry] = field(default_factory=list)
    status: SessionStatus = SessionStatus.COLLECTING
    result: AggregationResult | None = None
    clock: Callable[[], str] = field(default=_utc_now, compare=False, repr=False)

    def participant(self, dm_id: str) -> DecisionMaker:
        for participant in self.participants:
            if participant.id == dm_id:
                return participant
        raise UnknownParticipantError(
            f"unknown decision maker {dm_id!r}", detail=dm_id
        )

    @property
    def non_sdm_ids(self) -> tuple[str, ...]:
        return tuple(p.id for p in self.participants if p.id != self.sdm_id)

    def latest_report(self) -> RoundReport:
        if not self.history:
            raise ConflictError("no assessment round computed yet")
        return self.history[-1]

    def _append_audit(self, actor: str, action: AuditAction, payload=None) -> None:
        self.audit.append(
            AuditEntry(
                seq=len(self.audit),
                timestamp=self.clock(),
                actor=actor,
                action=action,
                digest=_digest(payload),
                payload=payload,
            )
        )


def elect_sdm(participants: Sequence[DecisionMaker]) -> str:
    """Id of the highest-reputation participant; ties go to the smallest id."""
    if not participants:
        raise ValidationError("cannot elect an SDM from an empty participant list")
    best = min(participants, key=lambda p: (-p.reputation, p.id))
    return best.id


def _check_unique(ids: Sequence[str], kind: str, seen: set[str]) -> None:
    for item in ids:
        if item in seen:
            raise ValidationError(f"duplicate {kind} id {item!r}", detail=item)
        seen.add(item)


def create_session(
    config: ConsensusConfig,
    criteria: Sequence[Criterion],
    alternatives: Sequence[Alternative],
    participants: Sequence[DecisionMaker],
    *,
    scale: ScoreScale | None = None,
    session_id: str | None = None,
    clock: Callable[[], str] | None = None,
) -> SessionState:
    """Validate the setup, elect the SDM, and open the collection phase."""
    if len(participants) < 2:
        raise ValidationError("a session needs at least two participants")
    if not alternatives:
        raise ValidationError("a session needs at least one alternative")
    if not criteria:
        raise ValidationError("a session needs at least one criterion")
    seen: set[str] = set()
    _check_unique([c.id for c in criteria], "criterion", seen)
    _check_unique([a.id for a in alternatives], "alternative", seen)
    _check_unique([p.id for p in participants], "participant", seen)

    sdm_id = elect_sdm(participants)
    normalized = tuple(
        replace(p, role=Role.SDM if p.id == sdm_id else Role.DM) for p in participants
    )
    session = SessionState(
        session_id=session_id or os.urandom(8).hex(),
        config=config,
        criteria=tuple(criteria),
        alternatives=tuple(alternatives),
        participants=normalized,
        sdm_id=sdm_id,
        scale=scale if scale is not None else ScoreScale(),
        clock=clock if clock is not None else _utc_now,
    )
    session._append_audit(
        SYSTEM_ACTOR,
        AuditAction.CREATE,
        payload={
            "session_id": session.session_id,
            "consensus_level": config.consensus_level,
            "criteria": [c.id for c in criteria],
            "alternatives": [a.id for a in alternatives],
            "participants": [p.id for p in participants],
            "sdm_id": sdm_id,
        },
    )
    return session


def _guard_mutable(session: SessionState) -> None:
    if session.status is SessionStatus.FINALIZED:
        raise ImmutableSessionError(
            f"session {session.session_id!r} is finalized and immutable"
        )


def submit_preferences(
    session: SessionState, dm_id: str, profile: PreferenceProfile
) -> SessionState:
    """Store a participant's profile during collection.

    Once any round has been assessed, changing an existing profile is a
    revision and is routed through :func:`revise_preferences`. The SDM's
    stored profile is immutable at every stage.
    """
    _guard_mutable(session)
    session.participant(dm_id)
    if profile.dm_id != dm_id:
        raise ValidationError(
            f"profile dm_id {profile.dm_id!r} does not match {dm_id!r}"
        )
    if dm_id in session.profiles:
        if dm_id == session.sdm_id:
            raise ForbiddenError("the SDM cannot change her preference")
        if session.round >= 1:
            return revise_preferences(session, dm_id, profile)
    core.validate_profile(profile, session.criteria, session.alternatives)
    session.profiles[dm_id] = profile
    session._append_audit(dm_id, AuditAction.SUBMIT, payload=profile_to_document(profile))
    return session


def revise_preferences(
    session: SessionState, dm_id: str, new_profile: PreferenceProfile
) -> SessionState:
    """Replace a non-SDM profile after an assessment round.

    Open to every flagged decision maker and to any non-SDM volunteering a
    refinement; reopens collection for the next round.
    """
    _guard_mutable(session)
    session.participant(dm_id)
    if dm_id == session.sdm_id:
        raise ForbiddenError("the SDM cannot change her preference")
    if new_profile.dm_id != dm_id:
        raise ValidationError(
            f"profile dm_id {new_profile.dm_id!r} does not match {dm_id!r}"
        )
    if session.round == 0:
        raise ConflictError(
            "no assessment round computed yet; submit preferences instead"
        )
    if session.round >= session.config.max_rounds:
        raise MaxRoundsError(
            f"round limit {session.config.max_rounds} exhausted; finalize instead"
        )
    if dm_id not in session.profiles:
        raise ConflictError(f"{dm_id!r} has no prior submission to revise")
    core.validate_profile(new_profile, session.criteria, session.alternatives)
    session.profiles[dm_id] = new_profile
    session._append_audit(
        dm_id, AuditAction.REVISE, payload=profile_to_document(new_profile)
    )
    session.status = SessionStatus.COLLECTING
    return session


def compute_round(session: SessionState) -> RoundReport:
    """Evaluate all profiles, assess every DM against the SDM, append the report."""
    _guard_mutable(session)
    if session.round >= session.config.max_rounds:
        raise MaxRoundsError(
            f"round limit {session.config.max_rounds} exhausted; finalize instead"
        )
    missing = [p.id for p in session.participants if p.id not in session.profiles]
    if missing:
        raise IncompleteRoundError(
            f"missing submissions from: {', '.join(missing)}",
            detail=",".join(missing),
        )
    evaluations = {
        p.id: core.evaluate(session.profiles[p.id], session.criteria, session.alternatives)
        for p in session.participants
    }
    sdm_vector = evaluations[session.sdm_id]
    assessments = {
        dm_id: core.assess(evaluations[dm_id], sdm_vector, session.config)
        for dm_id in session.non_sdm_ids
    }
    must_revise = tuple(
        dm_id for dm_id in session.non_sdm_ids if not assessments[dm_id].majority_reached
    )
    report = RoundReport(
        round=session.round + 1,
        assessments=assessments,
        must_revise=must_revise,
        all_majority=not must_revise,
    )
    session.round += 1
    session.history.append(report)
    session.status = SessionStatus.ASSESSED
    session._append_audit(
        SYSTEM_ACTOR, AuditAction.ASSESS, payload=round_report_to_document(report)
    )
    return report


def finalize(session: SessionState) -> AggregationResult:
    """Aggregate with each participant's latest weights and freeze the session.

    Requires the latest round to hold an all-majority report, or the round
    limit to be exhausted (the result is then flagged ``forced``). Calling
    again on a finalized session returns the stored result.
    """
    if session.status is SessionStatus.FINALIZED:
        assert session.result is not None
        return session.result
    if session.round == 0:
        raise PrematureFinalizeError("cannot finalize before any round is computed")
    if session.status is not SessionStatus.ASSESSED:
        raise PrematureFinalizeError(
            "revisions are pending; compute a round before finalizing"
        )
    report = session.latest_report()
    forced = not report.all_majority
    if forced and session.round < session.config.max_rounds:
        raise PrematureFinalizeError(
            f"majority not reached by: {', '.join(report.must_revise)}; "
            "revise and recompute, or exhaust the round limit"
        )
    evaluations = [
        core.evaluate(session.profiles[p.id], session.criteria, session.alternatives)
        for p in session.participants
    ]
    result = core.aggregate(evaluations, report.assessments.values(), session.sdm_id)
    result = replace(result, forced=forced)
    session.result = result
    session.status = SessionStatus.FINALIZED
    session._append_audit(
        SYSTEM_ACTOR, AuditAction.FINALIZE, payload=aggregation_to_document(result)
    )
    return result


def replay_audit(session: SessionState) -> SessionState:
    """Rebuild a session by replaying its audit log through a fresh one.

    SUBMIT/REVISE payloads are resubmitted verbatim; ASSESS and FINALIZE
    entries trigger recomputation. The replayed session reproduces the
    original reports and result.
    """
    fresh = create_session(
        session.config,
        session.criteria,
        session.alternatives,
        tuple(replace(p, role=Role.DM) for p in session.participants),
        scale=session.scale,
        session_id=session.session_id,
        clock=session.clock,
    )
    for entry in session.audit:
        if entry.action in (AuditAction.SUBMIT, AuditAction.REVISE):
            assert entry.payload is not None
            profile = profile_from_document(entry.payload, location="audit.payload")
            if entry.action is AuditAction.SUBMIT:
                submit_preferences(fresh, entry.actor, profile)
            else:
                revise_preferences(fresh, entry.actor, profile)
        elif entry.action is AuditAction.ASSESS:
            compute_round(fresh)
        elif entry.action is AuditAction.FINALIZE:
            finalize(fresh)
    return fresh


# ---------------------------------------------------------------------------
# Persistence: versioned JSON documents
# ---------------------------------------------------------------------------


def profile_to_document(profile: PreferenceProfile) -> dict:
    return {
        "dm_id": profile.dm_id,
        "criterion_weights": dict(profile.criterion_weights),
        "scores": {c: dict(row) for c, row in profile.scores.items()},
    }


def profile_from_document(doc: Mapping, location: str = "profile") -> PreferenceProfile:
    dm_id = _get(doc, "dm_id", str, location)
    weights = _get(doc, "criterion_weights", dict, location)
    scores = _get(doc, "scores", dict, location)
    return PreferenceProfile(
        dm_id=dm_id,
        criterion_weights={k: float(v) for k, v in weights.items()},
        scores={c: {a: float(v) for a, v in row.items()} for c, row in scores.items()},
    )


def _assessment_to_document(assessment: ConsensusAssessment) -> dict:
    return {
        "dm_id": assessment.dm_id,
        "per_alternative": {
            alt: {
                "distance": cell.distance,
                "excess": cell.excess,
                "in_consensus": cell.in_consensus,
                "weight": cell.weight,
            }
            for alt, cell in assessment.per_alternative.items()
        },
        "consensus_count": assessment.consensus_count,
        "majority_reached": assessment.majority_reached,
    }


def _assessment_from_document(doc: Mapping, location: str) -> ConsensusAssessment:
    cells = {}
    for alt, cell in _get(doc, "per_alternative", dict, location).items():
        cell_loc = f"{location}.per_alternative.{alt}"
        cells[alt] = AlternativeAssessment(
            distance=_get(cell, "distance", float, cell_loc),
            excess=_get(cell, "excess", float, cell_loc),
            in_consensus=_get(cell, "in_consensus", bool, cell_loc),
            weight=_get(cell, "weight", float, cell_loc),
        )
    return ConsensusAssessment(
        dm_id=_get(doc, "dm_id", str, location),
        per_alternative=cells,
        consensus_count=_get(doc, "consensus_count", int, location),
        majority_reached=_get(doc, "majority_reached", bool, location),
    )


def round_report_to_document(report: RoundReport) -> dict:
    return {
        "round": report.round,
        "assessments": {
            dm: _assessment_to_document(a) for dm, a in report.assessments.items()
        },
        "must_revise": list(report.must_revise),
        "all_majority": report.all_majority,
    }


def round_report_from_document(doc: Mapping, location: str = "report") -> RoundReport:
    return RoundReport(
        round=_get(doc, "round", int, location),
        assessments={
            dm: _assessment_from_document(a, f"{location}.assessments.{dm}")
            for dm, a in _get(doc, "assessments", dict, location).items()
        },
        must_revise=tuple(_get(doc, "must_revise", list, location)),
        all_majority=_get(doc, "all_majority", bool, location),
    )


def aggregation_to_document(result: AggregationResult) -> dict:
    return {
        "contributions": {
            dm: dict(row) for dm, row in result.contributions.items()
        },
        "totals": dict(result.totals),
        "ranking": list(result.ranking),
        "forced": result.forced,
    }


def aggregation_from_document(doc: Mapping, location: str = "result") -> AggregationResult:
    return AggregationResult(
        contributions={
            dm: {a: float(v) for a, v in row.items()}
            for dm, row in _get(doc, "contributions", dict, location).items()
        },
        totals={a: float(v) for a, v in _get(doc, "totals", dict, location).items()},
        ranking=tuple(_get(doc, "ranking", list, location)),
        forced=_get(doc, "forced", bool, location),
    )


def _get(doc: Mapping, key: str, kind: type, location: str):
    """Fetch a required key with a type check; ParseError names the location."""
    if not isinstance(doc, Mapping):
        raise ParseError(f"expected an object at {location}", detail=location)
    if key not in doc:
        raise ParseError(f"missing field {key!r} at {location}", detail=f"{location}.{key}")
    value = doc[key]
    if kind is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ParseError(
                f"field {key!r} at {location} must be a number",
                detail=f"{location}.{key}",
            )
        return float(value)
    if kind is int and isinstance(value, bool):
        raise ParseError(
            f"field {key!r} at {location} must be an integer",
            detail=f"{location}.{key}",
        )
    if not isinstance(value, kind):
        raise ParseError(
            f"field {key!r} at {location} must be {kind.__name__}",
            detail=f"{location}.{key}",
        )
    return value


def session_to_document(session: SessionState) -> dict:
    """Encode a session as a plain JSON-serializable document."""
    return {
        "version": SCHEMA_VERSION,
        "session_id": session.session_id,
        "config": {
            "consensus_level": session.config.consensus_level,
            "max_distance": session.config.max_distance,
            "social_mode": session.config.social_mode.value,
            "max_rounds": session.config.max_rounds,
            "epsilon": session.config.epsilon,
        },
        "scale": [[label, value] for label, value in session.scale.levels],
        "criteria": [
            {"id": c.id, "name": c.name, "description": c.description}
            for c in session.criteria
        ],
        "alternatives": [{"id": a.id, "name": a.name} for a in session.alternatives],
        "participants": [
            {"id": p.id, "name": p.name, "role": p.role.value, "reputation": p.reputation}
            for p in session.participants
        ],
        "sdm_id": session.sdm_id,
        "round": session.round,
        "profiles": {
            dm: profile_to_document(p) for dm, p in session.profiles.items()
        },
        "history": [round_report_to_document(r) for r in session.history],
        "audit": [
            {
                "seq": e.seq,
                "timestamp": e.timestamp,
                "actor": e.actor,
                "action": e.action.value,
                "digest": e.digest,
                "payload": dict(e.payload) if e.payload is not None else None,
            }
            for e in session.audit
        ],
        "status": session.status.value,
        "result": aggregation_to_document(session.result) if session.result else None,
    }


def session_from_document(doc: Mapping) -> SessionState:
    """Decode a session document, validating shape and schema version."""
    version = _get(doc, "version", int, "document")
    if version != SCHEMA_VERSION:
        raise SchemaVersionError(
            f"unsupported schema version {version}; expected {SCHEMA_VERSION}",
            detail="document.version",
        )
    config_doc = _get(doc, "config", dict, "document")
    try:
        config = ConsensusConfig(
            consensus_level=_get(config_doc, "consensus_level", float, "config"),
            social_mode=SocialWeightMode(_get(config_doc, "social_mode", str, "config")),
            max_rounds=_get(config_doc, "max_rounds", int, "config"),
            epsilon=_get(config_doc, "epsilon", float, "config"),
        )
    except ValueError as exc:
        raise ParseError(f"invalid config: {exc}", detail="config") from exc
    stored_max = _get(config_doc, "max_distance", float, "config")
    if abs(stored_max - config.max_distance) > 1e-12:
        raise ParseError(
            f"max_distance {stored_max} inconsistent with consensus level "
            f"{config.consensus_level}",
            detail="config.max_distance",
        )

    scale = ScoreScale(
        levels=tuple(
            (str(label), float(value))
            for label, value in _get(doc, "scale", list, "document")
        )
    )
    criteria = tuple(
        Criterion(
            id=_get(c, "id", str, f"criteria[{i}]"),
            name=_get(c, "name", str, f"criteria[{i}]"),
            description=_get(c, "description", str, f"criteria[{i}]"),
        )
        for i, c in enumerate(_get(doc, "criteria", list, "document"))
    )
    alternatives = tuple(
        Alternative(
            id=_get(a, "id", str, f"alternatives[{i}]"),
            name=_get(a, "name", str, f"alternatives[{i}]"),
        )
        for i, a in enumerate(_get(doc, "alternatives", list, "document"))
    )
    participants = tuple(
        DecisionMaker(
            id=_get(p, "id", str, f"participants[{i}]"),
            name=_get(p, "name", str, f"participants[{i}]"),
            role=Role(_get(p, "role", str, f"participants[{i}]")),
            reputation=_get(p, "reputation", float, f"participants[{i}]"),
        )
        for i, p in enumerate(_get(doc, "participants", list, "document"))
    )

    result_doc = doc.get("result")
    session = SessionState(
        session_id=_get(doc, "session_id", str, "document"),
        config=config,
        criteria=criteria,
        alternatives=alternatives,
        participants=participants,
        sdm_id=_get(doc, "sdm_id", str, "document"),
        scale=scale,
        round=_get(doc, "round", int, "document"),
        profiles={
            dm: profile_from_document(p, f"profiles.{dm}")
            for dm, p in _get(doc, "profiles", dict, "document").items()
        },
        history=[
            round_report_from_document(r, f"history[{i}]")
            for i, r in enumerate(_get(doc, "history", list, "document"))
        ],
        audit=[
            AuditEntry(
                seq=_get(e, "seq", int, f"audit[{i}]"),
                timestamp=_get(e, "timestamp", str, f"audit[{i}]"),
                actor=_get(e, "actor", str, f"audit[{i}]"),
                action=AuditAction(_get(e, "action", str, f"audit[{i}]")),
                digest=_get(e, "digest", str, f"audit[{i}]"),
                payload=e.get("payload"),
            )
            for i, e in enumerate(_get(doc, "audit", list, "document"))
        ],
        status=SessionStatus(_get(doc, "status", str, "document")),
        result=aggregation_from_document(result_doc) if result_doc else None,
    )
    if session.round != len(session.history):
        raise ParseError(
            f"round {session.round} does not match history length "
            f"{len(session.history)}",
            detail="document.round",
        )
    return session


def save_session(session: SessionState) -> dict:
    """Session as a JSON-serializable document (alias of ``session_to_document``)."""
    return session_to_document(session)


def load_session(document: Mapping) -> SessionState:
    """Session from a parsed document (alias of ``session_from_document``)."""
    return session_from_document(document)


def write_session_file(session: SessionState, path: str | Path) -> None:
    """Write the session document atomically (temp file + rename)."""
    path = Path(path)
    text = json.dumps(session_to_document(session), indent=2)
    fd, tmp_name = tempfile.mkstemp(
        dir=path.parent if str(path.parent) else ".", suffix=".tmp"
    )
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as handle:
            handle.write(text)
            handle.write("\n")
        os.replace(tmp_name, path)
    except BaseException:
        if os.path.exists(tmp_name):
            os.unlink(tmp_name)
        raise


def read_session_file(path: str | Path) -> SessionState:
    """Load a session document from disk; ParseError carries the JSON location."""
    with open(path, "r", encoding="utf-8") as handle:
        text = handle.read()
    try:
        document = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(
            f"malformed session document: {exc.msg} at line {exc.lineno} "
            f"column {exc.colno}",
            detail=f"line {exc.lineno}, column {exc.colno}",
        ) from exc
    return session_from_document(document)
