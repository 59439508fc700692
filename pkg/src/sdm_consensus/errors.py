"""Exception taxonomy for the consensus engine.

The five direct subclasses of :class:`ConsensusError` map one-to-one onto
the service API error codes (VALIDATION, NOT_FOUND, FORBIDDEN, CONFLICT,
PREMATURE); more specific errors subclass one of those five.
"""

from __future__ import annotations


class ConsensusError(Exception):
    """Base class for all engine errors.

    ``detail`` optionally names the offending field or key (e.g. the
    missing score cell of an incomplete profile).
    """

    def __init__(self, message: str, detail: str | None = None):
        super().__init__(message)
        self.detail = detail


class ValidationError(ConsensusError):
    """Input outside its domain: bad ranges, duplicate ids, malformed data."""


class IncompleteProfileError(ValidationError):
    """A preference profile is missing a weight or score cell."""


class ParseError(ValidationError):
    """A persisted document could not be decoded; ``detail`` holds the location."""


class SchemaVersionError(ParseError):
    """A persisted document carries an unsupported schema version."""


class NotFoundError(ConsensusError):
    """A referenced entity does not exist."""


class UnknownAlternativeError(NotFoundError):
    pass


class UnknownParticipantError(NotFoundError):
    pass


class UnknownSessionError(NotFoundError):
    pass


class ForbiddenError(ConsensusError):
    """The actor may not perform this action (e.g. the SDM changing her preference)."""


class ConflictError(ConsensusError):
    """The session state does not admit this action."""


class ImmutableSessionError(ConflictError):
    """Mutation attempted on a finalized session."""


class IncompleteRoundError(ConflictError):
    """A round was requested or aggregated while submissions are missing."""


class MaxRoundsError(ConflictError):
    """The configured round limit is exhausted."""


class PrematureFinalizeError(ConsensusError):
    """Finalization requested before the protocol allows it."""


class WeightSumWarning(UserWarning):
    """Criterion weights sum above 1, so evaluations and distances may exceed 1."""
