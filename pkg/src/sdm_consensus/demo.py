"""Bundled community-projects demo scenario.

Three decision makers rank five community projects against three criteria
at consensus level 0.90. DM3 holds the top reputation and anchors the
session as SDM; DM2 misses the majority rule in round one and revises. The
expected numbers below are frozen golden values: evaluations and distances
from exact arithmetic, weights and totals from an independent oracle run,
rounded to the displayed precision.

``run_demo`` executes the full protocol and checks every golden value, which
makes it the executable twin of the acceptance suite.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import session as protocol
from .model import (
    Alternative,
    ConsensusConfig,
    Criterion,
    DecisionMaker,
    PreferenceProfile,
    SocialWeightMode,
)
from .session import RoundReport, SessionState

CRITERIA = (
    Criterion("c1", "Urgency", "How urgent the project is"),
    Criterion("c2", "Community impact", "Impact of the project on the community"),
    Criterion("c3", "Work plan quality", "Quality of the detailed work plan"),
)

ALTERNATIVES = tuple(
    Alternative(f"a{i}", f"Project {i}") for i in range(1, 6)
)

PARTICIPANTS = (
    DecisionMaker("dm1", "DM1", reputation=0.6),
    DecisionMaker("dm2", "DM2", reputation=0.7),
    DecisionMaker("dm3", "DM3", reputation=0.9),
)

SDM_ID = "dm3"

CONSENSUS_LEVEL = 0.9

_ALT_IDS = tuple(a.id for a in ALTERNATIVES)


def _profile(dm_id: str, weights: tuple, rows: tuple) -> PreferenceProfile:
    return PreferenceProfile(
        dm_id=dm_id,
        criterion_weights={c.id: w for c, w in zip(CRITERIA, weights)},
        scores={
            c.id: dict(zip(_ALT_IDS, row)) for c, row in zip(CRITERIA, rows)
        },
    )


INITIAL_PROFILES = {
    "dm1": _profile(
        "dm1",
        (0.7, 0.1, 0.1),
        ((1, 1, 1, 0.3, 0.5), (1, 1, 1, 0.3, 0.5), (1, 1, 1, 1, 1)),
    ),
    "dm2": _profile(
        "dm2",
        (0.4, 0.1, 0.2),
        ((1, 0.5, 0.5, 0.5, 0.3), (0.5, 0.5, 0.5, 0.5, 0.3), (0.3, 0.3, 0.3, 1, 0.5)),
    ),
    "dm3": _profile(
        "dm3",
        (0.3, 0.5, 0.2),
        ((0.5, 1, 1, 0.3, 0.5), (1, 1, 0.5, 0.3, 0.5), (0.5, 0.5, 0.5, 1, 1)),
    ),
}

REVISED_DM2 = _profile(
    "dm2",
    (0.4, 0.4, 0.2),
    ((1, 1, 1, 0.5, 0.5), (0.5, 1, 0.5, 0.5, 1), (0.3, 0.5, 0.3, 1, 1)),
)

# Golden values. Keyed by alternative order a1..a5.
EXPECTED_EVALUATIONS = {
    "dm1": (0.9, 0.9, 0.9, 0.34, 0.5),
    "dm2": (0.51, 0.31, 0.31, 0.45, 0.25),
    "dm3": (0.75, 0.9, 0.65, 0.44, 0.6),
}
EXPECTED_REVISED_DM2_EVALUATION = (0.66, 0.9, 0.66, 0.6, 0.8)

ROUND1_DISTANCES = {
    "dm1": (0.15, 0.0, 0.25, 0.1, 0.1),
    "dm2": (0.24, 0.59, 0.34, 0.01, 0.35),
}
ROUND2_DM2_DISTANCES = (0.09, 0.0, 0.01, 0.16, 0.2)

ROUND1_WEIGHTS = {
    SocialWeightMode.WORKED: {
        "dm1": (0.951, 1.0, 0.861, 1.0, 1.0),
        "dm2": (0.869, 0.613, 0.787, 1.0, 0.779),
    },
    SocialWeightMode.LITERAL: {
        "dm1": (0.955997, 1.0, 0.873716, 1.0, 1.0),
        "dm2": (0.881615, 0.643393, 0.805735, 1.0, 0.798516),
    },
}
ROUND2_DM2_WEIGHTS = {
    SocialWeightMode.WORKED: (1.0, 1.0, 1.0, 0.942, 0.905),
    SocialWeightMode.LITERAL: (1.0, 1.0, 1.0, 0.947432, 0.913931),
}

EXPECTED_TOTALS = {
    SocialWeightMode.WORKED: (2.266, 2.7, 2.084, 1.345, 1.823),
    SocialWeightMode.LITERAL: (2.270398, 2.7, 2.096344, 1.348459, 1.831145),
}
EXPECTED_RANKING = ("a2", "a1", "a3", "a5", "a4")

ROUND1_CONSENSUS_SETS = {"dm1": ("a2", "a4", "a5"), "dm2": ("a4",)}
ROUND2_DM2_CONSENSUS_SET = ("a1", "a2", "a3")

EVALUATION_TOL = 1e-9
DISTANCE_TOL = 1e-9
WEIGHT_TOL = 5e-4
TOTAL_TOL = 1e-3


@dataclass(frozen=True)
class DemoCheck:
    """One golden-value comparison from the demo run."""

    name: str
    expected: object
    actual: object
    tolerance: float | None
    ok: bool


@dataclass
class DemoRun:
    """Everything the demo computed, plus the golden-check outcomes."""

    mode: SocialWeightMode
    session: SessionState
    round1: RoundReport
    round2: RoundReport
    result: object
    checks: list[DemoCheck]

    @property
    def ok(self) -> bool:
        return all(check.ok for check in self.checks)


def build_config(mode: SocialWeightMode = SocialWeightMode.WORKED) -> ConsensusConfig:
    return ConsensusConfig(consensus_level=CONSENSUS_LEVEL, social_mode=mode)


def build_session(mode: SocialWeightMode = SocialWeightMode.WORKED) -> SessionState:
    """Demo session with all round-one profiles submitted."""
    sess = protocol.create_session(
        build_config(mode),
        CRITERIA,
        ALTERNATIVES,
        PARTICIPANTS,
        session_id=f"demo-{mode.value}",
    )
    for dm_id, profile in INITIAL_PROFILES.items():
        protocol.submit_preferences(sess, dm_id, profile)
    return sess


def _close(expected, actual, tolerance) -> bool:
    return all(abs(e - a) <= tolerance for e, a in zip(expected, actual))


def run_demo(mode: SocialWeightMode = SocialWeightMode.WORKED) -> DemoRun:
    """Run the scenario end to end and compare every golden value."""
    checks: list[DemoCheck] = []

    def check_vector(name, expected, actual, tolerance):
        actual = tuple(actual)
        checks.append(
            DemoCheck(name, expected, actual, tolerance, _close(expected, actual, tolerance))
        )

    def check_equal(name, expected, actual):
        checks.append(DemoCheck(name, expected, actual, None, expected == actual))

    sess = build_session(mode)

    round1 = protocol.compute_round(sess)
    evaluations = {
        dm: core_evaluation_values(sess, dm) for dm in ("dm1", "dm2", "dm3")
    }
    for dm in ("dm1", "dm2", "dm3"):
        check_vector(
            f"evaluation {dm}", EXPECTED_EVALUATIONS[dm], evaluations[dm], EVALUATION_TOL
        )
    for dm in ("dm1", "dm2"):
        assessment = round1.assessments[dm]
        check_vector(
            f"round 1 distances {dm}",
            ROUND1_DISTANCES[dm],
            (assessment.per_alternative[a].distance for a in _ALT_IDS),
            DISTANCE_TOL,
        )
        check_vector(
            f"round 1 weights {dm}",
            ROUND1_WEIGHTS[mode][dm],
            (assessment.per_alternative[a].weight for a in _ALT_IDS),
            WEIGHT_TOL,
        )
        check_equal(
            f"round 1 consensus set {dm}",
            ROUND1_CONSENSUS_SETS[dm],
            tuple(
                a for a in _ALT_IDS if assessment.per_alternative[a].in_consensus
            ),
        )
    check_equal("round 1 must revise", ("dm2",), round1.must_revise)

    protocol.revise_preferences(sess, "dm2", REVISED_DM2)
    round2 = protocol.compute_round(sess)
    check_vector(
        "revised evaluation dm2",
        EXPECTED_REVISED_DM2_EVALUATION,
        core_evaluation_values(sess, "dm2"),
        EVALUATION_TOL,
    )
    dm2 = round2.assessments["dm2"]
    check_vector(
        "round 2 distances dm2",
        ROUND2_DM2_DISTANCES,
        (dm2.per_alternative[a].distance for a in _ALT_IDS),
        DISTANCE_TOL,
    )
    check_vector(
        "round 2 weights dm2",
        ROUND2_DM2_WEIGHTS[mode],
        (dm2.per_alternative[a].weight for a in _ALT_IDS),
        WEIGHT_TOL,
    )
    check_equal(
        "round 2 consensus set dm2",
        ROUND2_DM2_CONSENSUS_SET,
        tuple(a for a in _ALT_IDS if dm2.per_alternative[a].in_consensus),
    )
    check_equal("round 2 must revise", (), round2.must_revise)

    result = protocol.finalize(sess)
    check_vector(
        "totals",
        EXPECTED_TOTALS[mode],
        (result.totals[a] for a in _ALT_IDS),
        TOTAL_TOL,
    )
    check_equal("ranking", EXPECTED_RANKING, result.ranking)

    return DemoRun(
        mode=mode, session=sess, round1=round1, round2=round2, result=result, checks=checks
    )


def core_evaluation_values(sess: SessionState, dm_id: str) -> tuple[float, ...]:
    """Current evaluation of one participant, in alternative order."""
    from . import core

    vector = core.evaluate(sess.profiles[dm_id], sess.criteria, sess.alternatives)
    return tuple(vector.values[a] for a in _ALT_IDS)
