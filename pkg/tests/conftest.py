import random

import pytest

from sdm_consensus.model import (
    Alternative,
    ConsensusConfig,
    Criterion,
    DecisionMaker,
    PreferenceProfile,
)

_acceptance_outcomes: list[tuple[str, str]] = []


def pytest_runtest_logreport(report):
    if "test_acceptance" in report.nodeid:
        name = report.nodeid.split("::")[-1]
        if report.when == "call":
            _acceptance_outcomes.append((name, report.outcome.upper()))
        elif report.when == "setup" and report.outcome != "passed":
            _acceptance_outcomes.append((name, report.outcome.upper()))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance_outcomes:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for name, outcome in _acceptance_outcomes:
        label = "PASS" if outcome == "PASSED" else "FAIL"
        terminalreporter.write_line(f"{label}  {name}")


def random_instance(rng: random.Random, n_dms=None, n_alts=None, n_crits=None):
    """Random valid instance within the property-suite bounds (raw lists)."""
    n_dms = n_dms or rng.randint(2, 5)
    n_alts = n_alts or rng.randint(1, 6)
    n_crits = n_crits or rng.randint(1, 4)
    weight_rows = [[rng.random() for _ in range(n_crits)] for _ in range(n_dms)]
    score_blocks = [
        [[rng.random() for _ in range(n_alts)] for _ in range(n_crits)]
        for _ in range(n_dms)
    ]
    return weight_rows, score_blocks


def build_profiles(weight_rows, score_blocks):
    """Wrap raw instance lists in domain objects (ids dm1../c1../a1..)."""
    n_dms = len(weight_rows)
    n_crits = len(weight_rows[0])
    n_alts = len(score_blocks[0][0])
    criteria = tuple(Criterion(f"c{i}") for i in range(1, n_crits + 1))
    alternatives = tuple(Alternative(f"a{i}") for i in range(1, n_alts + 1))
    profiles = []
    for i in range(n_dms):
        profiles.append(
            PreferenceProfile(
                dm_id=f"dm{i + 1}",
                criterion_weights={
                    c.id: weight_rows[i][ci] for ci, c in enumerate(criteria)
                },
                scores={
                    c.id: {
                        a.id: score_blocks[i][ci][ai]
                        for ai, a in enumerate(alternatives)
                    }
                    for ci, c in enumerate(criteria)
                },
            )
        )
    return criteria, alternatives, profiles


@pytest.fixture
def rng():
    return random.Random(20260810)


@pytest.fixture
def demo_session_factory():
    from sdm_consensus import demo

    return demo.build_session


def make_participants(n, reputations=None):
    reputations = reputations or [i / (n + 1) for i in range(1, n + 1)]
    return tuple(
        DecisionMaker(f"dm{i + 1}", name=f"DM{i + 1}", reputation=reputations[i])
        for i in range(n)
    )


def make_config(level=0.9, **kwargs):
    return ConsensusConfig(consensus_level=level, **kwargs)
