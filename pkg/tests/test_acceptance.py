"""Acceptance suite: one test per primary criterion, at the stated tolerance.

The conftest terminal hook prints one PASS/FAIL line per criterion at the end
of the run.
"""

import dataclasses
import json
import random
import time

import pytest

from sdm_consensus import core, demo
from sdm_consensus import session as protocol
from sdm_consensus import simulate as sim
from sdm_consensus.errors import ForbiddenError, ImmutableSessionError
from sdm_consensus.model import ConsensusConfig, EvaluationVector, SocialWeightMode

from .conftest import build_profiles, make_participants, random_instance
from .oracle import oracle_pipeline

ALT_IDS = ("a1", "a2", "a3", "a4", "a5")

# Table 2 row order: (a1,DM1), (a1,DM2), (a2,DM1), ... , (a5,DM2).
TABLE2_DISTANCES = (0.15, 0.24, 0.0, 0.59, 0.25, 0.34, 0.1, 0.01, 0.1, 0.35)
TABLE2_WEIGHTS = (0.951, 0.869, 1.0, 0.613, 0.861, 0.787, 1.0, 1.0, 1.0, 0.779)
TABLE3_DISTANCES = (0.09, 0.0, 0.01, 0.16, 0.2)
TABLE3_WEIGHTS = (1.0, 1.0, 1.0, 0.942, 0.905)
TABLE4_TOTALS = (2.266, 2.7, 2.084, 1.345, 1.823)
TABLE4_RANKING = ("a2", "a1", "a3", "a5", "a4")

CASES = 1000


def run_demo_protocol():
    sess = demo.build_session()
    round1 = protocol.compute_round(sess)
    protocol.revise_preferences(sess, "dm2", demo.REVISED_DM2)
    round2 = protocol.compute_round(sess)
    result = protocol.finalize(sess)
    return sess, round1, round2, result


def test_criterion_1_golden_evaluations_within_1e9():
    start = time.perf_counter()
    expected = {
        "dm1": (0.9, 0.9, 0.9, 0.34, 0.5),
        "dm2": (0.51, 0.31, 0.31, 0.45, 0.25),
        "dm3": (0.75, 0.9, 0.65, 0.44, 0.6),
    }
    for dm_id, values in expected.items():
        vector = core.evaluate(
            demo.INITIAL_PROFILES[dm_id], demo.CRITERIA, demo.ALTERNATIVES
        )
        for alt, value in zip(ALT_IDS, values):
            assert abs(vector.values[alt] - value) <= 1e-9
    revised = core.evaluate(demo.REVISED_DM2, demo.CRITERIA, demo.ALTERNATIVES)
    for alt, value in zip(ALT_IDS, (0.66, 0.9, 0.66, 0.6, 0.8)):
        assert abs(revised.values[alt] - value) <= 1e-9
    assert time.perf_counter() - start < 1.0


def test_criterion_2_table2_distances_and_weights():
    _, round1, _, _ = run_demo_protocol()
    actual_distances = []
    actual_weights = []
    for alt in ALT_IDS:
        for dm_id in ("dm1", "dm2"):
            cell = round1.assessments[dm_id].per_alternative[alt]
            actual_distances.append(cell.distance)
            actual_weights.append(cell.weight)
    for actual, expected in zip(actual_distances, TABLE2_DISTANCES):
        assert abs(actual - expected) <= 1e-9
    for actual, expected in zip(actual_weights, TABLE2_WEIGHTS):
        assert abs(actual - expected) <= 5e-4


def test_criterion_3_table3_after_revision():
    _, _, round2, _ = run_demo_protocol()
    assessment = round2.assessments["dm2"]
    for alt, expected in zip(ALT_IDS, TABLE3_DISTANCES):
        assert abs(assessment.per_alternative[alt].distance - expected) <= 1e-9
    for alt, expected in zip(ALT_IDS, TABLE3_WEIGHTS):
        assert abs(assessment.per_alternative[alt].weight - expected) <= 5e-4


def test_criterion_4_table4_totals_ranking_and_weight_provenance():
    sess, round1, round2, result = run_demo_protocol()
    for alt, expected in zip(ALT_IDS, TABLE4_TOTALS):
        assert abs(result.totals[alt] - expected) <= 1e-3
    assert result.ranking == TABLE4_RANKING

    # Weight provenance: dm2's finalize weights are its round-2 weights,
    # dm1's equal its round-1 weights (unchanged profile), the SDM's are 1.
    f1 = core.evaluate(sess.profiles["dm1"], sess.criteria, sess.alternatives)
    f2 = core.evaluate(sess.profiles["dm2"], sess.criteria, sess.alternatives)
    f3 = core.evaluate(sess.profiles["dm3"], sess.criteria, sess.alternatives)
    for alt in ALT_IDS:
        w1 = round1.assessments["dm1"].per_alternative[alt].weight
        w2 = round2.assessments["dm2"].per_alternative[alt].weight
        assert abs(result.contributions["dm1"][alt] - w1 * f1.values[alt]) <= 1e-12
        assert abs(result.contributions["dm2"][alt] - w2 * f2.values[alt]) <= 1e-12
        assert abs(result.contributions["dm3"][alt] - f3.values[alt]) <= 1e-12


def test_criterion_5_protocol_walkthrough():
    sess = demo.build_session()

    def assert_sdm_rejected(expect=(ForbiddenError,)):
        with pytest.raises(expect):
            protocol.revise_preferences(sess, "dm3", demo.INITIAL_PROFILES["dm3"])
        with pytest.raises(expect):
            protocol.submit_preferences(sess, "dm3", demo.INITIAL_PROFILES["dm3"])

    assert_sdm_rejected()  # collection stage

    report1 = protocol.compute_round(sess)
    assert report1.must_revise == ("dm2",)
    assert report1.assessments["dm2"].consensus_count == 1
    assert core.majority_threshold(len(ALT_IDS)) == 3
    assert_sdm_rejected()  # assessed stage

    protocol.revise_preferences(sess, "dm2", demo.REVISED_DM2)
    assert_sdm_rejected()  # revision stage

    report2 = protocol.compute_round(sess)
    assert report2.must_revise == ()
    assert report2.all_majority is True

    result = protocol.finalize(sess)
    assert result.ranking == TABLE4_RANKING
    assert_sdm_rejected(expect=(ForbiddenError, ImmutableSessionError))  # finalized


class TestCriterion6PropertySuites:
    """1000 random cases per suite, instance bounds |A|<=6, |C|<=4, |D|<=5."""

    def test_social_weight_bounds_monotonicity_continuity(self):
        rng = random.Random(61)
        for _ in range(CASES):
            level = rng.random()
            mode = rng.choice(list(SocialWeightMode))
            config = ConsensusConfig(consensus_level=level, social_mode=mode)
            d = rng.random() * 2
            w = core.social_weight(d, config)
            assert 0.0 < w <= 1.0
            if d <= config.max_distance:
                assert w == 1.0
            # Strictly decreasing above the threshold.
            d1 = config.max_distance + rng.random() + 1e-6
            d2 = d1 + rng.random() + 1e-6
            assert core.social_weight(d2, config) < core.social_weight(d1, config)
            # Continuity at the threshold: weight tends to 1 from above.
            delta = 10 ** -rng.uniform(6, 9)
            near = core.social_weight(config.max_distance + delta, config)
            assert abs(near - 1.0) <= 2 * delta

    def test_distance_metric_axioms(self):
        rng = random.Random(62)
        for _ in range(CASES):
            n = rng.randint(1, 6)
            ids = tuple(f"a{i}" for i in range(n))
            make = lambda dm: EvaluationVector(
                dm_id=dm, values={a: rng.random() for a in ids}
            )
            x, y, z = make("x"), make("y"), make("z")
            assert core.rms_distance(x, x) == 0.0
            d_xy = core.rms_distance(x, y)
            assert d_xy >= 0.0
            assert d_xy == core.rms_distance(y, x)
            assert d_xy <= core.rms_distance(x, z) + core.rms_distance(z, y) + 1e-9
            alt = rng.choice(ids)
            pd = core.per_alternative_distance(x, y, alt)
            assert pd >= 0.0
            assert pd == core.per_alternative_distance(y, x, alt)
            assert core.per_alternative_distance(x, x, alt) == 0.0
            if n == 1:
                assert abs(core.rms_distance(x, y) - pd) <= 1e-12

    def test_aggregation_linearity(self):
        rng = random.Random(63)
        for _ in range(CASES):
            weight_rows, score_blocks = random_instance(rng)
            criteria, alternatives, profiles = build_profiles(weight_rows, score_blocks)
            config = ConsensusConfig(consensus_level=rng.random())
            evaluations = [core.evaluate(p, criteria, alternatives) for p in profiles]
            sdm_pos = rng.randrange(len(profiles))
            sdm_id = profiles[sdm_pos].dm_id
            assessments = [
                core.assess(evaluations[i], evaluations[sdm_pos], config)
                for i in range(len(profiles))
                if i != sdm_pos
            ]
            base = core.aggregate(evaluations, assessments, sdm_id)
            alpha = rng.random()
            target = rng.randrange(len(profiles))
            scaled_vector = EvaluationVector(
                dm_id=evaluations[target].dm_id,
                values={a: alpha * v for a, v in evaluations[target].values.items()},
            )
            scaled_evaluations = list(evaluations)
            scaled_evaluations[target] = scaled_vector
            scaled = core.aggregate(scaled_evaluations, assessments, sdm_id)
            dm_id = evaluations[target].dm_id
            for alt in scaled_vector.values:
                assert (
                    abs(
                        scaled.contributions[dm_id][alt]
                        - alpha * base.contributions[dm_id][alt]
                    )
                    <= 1e-9
                )

    def test_rank_tie_break_determinism(self):
        rng = random.Random(64)
        for _ in range(CASES):
            n = rng.randint(1, 6)
            ids = tuple(f"a{i}" for i in range(n))
            # Quantized totals force frequent ties.
            totals = {a: rng.randint(0, 3) / 4 for a in ids}
            ranking = core.rank(totals)
            assert ranking == core.rank(dict(totals))
            reference = tuple(
                ids[i]
                for i in sorted(range(n), key=lambda i: (-totals[ids[i]], i))
            )
            assert ranking == reference
            # Dyadic shift/scale leave the ranking unchanged.
            shift = rng.randint(-8, 8) / 4
            scale = rng.randint(1, 16) / 4
            assert core.rank({a: v + shift for a, v in totals.items()}) == ranking
            assert core.rank({a: v * scale for a, v in totals.items()}) == ranking

    def test_full_pipeline_matches_oracle(self):
        rng = random.Random(65)
        for _ in range(CASES):
            weight_rows, score_blocks = random_instance(rng)
            n_dms = len(weight_rows)
            sdm_pos = rng.randrange(n_dms)
            level = rng.random()
            literal = rng.random() < 0.5
            expected = oracle_pipeline(
                weight_rows, score_blocks, sdm_pos, level, literal=literal
            )

            criteria, alternatives, profiles = build_profiles(weight_rows, score_blocks)
            reputations = [0.5 if i != sdm_pos else 1.0 for i in range(n_dms)]
            participants = make_participants(n_dms, reputations=reputations)
            config = ConsensusConfig(
                consensus_level=level,
                social_mode=SocialWeightMode.LITERAL if literal else SocialWeightMode.WORKED,
                max_rounds=1,
            )
            sess = protocol.create_session(config, criteria, alternatives, participants)
            assert sess.sdm_id == participants[sdm_pos].id
            for profile in profiles:
                protocol.submit_preferences(sess, profile.dm_id, profile)
            report = protocol.compute_round(sess)
            result = protocol.finalize(sess)

            alt_ids = [a.id for a in alternatives]
            for i, participant in enumerate(participants):
                if i == sdm_pos:
                    continue
                assessment = report.assessments[participant.id]
                assert assessment.consensus_count == expected["consensus_counts"][i]
                assert assessment.majority_reached == expected["majority"][i]
                for ai, alt in enumerate(alt_ids):
                    cell = assessment.per_alternative[alt]
                    assert abs(cell.distance - expected["distances"][i][ai]) <= 1e-12
                    assert abs(cell.weight - expected["weights"][i][ai]) <= 1e-12
            for ai, alt in enumerate(alt_ids):
                assert abs(result.totals[alt] - expected["totals"][ai]) <= 1e-12
            assert list(result.ranking) == [alt_ids[i] for i in expected["ranking"]]


def test_criterion_7_simulation_determinism_and_conformists():
    spec = sim.SimulationSpec(
        dm_count=4,
        alternative_count=5,
        criterion_count=3,
        consensus_level=0.9,
        strategies=tuple(sim.AgentStrategy.conformist(0.5) for _ in range(4)),
        seed=20260810,
        replications=60,
        max_rounds=15,
    )
    first = sim.summary_json(sim.run_simulation(spec), spec)
    second = sim.summary_json(sim.run_simulation(spec), spec)
    assert first.encode("utf-8") == second.encode("utf-8")

    conformist = dataclasses.replace(
        spec,
        strategies=tuple(sim.AgentStrategy.conformist(1.0) for _ in range(4)),
        replications=100,
    )
    summary = sim.run_simulation(conformist)
    assert summary.convergence_rate == 1.0
    converged_fast = [r for r in summary.replications if r.rounds_used <= 2]
    assert len(converged_fast) == 100


def test_criterion_8_persistence_round_trip_100_sessions():
    rng = random.Random(88)
    checked = 0
    for index in range(100):
        dm_count = rng.randint(2, 5)
        spec = sim.SimulationSpec(
            dm_count=dm_count,
            alternative_count=rng.randint(1, 6),
            criterion_count=rng.randint(1, 4),
            consensus_level=rng.uniform(0.5, 1.0),
            strategies=tuple(
                sim.AgentStrategy.conformist(rng.uniform(0.3, 1.0))
                for _ in range(dm_count)
            ),
            seed=rng.getrandbits(48),
            replications=1,
            max_rounds=rng.randint(1, 6),
        )
        sess = sim.generate_instance(spec, index)
        # Random amount of protocol progress: rounds, revisions, finalize.
        stage = rng.random()
        if stage > 0.25:
            report = protocol.compute_round(sess)
            if stage > 0.5 and report.must_revise and sess.round < spec.max_rounds:
                for dm_id in report.must_revise:
                    revised = sim.apply_strategy(
                        sim.AgentStrategy.conformist(1.0),
                        sess.profiles[dm_id],
                        sess.profiles[sess.sdm_id],
                    )
                    protocol.revise_preferences(sess, dm_id, revised)
                protocol.compute_round(sess)
            if stage > 0.75:
                latest = sess.latest_report()
                if latest.all_majority or sess.round >= spec.max_rounds:
                    protocol.finalize(sess)
        document = protocol.save_session(sess)
        restored = protocol.load_session(json.loads(json.dumps(document)))
        assert restored == sess
        assert restored.history == sess.history
        assert restored.audit == sess.audit
        checked += 1
    assert checked == 100
