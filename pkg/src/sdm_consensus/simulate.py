"""Synthetic-agent driver for the revision loop.

Populations of decision makers with parameterized revision strategies run
randomized sessions to measure convergence and rounds-to-consensus. One root
seed plus a per-replication hash-derived substream makes every run
reproducible and order-independent, so replications may execute in parallel
without changing the output.

The strategy catalogue is synthetic: real revision behavior is a modeling
choice, and no behavioral fidelity is claimed.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import random
import statistics
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from typing import Mapping, Sequence

from . import session as protocol
from .errors import ValidationError, WeightSumWarning
from .model import (
    Alternative,
    ConsensusConfig,
    Criterion,
    DecisionMaker,
    PreferenceProfile,
    ScoreScale,
    SocialWeightMode,
)
from .session import SessionState


class StrategyKind(str, Enum):
    STUBBORN = "stubborn"
    CONFORMIST = "conformist"
    NOISY = "noisy"


@dataclass(frozen=True)
class AgentStrategy:
    """How a flagged decision maker revises.

    STUBBORN never changes its profile. CONFORMIST moves every weight and
    score ``step`` of the way toward the SDM's values (step 1.0 copies the
    SDM exactly). NOISY makes the conformist move and then perturbs each
    component by a uniform draw from [-sigma, sigma], clamped to [0, 1].
    """

    kind: StrategyKind
    step: float = 1.0
    sigma: float = 0.0

    def __post_init__(self):
        if self.kind in (StrategyKind.CONFORMIST, StrategyKind.NOISY):
            if not 0.0 < self.step <= 1.0:
                raise ValidationError(f"step must be in (0, 1], got {self.step}")
        if self.sigma < 0:
            raise ValidationError(f"sigma must be nonnegative, got {self.sigma}")

    @classmethod
    def stubborn(cls) -> "AgentStrategy":
        return cls(kind=StrategyKind.STUBBORN)

    @classmethod
    def conformist(cls, step: float = 1.0) -> "AgentStrategy":
        return cls(kind=StrategyKind.CONFORMIST, step=step)

    @classmethod
    def noisy(cls, sigma: float, step: float = 0.5) -> "AgentStrategy":
        return cls(kind=StrategyKind.NOISY, step=step, sigma=sigma)


@dataclass(frozen=True)
class SimulationSpec:
    """Fully determines a simulation run, randomness included."""

    dm_count: int
    alternative_count: int
    criterion_count: int
    consensus_level: float
    strategies: tuple[AgentStrategy, ...]
    seed: int
    replications: int
    max_rounds: int = 10
    social_mode: SocialWeightMode = SocialWeightMode.WORKED
    scale: ScoreScale = ScoreScale()

    def __post_init__(self):
        if self.dm_count < 2:
            raise ValidationError(f"dm_count must be at least 2, got {self.dm_count}")
        if self.alternative_count < 1 or self.criterion_count < 1:
            raise ValidationError("alternative_count and criterion_count must be positive")
        if self.replications < 1:
            raise ValidationError(
                f"replications must be positive, got {self.replications}"
            )
        if len(self.strategies) != self.dm_count:
            raise ValidationError(
                f"need one strategy per decision maker: expected {self.dm_count}, "
                f"got {len(self.strategies)}"
            )
        # Delegate range checks for level/rounds.
        ConsensusConfig(
            consensus_level=self.consensus_level, max_rounds=self.max_rounds
        )

    def config(self) -> ConsensusConfig:
        return ConsensusConfig(
            consensus_level=self.consensus_level,
            social_mode=self.social_mode,
            max_rounds=self.max_rounds,
        )


@dataclass(frozen=True)
class ReplicationResult:
    index: int
    converged: bool
    rounds_used: int
    ranking: tuple[str, ...]

    @property
    def top(self) -> str:
        return self.ranking[0]


@dataclass(frozen=True)
class SimulationSummary:
    replications: tuple[ReplicationResult, ...]
    convergence_rate: float
    mean_rounds: float
    median_rounds: float
    rounds_histogram: Mapping[int, int]


def _substream(seed: int, replication_index: int, label: str) -> random.Random:
    """Independent deterministic RNG per (replication, purpose), derived by counter."""
    key = f"{seed}:{replication_index}:{label}".encode("ascii")
    digest = hashlib.sha256(key).digest()
    return random.Random(int.from_bytes(digest[:8], "big"))


def generate_instance(spec: SimulationSpec, replication_index: int) -> SessionState:
    """Random session with all profiles submitted, fully determined by (seed, index).

    Criterion weights are uniform in [0, 1], scores are drawn from the score
    scale values, reputations are uniform in [0, 1]; the highest reputation
    becomes SDM.
    """
    rng = _substream(spec.seed, replication_index, "generate")
    criteria = tuple(Criterion(f"c{i}") for i in range(1, spec.criterion_count + 1))
    alternatives = tuple(
        Alternative(f"a{i}") for i in range(1, spec.alternative_count + 1)
    )
    participants = tuple(
        DecisionMaker(f"dm{i}", name=f"DM{i}", reputation=rng.random())
        for i in range(1, spec.dm_count + 1)
    )
    sess = protocol.create_session(
        spec.config(),
        criteria,
        alternatives,
        participants,
        scale=spec.scale,
        session_id=f"sim-{spec.seed}-{replication_index}",
        clock=lambda: "1970-01-01T00:00:00+00:00",
    )
    scale_values = spec.scale.values
    for participant in participants:
        profile = PreferenceProfile(
            dm_id=participant.id,
            criterion_weights={c.id: rng.random() for c in criteria},
            scores={
                c.id: {a.id: rng.choice(scale_values) for a in alternatives}
                for c in criteria
            },
        )
        protocol.submit_preferences(sess, participant.id, profile)
    return sess


def apply_strategy(
    strategy: AgentStrategy,
    own_profile: PreferenceProfile,
    sdm_profile: PreferenceProfile,
    rng: random.Random | None = None,
) -> PreferenceProfile:
    """Revised profile for one flagged decision maker."""
    if set(own_profile.criterion_weights) != set(sdm_profile.criterion_weights) or set(
        own_profile.scores
    ) != set(sdm_profile.scores):
        raise ValidationError("profiles cover different criteria")
    for c in own_profile.scores:
        if set(own_profile.scores[c]) != set(sdm_profile.scores[c]):
            raise ValidationError("profiles cover different alternatives")

    if strategy.kind is StrategyKind.STUBBORN:
        return own_profile

    if strategy.kind is StrategyKind.NOISY and rng is None:
        raise ValidationError("noisy strategy needs a random source")

    def move(own: float, target: float) -> float:
        value = own + strategy.step * (target - own)
        if strategy.kind is StrategyKind.NOISY:
            value += rng.uniform(-strategy.sigma, strategy.sigma)
            value = min(1.0, max(0.0, value))
        return value

    weights = {
        c: move(own_profile.criterion_weights[c], sdm_profile.criterion_weights[c])
        for c in own_profile.criterion_weights
    }
    scores = {
        c: {
            a: move(own_profile.scores[c][a], sdm_profile.scores[c][a])
            for a in own_profile.scores[c]
        }
        for c in own_profile.scores
    }
    return PreferenceProfile(
        dm_id=own_profile.dm_id, criterion_weights=weights, scores=scores
    )


def run_replication(spec: SimulationSpec, replication_index: int) -> ReplicationResult:
    """Drive one session through revision rounds until majority or the limit."""
    rng = _substream(spec.seed, replication_index, "revise")
    sess = generate_instance(spec, replication_index)
    strategy_by_dm = {
        f"dm{i}": strategy for i, strategy in enumerate(spec.strategies, start=1)
    }
    converged = False
    while sess.round < spec.max_rounds:
        report = protocol.compute_round(sess)
        if report.all_majority:
            converged = True
            break
        if sess.round >= spec.max_rounds:
            break
        sdm_profile = sess.profiles[sess.sdm_id]
        for dm_id in report.must_revise:
            revised = apply_strategy(
                strategy_by_dm[dm_id], sess.profiles[dm_id], sdm_profile, rng
            )
            protocol.revise_preferences(sess, dm_id, revised)
    result = protocol.finalize(sess)
    return ReplicationResult(
        index=replication_index,
        converged=converged,
        rounds_used=sess.round,
        ranking=result.ranking,
    )


def summarize(results: Sequence[ReplicationResult]) -> SimulationSummary:
    """Aggregate statistics over replication results."""
    if not results:
        raise ValidationError("cannot summarize zero replications")
    rounds = [r.rounds_used for r in results]
    histogram: dict[int, int] = {}
    for value in sorted(rounds):
        histogram[value] = histogram.get(value, 0) + 1
    return SimulationSummary(
        replications=tuple(results),
        convergence_rate=sum(r.converged for r in results) / len(results),
        mean_rounds=statistics.fmean(rounds),
        median_rounds=float(statistics.median(rounds)),
        rounds_histogram=histogram,
    )


def run_simulation(spec: SimulationSpec, workers: int = 1) -> SimulationSummary:
    """All replications, merged in index order; identical output for any worker count."""
    indices = range(spec.replications)
    with warnings.catch_warnings():
        # Uniform random weights routinely sum above 1; the diagnostic is
        # for human-entered profiles, not synthetic populations.
        warnings.simplefilter("ignore", WeightSumWarning)
        if workers <= 1:
            results = [run_replication(spec, i) for i in indices]
        else:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                results = list(pool.map(lambda i: run_replication(spec, i), indices))
    return summarize(results)


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------


def strategy_to_document(strategy: AgentStrategy) -> dict:
    doc: dict = {"kind": strategy.kind.value}
    if strategy.kind in (StrategyKind.CONFORMIST, StrategyKind.NOISY):
        doc["step"] = strategy.step
    if strategy.kind is StrategyKind.NOISY:
        doc["sigma"] = strategy.sigma
    return doc


def strategy_from_document(doc: Mapping) -> AgentStrategy:
    try:
        kind = StrategyKind(doc["kind"])
    except (KeyError, ValueError) as exc:
        raise ValidationError(f"invalid strategy: {exc}") from exc
    if kind is StrategyKind.STUBBORN:
        return AgentStrategy.stubborn()
    if kind is StrategyKind.CONFORMIST:
        return AgentStrategy.conformist(step=float(doc.get("step", 1.0)))
    return AgentStrategy.noisy(
        sigma=float(doc.get("sigma", 0.0)), step=float(doc.get("step", 0.5))
    )


def spec_to_document(spec: SimulationSpec) -> dict:
    return {
        "dm_count": spec.dm_count,
        "alternative_count": spec.alternative_count,
        "criterion_count": spec.criterion_count,
        "consensus_level": spec.consensus_level,
        "strategies": [strategy_to_document(s) for s in spec.strategies],
        "seed": spec.seed,
        "replications": spec.replications,
        "max_rounds": spec.max_rounds,
        "social_mode": spec.social_mode.value,
        "scale": [[label, value] for label, value in spec.scale.levels],
    }


def spec_from_document(doc: Mapping) -> SimulationSpec:
    """Parse a spec document; ``strategies`` may be one object applied to all."""
    try:
        dm_count = int(doc["dm_count"])
        strategies_doc = doc["strategies"]
        if isinstance(strategies_doc, Mapping):
            strategies = tuple(
                strategy_from_document(strategies_doc) for _ in range(dm_count)
            )
        else:
            strategies = tuple(strategy_from_document(s) for s in strategies_doc)
        scale_doc = doc.get("scale")
        scale = (
            ScoreScale(
                levels=tuple((str(l), float(v)) for l, v in scale_doc)
            )
            if scale_doc
            else ScoreScale()
        )
        return SimulationSpec(
            dm_count=dm_count,
            alternative_count=int(doc["alternative_count"]),
            criterion_count=int(doc["criterion_count"]),
            consensus_level=float(doc["consensus_level"]),
            strategies=strategies,
            seed=int(doc["seed"]),
            replications=int(doc["replications"]),
            max_rounds=int(doc.get("max_rounds", 10)),
            social_mode=SocialWeightMode(doc.get("social_mode", "worked")),
            scale=scale,
        )
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, ValidationError):
            raise
        raise ValidationError(f"invalid simulation spec: {exc}") from exc


def summary_to_document(summary: SimulationSummary, spec: SimulationSpec) -> dict:
    return {
        "spec": spec_to_document(spec),
        "replications": [
            {
                "index": r.index,
                "converged": r.converged,
                "rounds_used": r.rounds_used,
                "ranking": list(r.ranking),
                "top": r.top,
            }
            for r in summary.replications
        ],
        "convergence_rate": summary.convergence_rate,
        "mean_rounds": summary.mean_rounds,
        "median_rounds": summary.median_rounds,
        "rounds_histogram": {str(k): v for k, v in summary.rounds_histogram.items()},
    }


def summary_json(summary: SimulationSummary, spec: SimulationSpec) -> str:
    """Canonical JSON text; byte-identical for identical specs."""
    return json.dumps(summary_to_document(summary, spec), indent=2, sort_keys=True) + "\n"


def summary_csv(summary: SimulationSummary) -> str:
    """One row per replication: index, converged, rounds_used, top alternative."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["index", "converged", "rounds_used", "top"])
    for r in summary.replications:
        writer.writerow([r.index, str(r.converged).lower(), r.rounds_used, r.top])
    return buffer.getvalue()
