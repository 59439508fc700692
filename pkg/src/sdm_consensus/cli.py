"""Command-line front door.

Subcommands: ``demo`` (bundled scenario with golden checks), ``evaluate``,
``round``, ``finalize``, ``report`` (session files), and ``simulate``
(synthetic-agent harness). Data goes to stdout, diagnostics to stderr.

Exit codes: 0 success, 1 golden-check failure, 2 I/O error, 3 validation or
protocol error. ``SDM_CONSENSUS_OUT_DIR`` sets the default output directory
for simulation artifacts.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import core, demo
from . import session as protocol
from . import simulate as sim
from .errors import ConsensusError
from .model import SocialWeightMode
from .session import SessionState

EXIT_OK = 0
EXIT_CHECK_FAILURE = 1
EXIT_IO = 2
EXIT_VALIDATION = 3

OUT_DIR_ENV = "SDM_CONSENSUS_OUT_DIR"


class _Parser(argparse.ArgumentParser):
    """Argument errors exit with the validation status code."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_VALIDATION)


def _fmt(value: float, places: int = 3) -> str:
    return f"{value:.{places}f}"


def _render_table(headers: list[str], rows: list[list[str]]) -> str:
    widths = [len(h) for h in headers]
    for row in rows:
        for i, cell in enumerate(row):
            widths[i] = max(widths[i], len(cell))
    lines = [
        "  ".join(h.ljust(widths[i]) for i, h in enumerate(headers)).rstrip(),
        "  ".join("-" * widths[i] for i in range(len(headers))),
    ]
    for row in rows:
        lines.append("  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)).rstrip())
    return "\n".join(lines)


def _report_rows(report: protocol.RoundReport, alt_ids) -> list[list[str]]:
    rows = []
    for alt in alt_ids:
        for dm_id, assessment in report.assessments.items():
            cell = assessment.per_alternative[alt]
            rows.append(
                [
                    alt,
                    dm_id,
                    _fmt(cell.distance),
                    "consensus" if cell.in_consensus else _fmt(cell.excess),
                    _fmt(cell.weight),
                ]
            )
    return rows


def _print_report(report: protocol.RoundReport, session: SessionState) -> None:
    alt_ids = [a.id for a in session.alternatives]
    print(f"Round {report.round}: distances and weights vs SDM ({session.sdm_id})")
    print(
        _render_table(
            ["alternative", "dm", "distance", "over max", "weight"],
            _report_rows(report, alt_ids),
        )
    )
    threshold = core.majority_threshold(len(alt_ids))
    for dm_id, assessment in report.assessments.items():
        status = "majority" if assessment.majority_reached else "below majority"
        print(
            f"{dm_id}: {assessment.consensus_count}/{len(alt_ids)} in consensus "
            f"(need {threshold}) -> {status}"
        )
    if report.must_revise:
        print(f"must revise: {', '.join(report.must_revise)}")
    else:
        print("all participants at majority consensus")


def _print_result(result, session: SessionState) -> None:
    alt_ids = [a.id for a in session.alternatives]
    dm_ids = [p.id for p in session.participants]
    headers = ["alternative", *dm_ids, "total", "rank"]
    position = {alt: i + 1 for i, alt in enumerate(result.ranking)}
    rows = []
    for alt in alt_ids:
        rows.append(
            [
                alt,
                *[_fmt(result.contributions[dm][alt]) for dm in dm_ids],
                _fmt(result.totals[alt]),
                str(position[alt]),
            ]
        )
    print("Aggregation (weighted contributions per participant)")
    print(_render_table(headers, rows))
    print("ranking: " + " > ".join(result.ranking))
    if result.forced:
        print("note: forced finalize at the round limit with unresolved dissent")


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def _cmd_demo(args) -> int:
    mode = SocialWeightMode(args.mode)
    run = demo.run_demo(mode)
    if args.format == "json":
        document = {
            "mode": mode.value,
            "session": protocol.session_to_document(run.session),
            "rounds": [
                protocol.round_report_to_document(r) for r in (run.round1, run.round2)
            ],
            "result": protocol.aggregation_to_document(run.result),
            "checks": [
                {
                    "name": c.name,
                    "expected": c.expected,
                    "actual": c.actual,
                    "tolerance": c.tolerance,
                    "ok": c.ok,
                }
                for c in run.checks
            ],
            "ok": run.ok,
        }
        print(json.dumps(document, indent=2))
    else:
        session = run.session
        print(
            f"Demo: rank five community projects, three criteria, "
            f"consensus level {demo.CONSENSUS_LEVEL:.2f} "
            f"(max distance {session.config.max_distance:.2f})"
        )
        print(f"SDM: {session.sdm_id} (highest reputation); mode: {mode.value}")
        if mode is SocialWeightMode.LITERAL:
            print(
                "note: level-scaled weighting in effect; weight and total columns "
                "differ from the default worked-mode tables"
            )
        print()
        _print_report(run.round1, session)
        print()
        print("dm2 revises; recomputing...")
        print()
        _print_report(run.round2, session)
        print()
        _print_result(run.result, session)
        print()
        failed = [c for c in run.checks if not c.ok]
        for check in failed:
            print(
                f"CHECK FAILED: {check.name}: expected {check.expected!r}, "
                f"got {check.actual!r}"
                + (f" (tolerance {check.tolerance})" if check.tolerance else ""),
                file=sys.stderr,
            )
        print(f"golden checks: {len(run.checks) - len(failed)}/{len(run.checks)} passed")
    return EXIT_OK if run.ok else EXIT_CHECK_FAILURE


def _load_session(path: str) -> SessionState:
    return protocol.read_session_file(path)


def _cmd_evaluate(args) -> int:
    session = _load_session(args.session)
    alt_ids = [a.id for a in session.alternatives]
    vectors = {}
    pending = []
    for participant in session.participants:
        profile = session.profiles.get(participant.id)
        if profile is None:
            pending.append(participant.id)
        else:
            vectors[participant.id] = core.evaluate(
                profile, session.criteria, session.alternatives
            )
    if args.format == "json":
        print(
            json.dumps(
                {
                    "session_id": session.session_id,
                    "evaluations": {
                        dm: dict(v.values) for dm, v in vectors.items()
                    },
                    "pending": pending,
                },
                indent=2,
            )
        )
        return EXIT_OK
    print(f"Evaluations for session {session.session_id}")
    rows = [
        [dm, *[_fmt(v.values[a]) for a in alt_ids]] for dm, v in vectors.items()
    ]
    print(_render_table(["dm", *alt_ids], rows))
    if pending:
        print(f"pending submissions: {', '.join(pending)}")
    return EXIT_OK


def _cmd_round(args) -> int:
    session = _load_session(args.session)
    report = protocol.compute_round(session)
    protocol.write_session_file(session, args.session)
    if args.format == "json":
        print(json.dumps(protocol.round_report_to_document(report), indent=2))
    else:
        _print_report(report, session)
    return EXIT_OK


def _cmd_finalize(args) -> int:
    session = _load_session(args.session)
    result = protocol.finalize(session)
    protocol.write_session_file(session, args.session)
    if args.format == "json":
        print(json.dumps(protocol.aggregation_to_document(result), indent=2))
    else:
        _print_result(result, session)
    return EXIT_OK


def _cmd_report(args) -> int:
    session = _load_session(args.session)
    if args.format == "json":
        print(json.dumps(protocol.session_to_document(session), indent=2))
        return EXIT_OK
    config = session.config
    print(f"Session {session.session_id} [{session.status.value}]")
    print(
        f"consensus level {config.consensus_level} "
        f"(max distance {_fmt(config.max_distance)}), "
        f"mode {config.social_mode.value}, round {session.round}/{config.max_rounds}"
    )
    rows = [
        [
            p.id,
            p.name,
            p.role.value,
            _fmt(p.reputation),
            "yes" if p.id in session.profiles else "no",
        ]
        for p in session.participants
    ]
    print(_render_table(["id", "name", "role", "reputation", "submitted"], rows))
    if session.profiles.get(session.sdm_id) is not None:
        sdm_vector = core.evaluate(
            session.profiles[session.sdm_id], session.criteria, session.alternatives
        )
        diag_rows = []
        for dm_id in session.non_sdm_ids:
            profile = session.profiles.get(dm_id)
            if profile is None:
                continue
            vector = core.evaluate(profile, session.criteria, session.alternatives)
            diag_rows.append([dm_id, _fmt(core.rms_distance(vector, sdm_vector))])
        if diag_rows:
            print()
            print("Whole-profile RMS distance to SDM (diagnostic)")
            print(_render_table(["dm", "rms distance"], diag_rows))
    for report in session.history:
        print()
        _print_report(report, session)
    if session.result is not None:
        print()
        _print_result(session.result, session)
    return EXIT_OK


def _cmd_simulate(args) -> int:
    with open(args.spec, "r", encoding="utf-8") as handle:
        document = json.load(handle)
    if args.seed is not None:
        document["seed"] = args.seed
    if args.replications is not None:
        document["replications"] = args.replications
    spec = sim.spec_from_document(document)
    summary = sim.run_simulation(spec, workers=args.workers)

    out_path = Path(args.out) if args.out else (
        Path(os.environ.get(OUT_DIR_ENV, ".")) / f"simulation-{spec.seed}.json"
    )
    out_path.parent.mkdir(parents=True, exist_ok=True)
    out_path.write_text(sim.summary_json(summary, spec), encoding="utf-8")
    written = [str(out_path)]
    if args.csv:
        csv_path = out_path.with_suffix(".csv")
        csv_path.write_text(sim.summary_csv(summary), encoding="utf-8")
        written.append(str(csv_path))

    print(f"replications: {spec.replications}")
    print(f"convergence rate: {summary.convergence_rate:.3f}")
    print(
        f"rounds: mean {summary.mean_rounds:.2f}, median {summary.median_rounds:.1f}"
    )
    print("rounds histogram:")
    total = len(summary.replications)
    for rounds, count in summary.rounds_histogram.items():
        bar = "#" * max(1, round(40 * count / total))
        print(f"  {rounds:>3}: {count:>5}  {bar}")
    print("wrote: " + ", ".join(written), file=sys.stderr)
    return EXIT_OK


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------


def build_parser() -> _Parser:
    parser = _Parser(
        prog="sdm-consensus",
        description="SDM-anchored group consensus engine",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_demo = sub.add_parser("demo", help="run the bundled scenario with golden checks")
    p_demo.add_argument(
        "--mode",
        choices=[m.value for m in SocialWeightMode],
        default=SocialWeightMode.WORKED.value,
        help="social weighting variant (default: worked)",
    )
    p_demo.add_argument("--format", choices=["table", "json"], default="table")

    for name, help_text in [
        ("evaluate", "print evaluation vectors for a session file"),
        ("round", "compute the next round and update the session file in place"),
        ("finalize", "aggregate and freeze a session file"),
        ("report", "print a full session report"),
    ]:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--session", required=True, help="path to a session JSON file")
        p.add_argument("--format", choices=["table", "json"], default="table")

    p_sim = sub.add_parser("simulate", help="run the synthetic-agent harness")
    p_sim.add_argument("--spec", required=True, help="path to a simulation spec JSON file")
    p_sim.add_argument("--seed", type=int, default=None, help="override the spec seed")
    p_sim.add_argument(
        "--replications", type=int, default=None, help="override the replication count"
    )
    p_sim.add_argument("--out", default=None, help="summary JSON path")
    p_sim.add_argument(
        "--csv", action="store_true", help="also write a per-replication CSV"
    )
    p_sim.add_argument(
        "--workers", type=int, default=1, help="parallel replication workers"
    )
    return parser


_HANDLERS = {
    "demo": _cmd_demo,
    "evaluate": _cmd_evaluate,
    "round": _cmd_round,
    "finalize": _cmd_finalize,
    "report": _cmd_report,
    "simulate": _cmd_simulate,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _HANDLERS[args.command](args)
    except (FileNotFoundError, IsADirectoryError, PermissionError) as exc:
        print(f"sdm-consensus: i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    except json.JSONDecodeError as exc:
        print(f"sdm-consensus: invalid JSON: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except ConsensusError as exc:
        print(f"sdm-consensus: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
