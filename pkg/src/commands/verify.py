from pathlib import Path

from commands.output import (
    EXIT_OK,
    EXIT_VERIFICATION_FAILED,
    describe_scenario,
    emit,
    format_optional,
    format_probability,
    format_table,
)
from core.config import get_settings
from database.connection import get_db
from schemas.report import VerificationReport
from services.oracle_harness import ModularTerm, perturbed_predictor, verify_layout
from services.report_store import ReportStore
from services.scenario_loader import build_layout, load_scenario
from services.swap_predict import predict_general


def register(sub, common) -> None:
    parser = sub.add_parser(
        "verify",
        parents=[common],
        help="Check every outcome of a scenario against the closed-form prediction",
    )
    parser.add_argument("path", type=Path, help="Scenario file (JSON)")
    parser.add_argument("--record", action="store_true", help="Store the run in the verification ledger")
    parser.add_argument(
        "--negative-control",
        choices=[term.value for term in ModularTerm],
        default=None,
        help="Shift one modular term of the predictor by one; the run is expected to fail",
    )
    parser.set_defaults(handler=run)


def render(report: VerificationReport) -> str:
    summary = report.summary
    rows = [
        [
            record.label.text,
            format_probability(record.oracle_probability),
            record.predicted.text if record.predicted else "-",
            format_optional(record.fidelity),
        ]
        for record in report.records
        if record.feasible
    ]
    lines = [
        describe_scenario(report.scenario),
        f"labels: {summary.label_count}  feasible: {summary.feasible_count}  "
        f"expected p: {format_probability(summary.expected_probability)}",
        f"total probability: {format_probability(summary.total_probability)}",
        f"max fidelity deviation: {summary.max_fidelity_deviation:.3e}  "
        f"max probability deviation: {summary.max_probability_deviation:.3e}",
        "",
        format_table(["label", "probability", "predicted", "fidelity"], rows),
        "",
        f"result: {'PASS' if summary.passed else 'FAIL'} ({summary.wall_time_seconds:.3f} s)",
    ]
    return "\n".join(lines)


def run(args) -> int:
    scenario = load_scenario(args.path)
    layout = build_layout(scenario)
    predictor = perturbed_predictor(ModularTerm(args.negative_control)) if args.negative_control else predict_general
    report = verify_layout(layout, predictor, max_amplitudes=get_settings().max_amplitudes)
    if args.record:
        with get_db() as db:
            ReportStore.record(db, report, source=str(args.path))
    emit(report, args.json, render)
    return EXIT_OK if report.summary.passed else EXIT_VERIFICATION_FAILED
