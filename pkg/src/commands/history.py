from commands.output import EXIT_OK, at_least, emit, format_table
from database.connection import get_db
from schemas.report import HistoryReport, RunSummary
from services.report_store import ReportStore


def register(sub, common) -> None:
    parser = sub.add_parser(
        "history",
        parents=[common],
        help="Show recorded verification runs, newest first",
    )
    parser.add_argument("--limit", type=at_least(1), default=10)
    parser.add_argument("--skip", type=at_least(0), default=0)
    parser.add_argument("--failed-only", action="store_true", help="Only runs that did not pass")
    parser.set_defaults(handler=run)


def render(report: HistoryReport) -> str:
    rows = [
        [
            str(run.id),
            run.created_at.isoformat(timespec="seconds") if run.created_at else "-",
            run.source or "-",
            str(run.dimension),
            str(run.total_qudits),
            "PASS" if run.passed else "FAIL",
            f"{run.max_fidelity_deviation:.2e}",
        ]
        for run in report.runs
    ]
    summary = report.summary
    lines = [
        format_table(["id", "recorded", "source", "D", "qudits", "result", "fidelity dev"], rows),
        "",
        f"showing {len(report.runs)} of {report.total}; ledger holds {summary.total_runs} runs "
        f"({summary.passed} passed, {summary.failed} failed)",
    ]
    return "\n".join(lines)


def run(args) -> int:
    with get_db() as db:
        total, runs = ReportStore.list_runs(
            db,
            skip=args.skip,
            limit=args.limit,
            passed=False if args.failed_only else None,
        )
        report = HistoryReport(
            total=total,
            runs=[RunSummary.model_validate(run) for run in runs],
            summary=ReportStore.summarize(db),
        )
    emit(report, args.json, render)
    return EXIT_OK
