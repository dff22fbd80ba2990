import logging

from commands.output import EXIT_OK, EXIT_VERIFICATION_FAILED, at_least, emit, format_table
from core.config import get_settings
from core.exceptions import ScenarioError
from database.connection import get_db
from schemas.report import CampaignReport, CampaignRun
from services.oracle_harness import ScenarioLimits, run_campaign
from services.report_store import ReportStore

logger = logging.getLogger(__name__)


def register(sub, common) -> None:
    parser = sub.add_parser(
        "campaign",
        parents=[common],
        help="Verify randomly drawn scenarios, one per seed",
    )
    parser.add_argument("--count", type=at_least(1), default=100, help="Number of scenarios (default: 100)")
    parser.add_argument("--seed", type=at_least(0), default=0, help="First seed; seeds run consecutively")
    parser.add_argument("--min-dimension", type=at_least(2), default=2)
    parser.add_argument("--max-dimension", type=at_least(2), default=3)
    parser.add_argument("--min-systems", type=at_least(1), default=1)
    parser.add_argument("--max-systems", type=at_least(1), default=3)
    parser.add_argument("--max-qudits", type=at_least(2), default=8, help="Cap on total qudits per scenario")
    parser.add_argument("--workers", type=at_least(1), default=None, help="Worker processes (default: settings)")
    parser.add_argument("--record", action="store_true", help="Store every run in the verification ledger")
    parser.set_defaults(handler=run)


def render(report: CampaignReport) -> str:
    rows = [
        [
            str(run.seed),
            str(run.scenario.dimension),
            " (x) ".join(system.text for system in run.scenario.systems),
            str(run.summary.feasible_count),
            "PASS" if run.summary.passed else "FAIL",
        ]
        for run in report.runs
    ]
    passed = len(report.runs) - len(report.failed_seeds)
    lines = [format_table(["seed", "D", "systems", "feasible", "result"], rows), ""]
    lines.append(f"{passed} of {len(report.runs)} scenarios passed")
    if report.failed_seeds:
        lines.append("failed seeds: " + ", ".join(str(seed) for seed in report.failed_seeds))
    return "\n".join(lines)


def run(args) -> int:
    limits = ScenarioLimits(
        min_dimension=args.min_dimension,
        max_dimension=args.max_dimension,
        min_systems=args.min_systems,
        max_systems=args.max_systems,
        max_total_qudits=args.max_qudits,
        max_amplitudes=get_settings().max_amplitudes,
    )
    if limits.max_dimension < limits.min_dimension or limits.max_systems < limits.min_systems:
        raise ScenarioError("campaign limits describe an empty range")

    seeds = list(range(args.seed, args.seed + args.count))
    reports = run_campaign(seeds, limits, workers=args.workers)
    runs = [CampaignRun(seed=seed, scenario=r.scenario, summary=r.summary) for seed, r in zip(seeds, reports)]
    failed = [run.seed for run in runs if not run.summary.passed]

    if args.record:
        with get_db() as db:
            for seed, report in zip(seeds, reports):
                ReportStore.record(db, report, source=f"seed:{seed}")
    if failed:
        logger.warning("campaign: %d of %d scenarios failed", len(failed), len(runs))

    emit(CampaignReport(passed=not failed, failed_seeds=failed, runs=runs), args.json, render)
    return EXIT_VERIFICATION_FAILED if failed else EXIT_OK
