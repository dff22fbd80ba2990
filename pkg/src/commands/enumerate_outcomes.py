from pathlib import Path

from commands.output import EXIT_OK, describe_scenario, emit, format_probability, format_table
from core.config import get_settings
from schemas.report import AmplitudeDump, DistributionRow, EnumerationReport, LabelModel, SpecModel
from services.measurement import collapse_all, unmeasured_particles
from services.scenario_loader import build_layout, load_scenario
from services.swap_predict import predict_general


def register(sub, common) -> None:
    parser = sub.add_parser(
        "enumerate",
        parents=[common],
        help="Print the full outcome distribution with feasibility and predictions",
    )
    parser.add_argument("path", type=Path, help="Scenario file (JSON)")
    parser.add_argument("--dump-state", action="store_true", help="Include post-measurement amplitudes per feasible label")
    parser.set_defaults(handler=run)


def render(report: EnumerationReport) -> str:
    rows = [
        [
            row.label.text,
            format_probability(row.probability),
            "yes" if row.feasible else "no",
            row.predicted.text if row.predicted else "-",
        ]
        for row in report.rows
    ]
    kept = ", ".join(str(p) for p in report.unmeasured) if report.unmeasured else "none (empty record)"
    return "\n".join([
        describe_scenario(report.scenario),
        f"unmeasured particles: {kept}",
        f"feasible: {report.feasible_count} of {len(report.rows)}  "
        f"total probability: {format_probability(report.total_probability)}",
        "",
        format_table(["label", "probability", "feasible", "predicted"], rows),
    ])


def run(args) -> int:
    scenario = load_scenario(args.path)
    layout = build_layout(scenario)
    state = layout.composite()
    spec = layout.measurement_spec()
    outcomes = collapse_all(state, spec, max_amplitudes=get_settings().max_amplitudes)
    canonical = layout.canonical()

    rows = []
    for outcome in outcomes:
        prediction = None
        if canonical is not None and outcome.feasible:
            prediction = predict_general(canonical, outcome.label)
        rows.append(DistributionRow(
            label=LabelModel.from_label(outcome.label),
            probability=outcome.probability if outcome.feasible else 0.0,
            feasible=outcome.feasible,
            predicted=SpecModel.from_spec(prediction.result) if prediction is not None else None,
            post_state=AmplitudeDump.from_state(outcome.post_state) if args.dump_state and outcome.post_state else None,
        ))

    report = EnumerationReport(
        scenario=layout.descriptor(),
        unmeasured=unmeasured_particles(state.num_qudits, spec),
        total_probability=sum(outcome.probability for outcome in outcomes),
        feasible_count=sum(row.feasible for row in rows),
        rows=rows,
    )
    emit(report, args.json, render)
    return EXIT_OK
