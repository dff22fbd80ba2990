from pathlib import Path

from commands.output import EXIT_OK, at_least, describe_scenario, emit, format_optional, format_probability
from core.config import get_settings
from core.exceptions import ScenarioError
from schemas.report import AmplitudeDump, LabelModel, MeasureReport, SpecModel
from schemas.scenario import SEED_MAX
from services.gbell import make_entangled
from services.measurement import project, sample
from services.qudit_state import fidelity_up_to_phase
from services.scenario_loader import build_layout, load_scenario, outcome_label
from services.swap_predict import predict_general


def register(sub, common) -> None:
    parser = sub.add_parser(
        "measure",
        parents=[common],
        help="Measure a scenario: the file's explicit outcome, or a seeded sample",
    )
    parser.add_argument("path", type=Path, help="Scenario file (JSON)")
    parser.add_argument(
        "--seed", type=at_least(0, SEED_MAX), default=None, help="Sampling seed, overrides the file's seed"
    )
    parser.add_argument("--dump-state", action="store_true", help="Include the post-measurement amplitudes")
    parser.set_defaults(handler=run)


def render(report: MeasureReport) -> str:
    lines = [
        describe_scenario(report.scenario),
        f"mode: {report.mode}" + (f" (seed {report.seed})" if report.seed is not None else ""),
        f"outcome: {report.label.text}",
        f"feasible: {str(report.feasible).lower()}",
        f"probability: {format_probability(report.probability)}",
        f"predicted: {report.predicted.text if report.predicted else '-'}",
        f"fidelity: {format_optional(report.fidelity)}",
    ]
    if report.post_state is not None:
        lines.append(f"post state ({report.post_state.num_qudits} qudits):")
        lines.extend(f"  {index}: {re:+.12f} {im:+.12f}i" for index, (re, im) in enumerate(report.post_state.amplitudes))
    return "\n".join(lines)


def run(args) -> int:
    scenario = load_scenario(args.path)
    layout = build_layout(scenario)
    state = layout.composite()
    spec = layout.measurement_spec()
    label = outcome_label(scenario)

    seed = None
    if label is None:
        seed = args.seed if args.seed is not None else scenario.seed
        if seed is None:
            raise ScenarioError("a seed is required to sample an outcome (scenario 'seed' or --seed)")
        result = sample(state, spec, seed, max_amplitudes=get_settings().max_amplitudes)
    else:
        result = project(state, spec, label)

    canonical = layout.canonical()
    prediction = predict_general(canonical, result.label) if canonical is not None else None
    fidelity = None
    if prediction is not None and result.post_state is not None:
        fidelity = fidelity_up_to_phase(result.post_state, make_entangled(prediction.result))

    report = MeasureReport(
        scenario=layout.descriptor(),
        mode="explicit" if label is not None else "sampled",
        seed=seed,
        label=LabelModel.from_label(result.label),
        feasible=result.feasible,
        probability=result.probability if result.feasible else 0.0,
        predicted=SpecModel.from_spec(prediction.result) if prediction is not None else None,
        fidelity=fidelity,
        post_state=AmplitudeDump.from_state(result.post_state) if args.dump_state and result.post_state else None,
    )
    emit(report, args.json, render)
    return EXIT_OK
