import numpy as np

from commands.output import EXIT_OK, at_least, emit, format_table
from schemas.report import BasisEntry, BasisReport, LabelModel
from services.gbell import enumerate_basis, make_entangled


def register(sub, common) -> None:
    parser = sub.add_parser(
        "dump-basis",
        parents=[common],
        help="List the generalized Bell basis of M qudits of dimension D",
    )
    parser.add_argument("--dimension", type=at_least(2), required=True)
    parser.add_argument("--particles", type=at_least(1), required=True)
    parser.set_defaults(handler=run)


def render(report: BasisReport) -> str:
    rows = []
    for entry in report.entries:
        kets = " + ".join(
            f"({re:+.6f}{im:+.6f}i)|{''.join(str(d) for d in digits)}>"
            for digits, (re, im) in zip(entry.support, entry.amplitudes)
        )
        rows.append([entry.label.text, kets])
    header = f"generalized Bell basis: D={report.dimension}, M={report.particles}, {len(report.entries)} states"
    return header + "\n\n" + format_table(["label", "state"], rows)


def run(args) -> int:
    shape = (args.dimension,) * args.particles
    entries = []
    for label in enumerate_basis(args.dimension, args.particles):
        state = make_entangled(label.as_spec())
        support = np.flatnonzero(np.abs(state.amplitudes) > 0.0)
        entries.append(BasisEntry(
            label=LabelModel.from_label(label),
            support=[[int(d) for d in np.unravel_index(index, shape)] for index in support],
            amplitudes=[(float(state.amplitudes[i].real), float(state.amplitudes[i].imag)) for i in support],
        ))
    emit(BasisReport(dimension=args.dimension, particles=args.particles, entries=entries), args.json, render)
    return EXIT_OK
