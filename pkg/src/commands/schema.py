import json
import sys

from commands.output import EXIT_OK
from schemas.report import (
    BasisReport,
    CampaignReport,
    EnumerationReport,
    HistoryReport,
    MeasureReport,
    VerificationReport,
)
from schemas.scenario import ScenarioFile

DOCUMENTS = {
    "scenario": ScenarioFile,
    "verification": VerificationReport,
    "measurement": MeasureReport,
    "enumeration": EnumerationReport,
    "basis": BasisReport,
    "campaign": CampaignReport,
    "history": HistoryReport,
}


def register(sub, common) -> None:
    parser = sub.add_parser(
        "schema",
        parents=[common],
        help="Print the JSON Schema of the scenario file or of a report",
    )
    parser.add_argument("document", choices=sorted(DOCUMENTS))
    parser.set_defaults(handler=run)


def run(args) -> int:
    schema = DOCUMENTS[args.document].model_json_schema()
    sys.stdout.write(json.dumps(schema, indent=2) + "\n")
    return EXIT_OK
