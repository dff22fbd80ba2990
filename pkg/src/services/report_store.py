import hashlib
import logging
from typing import List, Optional, Tuple

from sqlalchemy.orm import Session

from core.config import PROBABILITY_FLOOR, VERIFICATION_TOLERANCE
from models.verification import LabelFailure, VerificationRun
from schemas.report import HistorySummary, ScenarioDescriptor, VerificationReport

logger = logging.getLogger(__name__)


class ReportStore:
    """Ledger of verification runs"""

    @staticmethod
    def scenario_hash(descriptor: ScenarioDescriptor) -> str:
        """SHA256 of the canonical scenario JSON"""
        return hashlib.sha256(descriptor.model_dump_json().encode()).hexdigest()

    @staticmethod
    def record(db: Session, report: VerificationReport, source: Optional[str] = None) -> VerificationRun:
        summary = report.summary
        run = VerificationRun(
            scenario_hash=ReportStore.scenario_hash(report.scenario),
            source=source,
            dimension=report.scenario.dimension,
            system_count=len(report.scenario.systems),
            total_qudits=sum(len(system.k) + 1 for system in report.scenario.systems),
            label_count=summary.label_count,
            feasible_count=summary.feasible_count,
            passed=summary.passed,
            max_fidelity_deviation=summary.max_fidelity_deviation,
            max_probability_deviation=summary.max_probability_deviation,
            wall_time_seconds=summary.wall_time_seconds,
        )
        for record in report.records:
            if record.feasible:
                failed = (
                    record.fidelity is None
                    or abs(1.0 - record.fidelity) > VERIFICATION_TOLERANCE
                    or abs(record.oracle_probability - summary.expected_probability) > VERIFICATION_TOLERANCE
                )
            else:
                failed = record.oracle_probability > PROBABILITY_FLOOR
            if failed:
                run.failures.append(
                    LabelFailure(
                        label=record.label.text,
                        feasible=record.feasible,
                        probability=record.oracle_probability,
                        fidelity=record.fidelity,
                    )
                )
        db.add(run)
        db.flush()
        logger.info("recorded run %d (%s) passed=%s", run.id, source or "-", run.passed)
        return run

    @staticmethod
    def list_runs(
        db: Session,
        skip: int = 0,
        limit: int = 10,
        passed: Optional[bool] = None,
    ) -> Tuple[int, List[VerificationRun]]:
        query = db.query(VerificationRun)
        if passed is not None:
            query = query.filter(VerificationRun.passed == passed)
        total = query.count()
        runs = query.order_by(VerificationRun.id.desc()).offset(skip).limit(limit).all()
        return total, runs

    @staticmethod
    def summarize(db: Session) -> HistorySummary:
        runs = db.query(VerificationRun).all()
        if not runs:
            return HistorySummary(total_runs=0)

        by_dimension = {}
        for run in runs:
            by_dimension[run.dimension] = by_dimension.get(run.dimension, 0) + 1
        passed = sum(1 for run in runs if run.passed)
        dates = [run.created_at for run in runs if run.created_at]
        return HistorySummary(
            total_runs=len(runs),
            passed=passed,
            failed=len(runs) - passed,
            by_dimension=dict(sorted(by_dimension.items())),
            mean_wall_time_seconds=sum(run.wall_time_seconds for run in runs) / len(runs),
            first_run_at=min(dates) if dates else None,
            last_run_at=max(dates) if dates else None,
        )
